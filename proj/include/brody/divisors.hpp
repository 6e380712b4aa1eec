#pragma once

// Counting functions of divisors, the separation and direction hypotheses
// of the non-realizability theorem, and the slow-growth divisor generator.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "brody/complex.hpp"
#include "brody/divisor.hpp"
#include "brody/error.hpp"

namespace brody {

/// sum m log+(r/|a|).
inline double counting_N(const Divisor& d, double r) {
    if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "r must be positive");
    double acc = 0.0;
    for (const auto& p : d.points()) {
        const double x = std::log(r / std::abs(p.a));
        if (x <= 0.0) break;
        acc += p.mult * x;
    }
    return acc;
}

/// sum m over |a| < r.
inline long deg_restricted(const Divisor& d, double r) {
    if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "r must be positive");
    long acc = 0;
    for (const auto& p : d.points()) {
        if (!(std::abs(p.a) < r)) break;
        acc += p.mult;
    }
    return acc;
}

inline void require_reduced(const Divisor& d) {
    if (!d.reduced()) throw Error(ErrorCode::MultiplicityNotOne, "divisor has a point of multiplicity above one");
}

/// min |a_{k+1}|/|a_k|; +inf for a single point.
inline double separation_ratio(const Divisor& d) {
    if (d.empty()) throw Error(ErrorCode::InvalidArgument, "empty divisor");
    require_reduced(d);
    double best = std::numeric_limits<double>::infinity();
    const auto& p = d.points();
    for (std::size_t k = 0; k + 1 < p.size(); ++k) best = std::min(best, std::abs(p[k + 1].a) / std::abs(p[k].a));
    return best;
}

/// Leader clustering of a_k/|a_k| over the last ceil(tail_fraction n)
/// points, in index order; returns the normalized cluster means.
inline std::vector<Complex> direction_accumulation(const Divisor& d, double tail_fraction, double eps) {
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "tail_fraction must lie in (0, 1]");
    }
    if (!(eps > 0.0 && eps < std::numbers::pi / 4.0)) throw Error(ErrorCode::InvalidArgument, "eps must lie in (0, pi/4)");
    const auto& p = d.points();
    const std::size_t n = p.size();
    const auto take = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(n)));
    struct Cluster {
        Complex leader;
        Complex sum;
    };
    std::vector<Cluster> clusters;
    for (std::size_t k = n - std::min(take, n); k < n; ++k) {
        const Complex u = p[k].a / std::abs(p[k].a);
        bool placed = false;
        for (auto& c : clusters) {
            if (std::abs(std::arg(u / c.leader)) <= eps) {
                c.sum += u;
                placed = true;
                break;
            }
        }
        if (!placed) clusters.push_back({u, u});
    }
    std::vector<Complex> out;
    out.reserve(clusters.size());
    for (const auto& c : clusters) out.push_back(std::abs(c.sum) > 0.0 ? c.sum / std::abs(c.sum) : c.leader);
    return out;
}

/// Largest gap between circularly sorted directions (2 pi for one point).
inline double max_angular_gap(const std::vector<Complex>& dirs) {
    if (dirs.empty()) throw Error(ErrorCode::InvalidArgument, "no directions");
    std::vector<double> ang;
    ang.reserve(dirs.size());
    for (const auto& u : dirs) {
        if (std::abs(std::abs(u) - 1.0) > 1e-9) throw Error(ErrorCode::NotUnitModulus, "direction is not unit modulus");
        ang.push_back(std::arg(u));
    }
    std::sort(ang.begin(), ang.end());
    double gap = ang.front() + 2.0 * std::numbers::pi - ang.back();
    for (std::size_t i = 1; i < ang.size(); ++i) gap = std::max(gap, ang[i] - ang[i - 1]);
    return gap;
}

/// 0 lies in the interior of the convex hull iff every angular gap is
/// strictly below pi. A 1e-12 margin rejects antipodal pairs.
inline bool hull_contains_origin(const std::vector<Complex>& dirs) {
    return max_angular_gap(dirs) < std::numbers::pi - 1e-12;
}

struct DivisorVerdict {
    std::optional<double> separation_lambda;
    std::vector<Complex> directions;
    bool hull_ok = false;
    bool non_realizable = false;
    std::string notes;
};

inline DivisorVerdict theorem_verdict(const Divisor& d, double tail_fraction = 0.5, double eps = 0.3) {
    require_reduced(d);
    DivisorVerdict v;
    std::ostringstream notes;
    if (d.size() >= 2) {
        const double lam = separation_ratio(d);
        if (lam > 1.0) v.separation_lambda = lam;
        notes << "separation ratio " << lam << (lam > 1.0 ? " > 1" : " <= 1");
    } else {
        notes << "fewer than two points, separation undefined";
    }
    if (!d.empty()) {
        v.directions = direction_accumulation(d, tail_fraction, eps);
        v.hull_ok = hull_contains_origin(v.directions);
        notes << "; " << v.directions.size() << " directions, max gap " << max_angular_gap(v.directions)
              << (v.hull_ok ? " < pi" : " >= pi");
    }
    v.non_realizable = v.separation_lambda.has_value() && v.hull_ok;
    notes << (v.non_realizable ? "; no Brody function has this zero divisor" : "; hypotheses not met on this truncation");
    v.notes = notes.str();
    return v;
}

// ---------------------------------------------------------------------------
// Growth bounds

class GrowthBound {
public:
    enum class Kind { LogSquared, Log, Power, Table };

    static GrowthBound log_squared(double c) { return GrowthBound(Kind::LogSquared, {c}); }
    static GrowthBound log(double c) { return GrowthBound(Kind::Log, {c}); }
    static GrowthBound power(double c, double alpha) { return GrowthBound(Kind::Power, {c, alpha}); }
    /// Piecewise linear through (t, rho) pairs with strictly increasing t and
    /// rho; constant beyond the ends.
    static GrowthBound table(std::vector<std::pair<double, double>> pts) {
        if (pts.size() < 2) throw Error(ErrorCode::InvalidArgument, "table needs at least two points");
        for (std::size_t i = 1; i < pts.size(); ++i) {
            if (!(pts[i].first > pts[i - 1].first) || !(pts[i].second > pts[i - 1].second)) {
                throw Error(ErrorCode::InvalidArgument, "table must be strictly increasing");
            }
        }
        GrowthBound g(Kind::Table, {});
        g.table_ = std::move(pts);
        return g;
    }

    /// "logsq:c", "log:c", "pow:c:alpha", "table:t1/v1,t2/v2,...".
    static GrowthBound parse(const std::string& src) {
        auto num = [&](const std::string& s) {
            std::size_t used = 0;
            double x = 0.0;
            try {
                x = std::stod(s, &used);
            } catch (const std::logic_error&) {
                used = 0;
            }
            if (used != s.size() || s.empty() || !std::isfinite(x)) {
                throw Error(ErrorCode::ParseError, "bad number '" + s + "' in growth bound");
            }
            return x;
        };
        std::vector<std::string> parts;
        std::stringstream ss(src);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(item);
        if (parts.empty()) throw Error(ErrorCode::ParseError, "empty growth bound");
        const std::string& kind = parts[0];
        if (kind == "logsq" && parts.size() == 2) return log_squared(positive(num(parts[1])));
        if (kind == "log" && parts.size() == 2) return log(positive(num(parts[1])));
        if (kind == "pow" && parts.size() == 3) return power(positive(num(parts[1])), positive(num(parts[2])));
        if (kind == "table" && parts.size() == 2) {
            std::vector<std::pair<double, double>> pts;
            std::stringstream ts(parts[1]);
            while (std::getline(ts, item, ',')) {
                const auto slash = item.find('/');
                if (slash == std::string::npos) throw Error(ErrorCode::ParseError, "table entries are t/value");
                pts.emplace_back(num(item.substr(0, slash)), num(item.substr(slash + 1)));
            }
            return table(std::move(pts));
        }
        throw Error(ErrorCode::ParseError, "unknown growth bound '" + src + "'");
    }

    Kind kind() const noexcept { return kind_; }
    const std::vector<double>& params() const noexcept { return params_; }

    double operator()(double t) const {
        switch (kind_) {
            case Kind::LogSquared: {
                const double l = std::log(t);
                return params_[0] * l * l;
            }
            case Kind::Log: return params_[0] * std::log(t);
            case Kind::Power: return params_[0] * std::pow(t, params_[1]);
            case Kind::Table: {
                if (t <= table_.front().first) return table_.front().second;
                if (t >= table_.back().first) return table_.back().second;
                const auto it = std::upper_bound(table_.begin(), table_.end(), t,
                                                 [](double x, const auto& p) { return x < p.first; });
                const auto& [t1, v1] = *it;
                const auto& [t0, v0] = *(it - 1);
                return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
            }
        }
        return 0.0;
    }

    std::string describe() const {
        std::ostringstream os;
        switch (kind_) {
            case Kind::LogSquared: os << "logsq:" << params_[0]; break;
            case Kind::Log: os << "log:" << params_[0]; break;
            case Kind::Power: os << "pow:" << params_[0] << ':' << params_[1]; break;
            case Kind::Table: os << "table:" << table_.size() << " points"; break;
        }
        return os.str();
    }

private:
    GrowthBound(Kind k, std::vector<double> p) : kind_(k), params_(std::move(p)) {}
    static double positive(double x) {
        if (!(x > 0.0)) throw Error(ErrorCode::InvalidArgument, "growth bound parameters must be positive");
        return x;
    }

    Kind kind_;
    std::vector<double> params_;
    std::vector<std::pair<double, double>> table_;
};

/// rho(t)/log t at t = horizon must be at least 1.25 times its value at
/// sqrt(horizon); a logarithmic rho has a constant ratio and fails.
inline bool superlogarithmic_on_sample(const GrowthBound& rho, double horizon) {
    const double lo = std::sqrt(horizon);
    return rho(horizon) / std::log(horizon) >= 1.25 * (rho(lo) / std::log(lo));
}

/// Smallest power of two r0 >= 1 with k log(8r) <= rho(r) at every sampled
/// r = 2^j >= r0 up to the scan limit. Since rho increases, this gives
/// k log(4r) <= rho(r) on the whole interval [r0, limit]. The scan runs
/// to the horizon and at least 32 doublings past the last failure.
inline double growth_threshold(const GrowthBound& rho, int k, double horizon) {
    const int jh = static_cast<int>(std::ceil(std::log2(std::max(horizon, 1.0))));
    int last_fail = -1;
    for (int j = 0; j <= std::max(jh, last_fail + 33); ++j) {
        if (j > 1000) throw Error(ErrorCode::PreconditionFailed, "no threshold found below 2^1000");
        const double r = std::ldexp(1.0, j);
        if (k * std::log(8.0 * r) > rho(r)) last_fail = j;
    }
    return std::ldexp(1.0, last_fail + 1);
}

/// Golden-ratio conjugate used for the argument sequence.
inline constexpr double kGoldenAngleFraction = 0.6180339887;

struct SlowConstruction {
    Divisor divisor;
    /// R_1 .. R_{count+1}.
    std::vector<double> thresholds;
};

/// c_1..c_count with |c_1| = max(1, 2R_1, R_2/2),
/// |c_k| = max(4|c_{k-1}|, R_{k+1}/2) and arg c_k = 2 pi k phi mod 2 pi.
inline SlowConstruction construct_slow_detailed(const GrowthBound& rho, int count, double horizon) {
    if (count < 1 || count > 1000) throw Error(ErrorCode::InvalidArgument, "count must lie in [1, 1000]");
    if (!(horizon >= 100.0) || !std::isfinite(horizon)) throw Error(ErrorCode::InvalidArgument, "horizon must be at least 100");
    if (!superlogarithmic_on_sample(rho, horizon)) {
        throw Error(ErrorCode::PreconditionFailed, "rho(t)/log t does not grow up to the horizon; such rho only admits polynomials");
    }
    SlowConstruction out;
    for (int k = 1; k <= count + 1; ++k) out.thresholds.push_back(growth_threshold(rho, k, horizon));
    std::vector<DivisorPoint> pts;
    double prev = 0.0;
    for (int k = 1; k <= count; ++k) {
        const double next = out.thresholds[static_cast<std::size_t>(k)] / 2.0;
        const double floor_mod = (k == 1) ? 1.0 : 4.0 * prev;
        double modulus = (k == 1) ? std::max({1.0, 2.0 * out.thresholds[0], next}) : std::max(4.0 * prev, next);
        if (!std::isfinite(modulus)) throw Error(ErrorCode::NumericOverflow, "construction exceeds double range");
        const double theta = 2.0 * std::numbers::pi * std::fmod(k * kGoldenAngleFraction, 1.0);
        Complex c = std::polar(modulus, theta);
        // polar() may round |c| just below the modulus
        while (std::abs(c) < floor_mod) {
            modulus = std::nextafter(modulus, std::numeric_limits<double>::infinity());
            c = std::polar(modulus, theta);
        }
        prev = std::abs(c);
        pts.push_back({c, 1});
    }
    out.divisor = Divisor(std::move(pts));
    return out;
}

inline Divisor construct_slow(const GrowthBound& rho, int count, double horizon) {
    return construct_slow_detailed(rho, count, horizon).divisor;
}

}  // namespace brody
