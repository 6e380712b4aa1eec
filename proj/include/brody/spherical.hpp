#pragma once

// Spherical derivative f#(z) = |f'(z)| / (1 + |f(z)|^2) and numerical
// searches for its supremum. Nothing here proves a bound: sup_search reports
// the largest value it found inside a disk, witness_search reports whether
// local maxima grow as the search moves outward.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "brody/complex.hpp"
#include "brody/error.hpp"
#include "brody/expr.hpp"

namespace brody {

/// h(w) = |w| / (1 + |w|^2), continuously extended by h(inf) = 0.
inline double h(const ExtendedComplex& w) {
    if (w.is_infinite()) return 0.0;
    const double a = std::abs(w.value());
    if (a > 1.0) return 1.0 / (a + 1.0 / a);
    return a / (1.0 + a * a);
}

/// h evaluated from log|w|; exact for any magnitude.
inline double h_from_log(double log_abs) {
    if (log_abs == -std::numeric_limits<double>::infinity()) return 0.0;
    return 0.5 / std::cosh(log_abs);
}

namespace detail {

inline double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

inline double sph_from_values(Complex f, Complex df) {
    const double a = std::abs(f);
    const double d = std::abs(df);
    if (a <= 1.0) return d / (1.0 + a * a);
    return (d / a) / (a + 1.0 / a);
}

inline double sph_from_scaled(const ScaledComplex& f, const ScaledComplex& df) {
    if (df.is_zero()) return 0.0;
    return std::exp(df.log_abs() - softplus(2.0 * f.log_abs()));
}

}  // namespace detail

/// f# for an expression, with the derivative prepared once.
///
/// Overflowing samples are re-evaluated with an extended exponent range.
/// At an exact pole the value is the limit of f# = (1/f)# from four
/// symmetric neighbours.
class SphericalDerivative {
public:
    explicit SphericalDerivative(Expr f) : f_(std::move(f)), df_(differentiate(f_)) {}

    const Expr& function() const noexcept { return f_; }
    const Expr& derivative() const noexcept { return df_; }

    double operator()(Complex z) const { return value(z, true); }

private:
    double value(Complex z, bool allow_pole_limit) const {
        using S = detail::EvalState;
        const auto fv = detail::evaluate<Complex>(f_, z);
        const auto dv = detail::evaluate<Complex>(df_, z);
        if (fv.s == S::Finite && dv.s == S::Finite) return detail::sph_from_values(fv.v, dv.v);
        if (fv.s != S::Pole && dv.s != S::Pole) {
            const ScaledComplex zs(z);
            const auto fs = detail::evaluate<ScaledComplex>(f_, zs);
            const auto ds = detail::evaluate<ScaledComplex>(df_, zs);
            if (fs.s == S::Finite && ds.s == S::Finite) return detail::sph_from_scaled(fs.v, ds.v);
            if (fs.s != S::Pole && ds.s != S::Pole) {
                throw Error(ErrorCode::NumericOverflow, "f and f' both overflow");
            }
        }
        if (!allow_pole_limit) throw Error(ErrorCode::NumericOverflow, "pole limit did not resolve");
        const double delta = 1e-7 * (1.0 + std::abs(z));
        double sum = 0.0;
        for (const Complex dir : {Complex{1, 0}, Complex{-1, 0}, Complex{0, 1}, Complex{0, -1}}) {
            sum += value(z + delta * dir, false);
        }
        return 0.25 * sum;
    }

    Expr f_;
    Expr df_;
};

inline double sph_deriv(const Expr& f, Complex z) { return SphericalDerivative(f)(z); }

/// Callable mapping a point to a spherical-derivative value.
template <class F>
concept SphericalFunction = std::invocable<const F&, Complex> &&
    std::convertible_to<std::invoke_result_t<const F&, Complex>, double>;

struct SupReport {
    double radius = 0.0;
    Complex center{};
    long samples = 0;
    /// Samples skipped because f and f' both overflowed.
    long skipped = 0;
    double max_value = 0.0;
    Complex argmax{};
    /// True when local refinement improved on the best grid value.
    bool refined = false;
};

struct SupSearchOptions {
    Complex center{};
    /// Fraction of the budget spent on the coarse grid.
    double grid_fraction = 0.6;
    int refine_cells = 16;
};

/// Two-phase search for the maximum of f# on the disk |z - center| <= radius:
/// a uniform square grid followed by shrinking compass searches around the
/// best grid local maxima. Deterministic; the result is a lower bound for the
/// true supremum on the disk.
template <SphericalFunction F>
SupReport sup_search(const F& fsharp, double radius, long budget, SupSearchOptions opts = {}) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
    if (budget < 1000) throw Error(ErrorCode::InvalidArgument, "budget must be at least 1000");
    if (!(opts.grid_fraction >= 0.6 && opts.grid_fraction < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "grid fraction must lie in [0.6, 1)");
    }

    SupReport report;
    report.radius = radius;
    report.center = opts.center;
    report.max_value = -1.0;

    auto sample = [&](Complex z, double& out) {
        ++report.samples;
        try {
            out = static_cast<double>(fsharp(z));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NumericOverflow) throw;
            ++report.skipped;
            return false;
        }
        if (!std::isfinite(out)) {
            ++report.skipped;
            return false;
        }
        return true;
    };
    auto clamp = [&](Complex z) {
        const Complex d = z - opts.center;
        const double r = std::abs(d);
        return r > radius ? opts.center + d * (radius / r) : z;
    };

    const long grid_budget = static_cast<long>(std::ceil(opts.grid_fraction * static_cast<double>(budget)));
    const double spacing = radius * std::sqrt(std::numbers::pi / static_cast<double>(grid_budget));
    const int n = static_cast<int>(std::floor(radius / spacing));
    const int width = 2 * n + 1;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> grid(static_cast<std::size_t>(width) * static_cast<std::size_t>(width), nan);
    auto at = [&](int i, int j) -> double& {
        return grid[static_cast<std::size_t>(i + n) * static_cast<std::size_t>(width) + static_cast<std::size_t>(j + n)];
    };
    auto point = [&](int i, int j) { return opts.center + Complex{i * spacing, j * spacing}; };

    const double r2 = (radius / spacing) * (radius / spacing);
    for (int i = -n; i <= n; ++i) {
        for (int j = -n; j <= n; ++j) {
            if (static_cast<double>(i) * i + static_cast<double>(j) * j > r2 * (1.0 + 1e-12)) continue;
            double v = 0.0;
            if (!sample(point(i, j), v)) continue;
            at(i, j) = v;
            if (v > report.max_value) {
                report.max_value = v;
                report.argmax = point(i, j);
            }
        }
    }
    const double grid_max = report.max_value;

    struct Cell {
        int i, j;
        double v;
    };
    std::vector<Cell> peaks;
    std::vector<Cell> others;
    for (int i = -n; i <= n; ++i) {
        for (int j = -n; j <= n; ++j) {
            const double v = at(i, j);
            if (std::isnan(v)) continue;
            bool is_peak = true;
            for (int di = -1; di <= 1 && is_peak; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    if ((di == 0 && dj == 0) || std::abs(i + di) > n || std::abs(j + dj) > n) continue;
                    const double w = at(i + di, j + dj);
                    if (!std::isnan(w) && w > v) {
                        is_peak = false;
                        break;
                    }
                }
            }
            (is_peak ? peaks : others).push_back({i, j, v});
        }
    }
    auto by_value = [](const Cell& a, const Cell& b) { return a.v > b.v; };
    std::stable_sort(peaks.begin(), peaks.end(), by_value);
    std::stable_sort(others.begin(), others.end(), by_value);
    std::vector<Cell> chosen(peaks.begin(), peaks.begin() + std::min<std::ptrdiff_t>(opts.refine_cells, std::ssize(peaks)));
    for (const auto& c : others) {
        if (std::ssize(chosen) >= opts.refine_cells) break;
        chosen.push_back(c);
    }

    const long remaining = budget - report.samples;
    if (!chosen.empty() && remaining > 0) {
        const long per_cell = remaining / static_cast<long>(chosen.size());
        for (const auto& cell : chosen) {
            Complex p = point(cell.i, cell.j);
            double v = cell.v;
            double step = spacing / (1.0 + v);
            long used = 0;
            while (used + 8 <= per_cell && step > 1e-13 * (1.0 + std::abs(p))) {
                Complex best_p = p;
                double best_v = v;
                for (int k = 0; k < 8; ++k) {
                    const Complex q = clamp(p + std::polar(step, k * std::numbers::pi / 4.0));
                    double w = 0.0;
                    ++used;
                    if (sample(q, w) && w > best_v) {
                        best_v = w;
                        best_p = q;
                    }
                }
                if (best_v > v) {
                    p = best_p;
                    v = best_v;
                } else {
                    step *= 0.618;
                }
            }
            if (v > report.max_value) {
                report.max_value = v;
                report.argmax = p;
            }
        }
    }
    report.refined = report.max_value > grid_max;
    if (report.max_value < 0.0) report.max_value = 0.0;
    return report;
}

inline SupReport sup_search(const Expr& f, double radius, long budget, SupSearchOptions opts = {}) {
    return sup_search(SphericalDerivative(f), radius, budget, opts);
}

struct WitnessPoint {
    Complex z;
    double value;
};

/// Points with growing f#, evidence (not proof) that f# is unbounded.
struct WitnessSequence {
    std::vector<WitnessPoint> points;
    bool monotone = false;
};

/// Ratio the best values must grow by across the three outermost seed scales.
inline constexpr double kWitnessGrowthFactor = 2.0;

/// Compass hill-climb on f# from every seed. Seeds are grouped into scales
/// by floor(log2 |seed|); the best local maximum of each scale forms the
/// sequence. Returns nullopt unless the best values of the outermost three
/// scales (at least two) strictly increase and grow by kWitnessGrowthFactor.
template <SphericalFunction F>
std::optional<WitnessSequence> witness_search(const F& fsharp, std::span<const Complex> seeds, int steps) {
    if (steps < 1) throw Error(ErrorCode::InvalidArgument, "steps must be at least 1");

    std::map<int, WitnessPoint> best_per_scale;
    for (const Complex seed : seeds) {
        Complex p = seed;
        double v = 0.0;
        try {
            v = fsharp(p);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NumericOverflow) throw;
            continue;
        }
        double step = std::min(1.0, 1.0 / (1.0 + v));
        for (int it = 0; it < steps && step > 1e-14 * (1.0 + std::abs(p)); ++it) {
            Complex best_p = p;
            double best_v = v;
            for (int k = 0; k < 8; ++k) {
                const Complex q = p + std::polar(step, k * std::numbers::pi / 4.0);
                try {
                    const double w = fsharp(q);
                    if (std::isfinite(w) && w > best_v) {
                        best_v = w;
                        best_p = q;
                    }
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::NumericOverflow) throw;
                }
            }
            if (best_v > v) {
                p = best_p;
                v = best_v;
                step *= 1.5;
            } else {
                step *= 0.5;
            }
        }
        const double modulus = std::abs(seed);
        const int scale = modulus > 0.0 ? static_cast<int>(std::floor(std::log2(modulus))) : std::numeric_limits<int>::min();
        auto [it, inserted] = best_per_scale.try_emplace(scale, WitnessPoint{p, v});
        if (!inserted && v > it->second.value) it->second = {p, v};
    }

    if (best_per_scale.size() < 2) return std::nullopt;
    std::vector<WitnessPoint> by_scale;
    for (const auto& [scale, wp] : best_per_scale) by_scale.push_back(wp);
    const std::size_t first = by_scale.size() >= 3 ? by_scale.size() - 3 : 0;
    for (std::size_t i = first + 1; i < by_scale.size(); ++i) {
        if (!(by_scale[i].value > by_scale[i - 1].value)) return std::nullopt;
    }
    if (!(by_scale.back().value >= kWitnessGrowthFactor * by_scale[first].value)) return std::nullopt;

    WitnessSequence seq;
    seq.monotone = true;
    std::vector<WitnessPoint> sorted = by_scale;
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
    for (const auto& wp : sorted) {
        if (seq.points.empty() || wp.value > seq.points.back().value) seq.points.push_back(wp);
    }
    return seq;
}

inline std::optional<WitnessSequence> witness_search(const Expr& f, std::span<const Complex> seeds, int steps) {
    return witness_search(SphericalDerivative(f), seeds, steps);
}

}  // namespace brody
