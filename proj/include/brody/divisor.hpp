#pragma once

// Finite zero divisors sorted by modulus. An infinite divisor is modelled by
// a truncation plus optional tail metadata describing the omitted points.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "brody/complex.hpp"
#include "brody/error.hpp"

namespace brody {

struct DivisorPoint {
    Complex a;
    int mult = 1;

    friend bool operator==(const DivisorPoint&, const DivisorPoint&) = default;
};

/// Sums over the support points omitted by a truncation.
struct DivisorTail {
    /// Sums of 1/a and 1/a^2 over the omitted points, with absolute error bounds.
    Complex moment1{};
    double moment1_err = 0.0;
    Complex moment2{};
    double moment2_err = 0.0;
    /// Sums of 1/|a| and 1/|a|^3 (upper bounds).
    double abs1 = 0.0;
    double abs3 = 0.0;
    /// Lower bound for |a| over the omitted points.
    double min_modulus = std::numeric_limits<double>::infinity();
};

class Divisor {
public:
    Divisor() = default;

    /// Sorts by modulus (stable). Throws ZeroInSupport for a = 0 and
    /// InvalidArgument for multiplicities below one or non-finite points.
    explicit Divisor(std::vector<DivisorPoint> points, std::optional<DivisorTail> tail = std::nullopt)
        : pts_(std::move(points)), tail_(tail) {
        for (const auto& p : pts_) {
            if (!is_finite(p.a)) throw Error(ErrorCode::InvalidArgument, "non-finite support point");
            if (p.a == Complex{}) throw Error(ErrorCode::ZeroInSupport, "support point at the origin");
            if (p.mult < 1) throw Error(ErrorCode::InvalidArgument, "multiplicity must be at least 1");
        }
        std::stable_sort(pts_.begin(), pts_.end(),
                         [](const DivisorPoint& x, const DivisorPoint& y) { return std::abs(x.a) < std::abs(y.a); });
    }

    static Divisor from_points(const std::vector<Complex>& zs) {
        std::vector<DivisorPoint> p;
        p.reserve(zs.size());
        for (const auto& z : zs) p.push_back({z, 1});
        return Divisor(std::move(p));
    }

    /// {k^2 : k = 1..count} with Euler-Maclaurin tails of sum 1/k^2, 1/k^4.
    static Divisor squares(long count) {
        if (count < 1) throw Error(ErrorCode::InvalidArgument, "count must be positive");
        std::vector<DivisorPoint> p;
        p.reserve(static_cast<std::size_t>(count));
        for (long k = 1; k <= count; ++k) {
            const double kk = static_cast<double>(k);
            p.push_back({Complex{kk * kk}, 1});
        }
        const double K = static_cast<double>(count);
        DivisorTail t;
        t.moment1 = 1.0 / K - 1.0 / (2.0 * K * K) + 1.0 / (6.0 * K * K * K) - 1.0 / (30.0 * std::pow(K, 5));
        t.moment1_err = 1.0 / std::pow(K, 7);
        t.moment2 = 1.0 / (3.0 * K * K * K) - 1.0 / (2.0 * std::pow(K, 4)) + 1.0 / (3.0 * std::pow(K, 5)) -
                    1.0 / (6.0 * std::pow(K, 7));
        t.moment2_err = 1.0 / std::pow(K, 9);
        t.abs1 = 1.0 / K;
        t.abs3 = 1.0 / (5.0 * std::pow(K, 5));
        t.min_modulus = (K + 1.0) * (K + 1.0);
        return Divisor(std::move(p), t);
    }

    /// a_k = (ratio * u)^k for k = 1..count, |u| = 1, with the exact
    /// geometric tail.
    static Divisor geometric(double ratio, long count, Complex u = Complex{1.0}) {
        if (!(ratio > 1.0)) throw Error(ErrorCode::LambdaNotGreaterOne, "geometric ratio must exceed 1");
        if (count < 1) throw Error(ErrorCode::InvalidArgument, "count must be positive");
        if (std::abs(std::abs(u) - 1.0) > 1e-12) throw Error(ErrorCode::NotUnitModulus, "direction must be unit");
        std::vector<DivisorPoint> p;
        p.reserve(static_cast<std::size_t>(count));
        Complex dir{1.0};
        for (long k = 1; k <= count; ++k) {
            dir *= u;
            p.push_back({std::pow(ratio, static_cast<double>(k)) * dir, 1});
        }
        const Complex w = 1.0 / (ratio * u);
        const double last = std::pow(ratio, static_cast<double>(count));
        DivisorTail t;
        t.moment1 = std::pow(w, static_cast<int>(count + 1)) / (1.0 - w);
        t.moment2 = std::pow(w * w, static_cast<int>(count + 1)) / (1.0 - w * w);
        t.abs1 = 1.0 / (last * (ratio - 1.0));
        t.abs3 = 1.0 / (last * last * last * (ratio * ratio * ratio - 1.0));
        t.min_modulus = last * ratio;
        return Divisor(std::move(p), t);
    }

    const std::vector<DivisorPoint>& points() const noexcept { return pts_; }
    const std::optional<DivisorTail>& tail() const noexcept { return tail_; }
    std::size_t size() const noexcept { return pts_.size(); }
    bool empty() const noexcept { return pts_.empty(); }
    const DivisorPoint& operator[](std::size_t i) const { return pts_.at(i); }

    bool reduced() const noexcept {
        return std::all_of(pts_.begin(), pts_.end(), [](const DivisorPoint& p) { return p.mult == 1; });
    }

    long degree() const noexcept {
        long d = 0;
        for (const auto& p : pts_) d += p.mult;
        return d;
    }

private:
    std::vector<DivisorPoint> pts_;
    std::optional<DivisorTail> tail_;
};

// ---------------------------------------------------------------------------
// CSV with header re,im,mult

inline std::string divisor_to_csv(const Divisor& d) {
    std::ostringstream os;
    os.precision(17);
    os << "re,im,mult\n";
    for (const auto& p : d.points()) os << p.a.real() << ',' << p.a.imag() << ',' << p.mult << '\n';
    return os.str();
}

inline Divisor divisor_from_csv(std::istream& in) {
    std::string line;
    long lineno = 0;
    std::vector<DivisorPoint> pts;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        if (!header) {
            if (line != "re,im,mult") {
                throw Error(ErrorCode::ParseError, "divisor CSV: expected header re,im,mult");
            }
            header = true;
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
        if (cells.size() != 3) {
            throw Error(ErrorCode::ParseError, "divisor CSV line " + std::to_string(lineno) + ": expected 3 fields");
        }
        try {
            std::size_t u0 = 0, u1 = 0, u2 = 0;
            const double re = std::stod(cells[0], &u0);
            const double im = std::stod(cells[1], &u1);
            const long m = std::stol(cells[2], &u2);
            if (u0 != cells[0].size() || u1 != cells[1].size() || u2 != cells[2].size()) throw std::invalid_argument("");
            if (m < 1 || m > std::numeric_limits<int>::max()) throw std::invalid_argument("");
            pts.push_back({Complex{re, im}, static_cast<int>(m)});
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::ParseError, "divisor CSV line " + std::to_string(lineno) + ": bad number");
        }
    }
    if (!header) throw Error(ErrorCode::ParseError, "divisor CSV: empty input");
    return Divisor(std::move(pts));
}

inline Divisor read_divisor_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open divisor file " + path);
    return divisor_from_csv(in);
}

}  // namespace brody
