#pragma once

// Genus-zero canonical products c * prod (1 - z/a_k)^{m_k} over a divisor,
// evaluated in log space with a power-series treatment of the far factors,
// plus the lower bounds for tail products over separated divisors.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "brody/complex.hpp"
#include "brody/divisor.hpp"
#include "brody/error.hpp"
#include "brody/spherical.hpp"

namespace brody {

struct ProductEval {
    Complex value;
    /// Number of leading support points multiplied explicitly. On the
    /// support this is the index of the matching point.
    long terms_used = 0;
    /// Relative error bound for the omitted factors (and rounding).
    double tail_bound = 0.0;
    /// log|value|; -inf on the support.
    double log_abs = 0.0;
};

class CanonicalProduct {
public:
    /// Order of the power series used for the unmultiplied factors.
    static constexpr int kSeriesOrder = 8;

    explicit CanonicalProduct(Divisor d, Complex factor = Complex{1.0}) : d_(std::move(d)), factor_(factor) {
        if (factor_ == Complex{} || !is_finite(factor_)) {
            throw Error(ErrorCode::InvalidArgument, "constant factor must be finite and nonzero");
        }
        const std::size_t n = d_.size();
        s_.assign((n + 1) * kSeriesOrder, Complex{});
        abs_.assign((n + 1) * (kSeriesOrder + 1), 0.0);
        for (std::size_t j = n; j-- > 0;) {
            const Complex inv = 1.0 / d_[j].a;
            const double m = d_[j].mult;
            Complex p{1.0};
            double pa = 1.0;
            for (int k = 0; k <= kSeriesOrder; ++k) {
                p *= inv;
                pa *= std::abs(inv);
                if (k < kSeriesOrder) s_[j * kSeriesOrder + k] = s_[(j + 1) * kSeriesOrder + k] + m * p;
                abs_[j * (kSeriesOrder + 1) + k] = abs_[(j + 1) * (kSeriesOrder + 1) + k] + m * pa;
            }
        }
    }

    /// 3 * prod (z/c_k - 1)^{m_k}: the product with constant 3 (-1)^{deg}.
    static CanonicalProduct three_times_shifted(Divisor d) {
        const double sign = (d.degree() % 2 == 0) ? 1.0 : -1.0;
        return CanonicalProduct(std::move(d), Complex{3.0 * sign});
    }

    const Divisor& divisor() const noexcept { return d_; }
    Complex factor() const noexcept { return factor_; }

    /// Throws TolUnreachable when the tail metadata cannot meet tol and
    /// NumericOverflow when the value exceeds double range.
    ProductEval eval(Complex z, double tol) const {
        check_tol(tol);
        const Walk w = walk(z, tol, npos);
        ProductEval out;
        out.terms_used = static_cast<long>(w.terms);
        out.tail_bound = w.bound;
        if (w.support != npos) {
            out.value = Complex{};
            out.terms_used = static_cast<long>(w.support);
            out.log_abs = -std::numeric_limits<double>::infinity();
            out.tail_bound = 0.0;
            return out;
        }
        if (!(w.bound < tol)) {
            throw Error(ErrorCode::TolUnreachable, "tail bound " + std::to_string(w.bound) + " exceeds tolerance; best value " +
                                                       std::to_string(std::exp(w.log.real())));
        }
        out.log_abs = w.log.real() + std::log(std::abs(factor_));
        if (out.log_abs > 709.0) throw Error(ErrorCode::NumericOverflow, "product exceeds double range");
        out.value = factor_ * std::exp(w.log);
        return out;
    }

    /// log|F(z)|, -inf on the support; never overflows.
    double log_modulus(Complex z, double tol) const {
        check_tol(tol);
        const Walk w = walk(z, tol, npos);
        if (w.support != npos) return -std::numeric_limits<double>::infinity();
        if (!(w.bound < tol)) throw Error(ErrorCode::TolUnreachable, "tail bound exceeds tolerance");
        return w.log.real() + std::log(std::abs(factor_));
    }

    /// c * (-1/a_n) * prod_{k != n} (1 - a_n/a_k).
    Complex derivative_at_support(std::size_t n, double tol) const {
        check_tol(tol);
        if (n >= d_.size()) throw Error(ErrorCode::InvalidArgument, "support index out of range");
        if (d_[n].mult != 1) throw Error(ErrorCode::MultiplicityNotOne, "multiplicity at index " + std::to_string(n));
        const Complex a = d_[n].a;
        const Walk w = walk(a, tol, n);
        if (w.support != npos) return Complex{};
        if (!(w.bound < tol)) throw Error(ErrorCode::TolUnreachable, "tail bound exceeds tolerance");
        return factor_ * (-1.0 / a) * std::exp(w.log);
    }

    /// F'/F at z off the support.
    Complex log_derivative(Complex z, double tol = 1e-10) const {
        const Walk w = walk(z, tol, npos);
        if (w.support != npos) return {std::numeric_limits<double>::infinity(), 0.0};
        return w.dlog;
    }

    /// Spherical derivative |F'|/(1+|F|^2), computed from log|F| and F'/F.
    double fsharp(Complex z, double tol = 1e-10) const {
        const Walk w = walk(z, tol, npos);
        if (w.support != npos) {
            if (d_[w.support].mult != 1) return 0.0;
            return std::abs(derivative_at_support(w.support, tol));
        }
        const double la = w.log.real() + std::log(std::abs(factor_));
        return std::abs(w.dlog) * h_from_log(la);
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    struct Walk {
        Complex log{};
        Complex dlog{};
        std::size_t terms = 0;
        double bound = 0.0;
        std::size_t support = npos;
    };

    static void check_tol(double tol) {
        if (!(tol > 0.0 && tol < 0.1)) throw Error(ErrorCode::InvalidArgument, "tol must lie in (0, 0.1)");
    }

    static Complex log_one_minus(Complex w) {
        if (std::norm(w) < 0.25) {
            return {0.5 * std::log1p(std::norm(w) - 2.0 * w.real()), std::atan2(-w.imag(), 1.0 - w.real())};
        }
        return std::log(1.0 - w);
    }

    // Series correction -sum_m z^m/m S_m(j) and its z-derivative, with the
    // remainder bound, for the factors j..n-1 and the tail metadata.
    struct Series {
        Complex log{};
        Complex dlog{};
        double err = 0.0;
    };

    Series series(Complex z, std::size_t j) const {
        Series s;
        const double r = std::abs(z);
        Complex zp{1.0};
        for (int m = 1; m <= kSeriesOrder; ++m) {
            const Complex sm = s_[j * kSeriesOrder + (m - 1)];
            s.dlog -= zp * sm;
            zp *= z;
            s.log -= zp * sm / static_cast<double>(m);
        }
        if (j < d_.size()) {
            const double q = r / std::abs(d_[j].a);
            const double am = abs_[j * (kSeriesOrder + 1) + kSeriesOrder];
            s.err = std::pow(r, kSeriesOrder + 1) * am / ((kSeriesOrder + 1) * (1.0 - q));
        }
        if (const auto& t = d_.tail()) {
            const double qt = r / t->min_modulus;
            if (!(qt < 1.0)) {
                s.err = std::numeric_limits<double>::infinity();
                return s;
            }
            s.log -= z * t->moment1 + 0.5 * z * z * t->moment2;
            s.dlog -= t->moment1 + z * t->moment2;
            s.err += r * t->moment1_err + 0.5 * r * r * t->moment2_err + r * r * r * t->abs3 / (3.0 * (1.0 - qt));
        }
        return s;
    }

    Walk walk(Complex z, double tol, std::size_t skip) const {
        Walk w;
        const double eps = std::numeric_limits<double>::epsilon();
        const double r = std::abs(z);
        const std::size_t n = d_.size();
        for (std::size_t j = 0; j <= n; ++j) {
            if (j == n || r <= 0.5 * std::abs(d_[j].a)) {
                const Series s = series(z, j);
                const double bound = std::expm1(s.err) + 8.0 * eps * static_cast<double>(j + kSeriesOrder + 1);
                if (bound < tol || j == n) {
                    w.log += s.log;
                    w.dlog += s.dlog;
                    w.terms = j;
                    w.bound = bound;
                    return w;
                }
            }
            if (j == skip) continue;
            const Complex a = d_[j].a;
            const Complex ratio = z / a;
            if (z == a || ratio == Complex{1.0}) {
                w.support = j;
                return w;
            }
            const double m = d_[j].mult;
            w.log += m * log_one_minus(ratio);
            w.dlog += m / (z - a);
        }
        return w;
    }

    Divisor d_;
    Complex factor_;
    // Suffix sums over j..n-1: s_ holds sum m/a^k (k = 1..order), abs_
    // holds sum m/|a|^k (k = 1..order+1).
    std::vector<Complex> s_;
    std::vector<double> abs_;
};

inline ProductEval eval_product(const Divisor& d, Complex z, double tol) {
    return CanonicalProduct(d).eval(z, tol);
}

inline Complex product_derivative_at_support(const Divisor& d, std::size_t n, double tol) {
    return CanonicalProduct(d).derivative_at_support(n, tol);
}

// ---------------------------------------------------------------------------
// Tail products over lambda-separated divisors

/// prod_{l >= 0} (1 - lambda^{-(l + 1/2)}).
inline double claim1_constant(double lambda) {
    if (!(lambda > 1.0) || !std::isfinite(lambda)) {
        throw Error(ErrorCode::LambdaNotGreaterOne, "lambda must exceed 1");
    }
    double prod = 1.0;
    double term = 1.0 / std::sqrt(lambda);
    for (long l = 0; l < 100000000L; ++l) {
        prod *= 1.0 - term;
        if (term < 1e-12) break;
        term /= lambda;
    }
    return prod;
}

/// prod_{l=0}^{s} (lambda^{l + 1/2} - 1).
inline double claim2_minorant(double lambda, int s) {
    if (!(lambda > 1.0) || !std::isfinite(lambda)) {
        throw Error(ErrorCode::LambdaNotGreaterOne, "lambda must exceed 1");
    }
    if (s < 0) throw Error(ErrorCode::InvalidArgument, "s must be nonnegative");
    double prod = 1.0;
    for (int l = 0; l <= s; ++l) prod *= std::pow(lambda, l + 0.5) - 1.0;
    return prod;
}

/// Smallest s with claim2_minorant(lambda, s) >= bound.
inline int claim2_min_s(double lambda, double bound) {
    double prod = 1.0;
    for (int s = 0; s < 100000; ++s) {
        prod *= std::pow(lambda, s + 0.5) - 1.0;
        if (!(lambda > 1.0)) break;
        if (prod >= bound) return s;
    }
    throw Error(ErrorCode::LambdaNotGreaterOne, "minorant does not reach the bound");
}

struct Claim1Result {
    bool passed = true;
    long trials = 0;
    /// Smallest tail-product modulus seen.
    double observed_min = std::numeric_limits<double>::infinity();
    double constant = 0.0;
};

/// Random checks of |prod_{k >= n} (1 - p/a_k)| >= claim1_constant(lambda)
/// for |p| sqrt(lambda) < |a_n|. Separation is verified first, with a
/// relative slack of 1e-12 so exactly geometric input passes.
inline Claim1Result claim1_check(const Divisor& d, double lambda, long trials, std::uint64_t seed = 0) {
    const double c = claim1_constant(lambda);
    const auto& pts = d.points();
    if (pts.empty()) throw Error(ErrorCode::InvalidArgument, "empty divisor");
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        if (std::abs(pts[k + 1].a) < lambda * std::abs(pts[k].a) * (1.0 - 1e-12)) {
            throw Error(ErrorCode::SeparationViolated, "|a_{k+1}| < lambda |a_k| at index " + std::to_string(k));
        }
    }
    std::mt19937_64 rng(seed);
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    Claim1Result res;
    res.constant = c;
    const double root = std::sqrt(lambda);
    for (long t = 0; t < trials; ++t) {
        const std::size_t n = static_cast<std::size_t>(uniform() * static_cast<double>(pts.size()));
        const double radius = std::abs(pts[n].a) / root * std::sqrt(uniform());
        const Complex p = std::polar(radius, 2.0 * std::numbers::pi * uniform());
        double log_mod = 0.0;
        for (std::size_t k = n; k < pts.size(); ++k) log_mod += pts[k].mult * std::log(std::abs(1.0 - p / pts[k].a));
        const double mod = std::exp(log_mod);
        res.observed_min = std::min(res.observed_min, mod);
        if (mod < c) res.passed = false;
        ++res.trials;
    }
    return res;
}

}  // namespace brody
