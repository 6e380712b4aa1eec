#pragma once

// Proximity m(r), counting N(r) and characteristic T(r) = m + N of 1/f for
// entire f with f(0) != 0, and log-log order estimates.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "brody/complex.hpp"
#include "brody/divisor.hpp"
#include "brody/divisors.hpp"
#include "brody/error.hpp"
#include "brody/expr.hpp"
#include "brody/products.hpp"

namespace brody {

enum class Normalization {
    /// (1/2pi) times the circle integral.
    Standard,
    /// The bare circle integral.
    Unnormalized,
};

/// log|f(z)|: -inf at zeros, +inf at poles or overflow.
template <class F>
concept LogModulus = std::invocable<const F&, Complex> && std::convertible_to<std::invoke_result_t<const F&, Complex>, double>;

/// log|f| for an expression, evaluated with an extended exponent so exp of
/// large arguments does not overflow.
inline std::function<double(Complex)> expr_log_modulus(const Expr& f) {
    return [f](Complex z) {
        const auto p = detail::evaluate<ScaledComplex>(f, ScaledComplex(z));
        switch (p.s) {
            case detail::EvalState::Finite: return p.v.log_abs();
            case detail::EvalState::Pole:
            case detail::EvalState::Overflow: return std::numeric_limits<double>::infinity();
            case detail::EvalState::Invalid: break;
        }
        throw Error(ErrorCode::IndeterminateAtPoint, "expression undefined on the circle");
    };
}

/// log|F| for a canonical product; exact zeros on the support.
inline std::function<double(Complex)> product_log_modulus(const CanonicalProduct& p, double tol = 1e-10) {
    return [p, tol](Complex z) { return p.log_modulus(z, tol); };
}

namespace detail {

inline constexpr double kZeroLogThreshold = -690.7755;  // log(1e-300)

template <LogModulus F>
double log_plus_inverse(const F& logf, Complex z) {
    const double l = logf(z);
    if (std::isnan(l)) throw Error(ErrorCode::IndeterminateAtPoint, "log|f| is NaN");
    if (l < kZeroLogThreshold) throw Error(ErrorCode::ZeroOnCircle, "|f| < 1e-300 on the circle");
    return l < 0.0 ? -l : 0.0;
}

// Trapezoid over [t0, t0 + h] with up to `levels` bisections while the
// endpoint values differ by more than 1.
template <LogModulus F>
double refined_interval(const F& logf, double r, double t0, double h, double g0, double g1, int levels) {
    if (levels == 0 || std::abs(g0 - g1) <= 1.0) return 0.5 * h * (g0 + g1);
    const double tm = t0 + 0.5 * h;
    const double gm = log_plus_inverse(logf, std::polar(r, tm));
    return refined_interval(logf, r, t0, 0.5 * h, g0, gm, levels - 1) +
           refined_interval(logf, r, tm, 0.5 * h, gm, g1, levels - 1);
}

}  // namespace detail

/// Circle integral of log+(1/|f(re^{it})|), trapezoid rule with up to two
/// bisection levels on intervals whose endpoint values differ by more than 1.
template <LogModulus F>
double proximity(const F& logf, double r, int quad_points, Normalization norm = Normalization::Standard) {
    if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorCode::InvalidArgument, "r must be positive");
    if (quad_points < 64) throw Error(ErrorCode::InvalidArgument, "quad_points must be at least 64");
    if (logf(Complex{}) < detail::kZeroLogThreshold) throw Error(ErrorCode::ZeroAtOrigin, "f(0) = 0");
    const double h = 2.0 * std::numbers::pi / quad_points;
    std::vector<double> g(static_cast<std::size_t>(quad_points) + 1);
    for (int i = 0; i < quad_points; ++i) g[static_cast<std::size_t>(i)] = detail::log_plus_inverse(logf, std::polar(r, i * h));
    g.back() = g.front();
    double integral = 0.0;
    for (int i = 0; i < quad_points; ++i) {
        const auto k = static_cast<std::size_t>(i);
        integral += detail::refined_interval(logf, r, i * h, h, g[k], g[k + 1], 2);
    }
    return norm == Normalization::Standard ? integral / (2.0 * std::numbers::pi) : integral;
}

inline double proximity(const Expr& f, double r, int quad_points, Normalization norm = Normalization::Standard) {
    return proximity(expr_log_modulus(f), r, quad_points, norm);
}

/// N(r) of the divisor; same as counting_N.
inline double counting(const Divisor& d, double r) { return counting_N(d, r); }

struct NevanlinnaSample {
    double r = 0.0;
    double m = 0.0;
    double N = 0.0;
    double T = 0.0;
};

struct NevanlinnaReport {
    std::vector<NevanlinnaSample> samples;
    Normalization normalization = Normalization::Standard;
    /// T nondecreasing across the samples (1e-9 relative slack).
    bool monotone = true;
};

/// m, N and T at each radius. D must be the zero divisor of f inside the
/// largest radius; points with |f| > 1e-6 (1 + |a|) raise DivisorMismatch.
template <LogModulus F>
NevanlinnaReport characteristic(const F& logf, const Divisor& d, const std::vector<double>& radii, int quad_points,
                                Normalization norm = Normalization::Standard) {
    if (radii.empty()) throw Error(ErrorCode::InvalidArgument, "no radii");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1]))) {
            throw Error(ErrorCode::InvalidArgument, "radii must be positive and strictly increasing");
        }
    }
    for (const auto& p : d.points()) {
        if (!(std::abs(p.a) < radii.back())) break;
        const double l = logf(p.a);
        if (l > std::log(1e-6 * (1.0 + std::abs(p.a)))) {
            throw Error(ErrorCode::DivisorMismatch, "f does not vanish at a support point");
        }
    }
    NevanlinnaReport rep;
    rep.normalization = norm;
    for (const double r : radii) {
        NevanlinnaSample s;
        s.r = r;
        s.m = proximity(logf, r, quad_points, norm);
        s.N = counting_N(d, r);
        s.T = s.m + s.N;
        if (!rep.samples.empty() && s.T < rep.samples.back().T * (1.0 - 1e-9) - 1e-12) rep.monotone = false;
        rep.samples.push_back(s);
    }
    return rep;
}

struct OrderEstimate {
    double slope = 0.0;
    double r_min = 0.0;
    double r_max = 0.0;
    /// Root-mean-square residual of the fit.
    double residual = 0.0;
};

/// Least-squares slope of log T against log r over the upper half of the
/// samples with T > 0.
inline OrderEstimate order_estimate(const NevanlinnaReport& rep) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& s : rep.samples) {
        if (s.T > 0.0) pts.emplace_back(std::log(s.r), std::log(s.T));
    }
    if (pts.size() < 8) throw Error(ErrorCode::InsufficientSamples, "need at least 8 samples with T > 0");
    const std::size_t start = pts.size() / 2;
    const auto n = static_cast<double>(pts.size() - start);
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = start; i < pts.size(); ++i) {
        sx += pts[i].first;
        sy += pts[i].second;
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = start; i < pts.size(); ++i) {
        sxx += (pts[i].first - mx) * (pts[i].first - mx);
        sxy += (pts[i].first - mx) * (pts[i].second - my);
    }
    OrderEstimate est;
    est.slope = sxy / sxx;
    double ss = 0.0;
    for (std::size_t i = start; i < pts.size(); ++i) {
        const double e = pts[i].second - (my + est.slope * (pts[i].first - mx));
        ss += e * e;
    }
    est.residual = std::sqrt(ss / n);
    est.r_min = std::exp(pts[start].first);
    est.r_max = std::exp(pts.back().first);
    return est;
}

}  // namespace brody
