#pragma once

// Exact Brody verdicts for the families R(z)e^z + Q(z) and e^z + e^{lambda z},
// explicit f# bounds for the real-lambda two-exponential family, and the
// sampled rules built on bounded logarithmic derivatives.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "brody/algebra.hpp"
#include "brody/complex.hpp"
#include "brody/error.hpp"
#include "brody/expr.hpp"
#include "brody/spherical.hpp"

namespace brody {

enum class BrodyStatus { Brody, NotBrody, Unknown };

constexpr const char* to_string(BrodyStatus s) noexcept {
    switch (s) {
        case BrodyStatus::Brody: return "Brody";
        case BrodyStatus::NotBrody: return "NotBrody";
        case BrodyStatus::Unknown: return "Unknown";
    }
    return "Unknown";
}

struct BrodyVerdict {
    BrodyStatus status = BrodyStatus::Unknown;
    /// Short identifier of the rule that decided the verdict.
    std::string rule;
    std::string text;
    std::optional<WitnessSequence> witness;
    /// Explicit upper bound for sup f#, when the rule provides one.
    std::optional<double> bound;

    std::string reason() const { return rule + ": " + text; }
};

// ---------------------------------------------------------------------------
// R(z) e^z + Q(z)

/// Brody iff R vanishes identically or Q is finite at infinity.
inline BrodyVerdict classify_exp_rational(const RationalFunction& r, const RationalFunction& q) {
    BrodyVerdict v;
    v.rule = "exp-rational";
    if (r.is_zero()) {
        v.status = BrodyStatus::Brody;
        v.text = "R is identically zero, f = Q is rational";
    } else if (value_at_infinity(q).is_finite()) {
        v.status = BrodyStatus::Brody;
        v.text = "Q is finite at infinity";
    } else {
        v.status = BrodyStatus::NotBrody;
        v.text = "R is not identically zero and Q has a pole at infinity";
    }
    return v;
}

inline Expr exp_rational_expr(const RationalFunction& r, const RationalFunction& q) {
    const Expr e = Expr::exp(Expr::var());
    if (r.is_zero()) return to_expr(q);
    Expr re = r == RationalFunction(1.0) ? e : to_expr(r) * e;
    return q.is_zero() ? re : re + to_expr(q);
}

/// Seeds near the zeros of R e^z + Q at the given moduli: on the line
/// Im z = m the zeros sit near Re z = log|Q/R|.
inline std::vector<Complex> exp_rational_seeds(const RationalFunction& r, const RationalFunction& q,
                                               std::span<const double> moduli) {
    std::vector<Complex> seeds;
    for (const double m : moduli) {
        for (const double sign : {1.0, -1.0}) {
            const Complex y{0.0, sign * m};
            const auto qv = eval_rational(q, y);
            const auto rv = eval_rational(r, y);
            double x = 0.0;
            if (qv.is_finite() && rv.is_finite() && rv.value() != Complex{} && qv.value() != Complex{}) {
                x = std::log(std::abs(qv.value() / rv.value()));
            }
            seeds.push_back(Complex{x, sign * m});
        }
    }
    return seeds;
}

/// Numerical witness for a NotBrody verdict of the exp-rational family.
inline std::optional<WitnessSequence> exp_rational_witness(const RationalFunction& r, const RationalFunction& q,
                                                           int steps = 400) {
    const std::vector<double> moduli{10.0, 20.0, 40.0};
    const auto seeds = exp_rational_seeds(r, q, moduli);
    return witness_search(exp_rational_expr(r, q), seeds, steps);
}

// ---------------------------------------------------------------------------
// e^z + e^{lambda z}

struct TwoExpParams {
    Complex lambda;
};

inline Expr two_exp_expr(const TwoExpParams& p) {
    const Expr z = Expr::var();
    return Expr::exp(z) + Expr::exp(Expr::constant(p.lambda) * z);
}

/// k-th zero (2k+1) pi i / (1 - lambda).
inline Complex two_exp_zero(const TwoExpParams& p, long k) {
    if (p.lambda == Complex{1.0}) throw Error(ErrorCode::LambdaOne, "e^z + e^z = 2e^z has no zeros");
    return Complex{0.0, (2.0 * static_cast<double>(k) + 1.0) * std::numbers::pi} / (1.0 - p.lambda);
}

/// f'(a_k) = (lambda - 1) exp((2k+1) pi i lambda / (1 - lambda)).
inline Complex two_exp_slope(const TwoExpParams& p, long k) {
    const Complex a = two_exp_zero(p, k);
    return (p.lambda - 1.0) * std::exp(p.lambda * a);
}

/// |f'(a_{k+1})| / |f'(a_k)| = |exp(2 pi i lambda / (1 - lambda))|.
inline double two_exp_slope_ratio(const TwoExpParams& p) {
    if (p.lambda == Complex{1.0}) throw Error(ErrorCode::LambdaOne, "e^z + e^z = 2e^z has no zeros");
    return std::abs(std::exp(Complex{0.0, 2.0 * std::numbers::pi} * p.lambda / (1.0 - p.lambda)));
}

namespace detail {

// 0 <= lambda < 1: regions Re z >= C and Re z <= C.
inline double two_exp_bound_case3(double lambda) {
    const double c = std::numbers::ln2 / (1.0 - lambda);
    return std::max(6.0 * std::exp(-c), std::exp(c) + lambda * std::exp(lambda * c));
}

// -1 <= lambda < 0: regions Re z >= C, Re z <= -C and the strip between.
inline double two_exp_bound_case4(double lambda) {
    const double c = std::numbers::ln2 / (1.0 - lambda);
    return std::max({6.0 * std::exp(-c), 6.0 * std::exp(lambda * c), std::exp(c) + std::abs(lambda) * std::exp(-lambda * c)});
}

}  // namespace detail

/// Explicit upper bound for sup f# of e^z + e^{lambda z}, lambda real.
/// |lambda| > 1 is reduced through f(z) = g(lambda z), g(w) = e^w + e^{w/lambda},
/// which scales f# by |lambda|; lambda = 1 gives 2e^z with sup f# = 1/2.
inline double two_exp_bound(const TwoExpParams& p) {
    if (p.lambda.imag() != 0.0 || !std::isfinite(p.lambda.real())) {
        throw Error(ErrorCode::OutOfCase, "explicit bound needs a real lambda");
    }
    const double l = p.lambda.real();
    if (l == 1.0) return 0.5;
    if (l > 1.0) return l * detail::two_exp_bound_case3(1.0 / l);
    if (l >= 0.0) return detail::two_exp_bound_case3(l);
    if (l >= -1.0) return detail::two_exp_bound_case4(l);
    return -l * detail::two_exp_bound_case4(1.0 / l);
}

/// Brody iff Im lambda == 0, tested exactly.
inline BrodyVerdict classify_two_exponentials(const TwoExpParams& p) {
    BrodyVerdict v;
    v.rule = "two-exp";
    if (p.lambda.imag() == 0.0) {
        v.status = BrodyStatus::Brody;
        v.text = "lambda real";
        v.bound = two_exp_bound(p);
        return v;
    }
    v.status = BrodyStatus::NotBrody;
    v.text = "lambda not real";
    // Zeros a_k with f#(a_k) = |f'(a_k)|, walked in the direction of growth.
    const long dir = two_exp_slope_ratio(p) > 1.0 ? 1 : -1;
    WitnessSequence seq;
    seq.monotone = true;
    for (long j = 0; j < 4; ++j) {
        const long k = dir * j + (dir < 0 ? -1 : 0);
        seq.points.push_back({two_exp_zero(p, k), std::abs(two_exp_slope(p, k))});
    }
    v.witness = std::move(seq);
    return v;
}

// ---------------------------------------------------------------------------
// Rational factors and rational images

/// R f is Brody for every Brody f when R(inf) is finite and nonzero.
inline bool preserves_brody_product(const RationalFunction& r) {
    const auto inf = value_at_infinity(r);
    return inf.is_finite() && inf.value() != Complex{};
}

inline BrodyVerdict classify_product(const RationalFunction& r) {
    BrodyVerdict v;
    v.rule = "rational-product";
    if (preserves_brody_product(r)) {
        v.status = BrodyStatus::Brody;
        v.text = "R(inf) is finite and nonzero, so R f is Brody for every Brody f";
    } else {
        v.status = BrodyStatus::Unknown;
        v.text = "R(inf) is 0 or inf; R f need not be Brody (z(e^z + 1) is not)";
    }
    return v;
}

namespace detail {

// |P'Q - PQ'| (1 + |w|^2) / (|P|^2 + |Q|^2): the norm of dR in the
// spherical metric on both sides.
inline double sphere_stretch(const Polynomial& p, const Polynomial& dp, const Polynomial& q, const Polynomial& dq,
                             Complex w) {
    const Complex pv = p(w);
    const Complex qv = q(w);
    const double denom = std::norm(pv) + std::norm(qv);
    if (denom == 0.0) return 0.0;
    return std::abs(dp(w) * qv - pv * dq(w)) * (1.0 + std::norm(w)) / denom;
}

}  // namespace detail

/// Sampled sup over the Riemann sphere of the spherical stretch of R, using
/// the unit disk in w and in 1/w.
inline double rational_sphere_lipschitz(const RationalFunction& r, long budget) {
    if (budget < 1000) throw Error(ErrorCode::InvalidArgument, "budget must be at least 1000");
    const Polynomial& p = r.num();
    const Polynomial& q = r.den();
    const Polynomial top = derivative(p) * q - p * derivative(q);
    double scale = 0.0;
    for (const auto& c : p.coeffs()) scale = std::max(scale, std::abs(c));
    for (const auto& c : q.coeffs()) scale = std::max(scale, std::abs(c));
    bool constant = true;
    for (const auto& c : top.coeffs()) {
        if (std::abs(c) > 1e-12 * scale * scale) constant = false;
    }
    if (constant) throw Error(ErrorCode::ConstantMap, "R is constant");

    const int d = std::max(p.degree(), q.degree());
    const Polynomial pr = p.reversed(d);
    const Polynomial qr = q.reversed(d);
    const Polynomial dp = derivative(p), dq = derivative(q), dpr = derivative(pr), dqr = derivative(qr);
    auto near = [&](Complex w) { return detail::sphere_stretch(p, dp, q, dq, w); };
    auto far = [&](Complex u) { return detail::sphere_stretch(pr, dpr, qr, dqr, u); };
    const long half = std::max(1000L, budget / 2);
    return std::max(sup_search(near, 1.0, half).max_value, sup_search(far, 1.0, half).max_value);
}

/// Defaults for the sampled logarithmic-derivative rule.
struct LogDerivativeRuleOptions {
    double threshold = 1e3;
    int annuli = 6;
};

/// One-sided rule: if |f'/f| on the outer three of `annuli` annuli inside
/// |z| <= radius stays below the threshold and does not increase outward,
/// f is reported Brody; otherwise Unknown. Never returns NotBrody.
inline BrodyVerdict log_derivative_brody_rule(const Expr& f, double radius, long budget,
                                              LogDerivativeRuleOptions opts = {}) {
    if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
    if (budget < 1000) throw Error(ErrorCode::InvalidArgument, "budget must be at least 1000");
    BrodyVerdict v;
    v.rule = "log-derivative";
    v.status = BrodyStatus::Unknown;

    const Expr df = differentiate(f);
    const int outer = 3;
    const long per_annulus = budget / outer;
    const int rings = std::max(4, static_cast<int>(std::sqrt(static_cast<double>(per_annulus) / 8.0)));
    const int per_ring = static_cast<int>(per_annulus / rings);
    std::vector<double> maxima;
    for (int a = opts.annuli - outer; a < opts.annuli; ++a) {
        const double r0 = radius * a / opts.annuli;
        const double r1 = radius * (a + 1) / opts.annuli;
        double mx = 0.0;
        for (int ring = 0; ring < rings; ++ring) {
            const double rr = r0 + (r1 - r0) * (ring + 0.5) / rings;
            for (int k = 0; k < per_ring; ++k) {
                const Complex z = std::polar(rr, 2.0 * std::numbers::pi * (k + 0.5 * (ring % 2)) / per_ring);
                const auto fv = eval(f, z);
                const auto dv = eval(df, z);
                if (!fv.value.is_finite() || !dv.value.is_finite()) {
                    v.text = "pole or overflow on the sampled annuli; rule not applicable";
                    return v;
                }
                if (fv.value.value() == Complex{}) {
                    v.text = "zero of f on the sampled annuli";
                    return v;
                }
                mx = std::max(mx, std::abs(dv.value.value() / fv.value.value()));
            }
        }
        maxima.push_back(mx);
    }
    bool non_increasing = true;
    for (std::size_t i = 1; i < maxima.size(); ++i) {
        if (maxima[i] > maxima[i - 1] * (1.0 + 1e-9) + 1e-12) non_increasing = false;
    }
    if (maxima.back() < opts.threshold && non_increasing) {
        v.status = BrodyStatus::Brody;
        v.text = "bounded logarithmic derivative (heuristic)";
        v.bound = maxima.back();
    } else {
        v.text = "logarithmic derivative not seen to stay bounded";
    }
    return v;
}

}  // namespace brody
