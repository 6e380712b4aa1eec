#pragma once

// Complex polynomials and rational functions with double-precision
// coefficients. Degrees are capped at kMaxDegree; denominators are kept
// monic so that equal rational functions built the same way compare equal.

#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "brody/complex.hpp"
#include "brody/error.hpp"

namespace brody {

inline constexpr int kMaxDegree = 64;

class Polynomial {
public:
    /// The zero polynomial.
    Polynomial() = default;

    /// Coefficients in ascending order; trailing zeros are trimmed.
    explicit Polynomial(std::vector<Complex> coeffs) : c_(std::move(coeffs)) { validate(); }
    Polynomial(std::initializer_list<Complex> coeffs) : c_(coeffs) { validate(); }

    static Polynomial constant(Complex value) { return Polynomial({value}); }
    static Polynomial monomial(Complex coeff, int power) {
        if (power < 0 || power > kMaxDegree) {
            throw Error(ErrorCode::DegreeOverflow, "monomial power " + std::to_string(power));
        }
        std::vector<Complex> c(static_cast<std::size_t>(power) + 1);
        c.back() = coeff;
        return Polynomial(std::move(c));
    }
    static Polynomial identity() { return Polynomial({Complex{0.0}, Complex{1.0}}); }

    /// -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    std::span<const Complex> coeffs() const noexcept { return c_; }
    Complex leading() const { return c_.empty() ? Complex{} : c_.back(); }
    Complex coeff(int k) const {
        return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(k)] : Complex{};
    }

    Complex operator()(Complex z) const noexcept {
        Complex acc{};
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
        return acc;
    }

    /// Sum of |c_k| |z|^k: the natural scale for rounding error in p(z).
    double magnitude(Complex z) const noexcept {
        const double r = std::abs(z);
        double acc = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * r + std::abs(*it);
        return acc;
    }

    /// True when p(z) is zero up to the rounding error of evaluating it.
    bool vanishes_at(Complex z) const noexcept {
        if (c_.empty()) return true;
        return std::abs((*this)(z)) <= 64.0 * std::numeric_limits<double>::epsilon() * magnitude(z);
    }

    /// Quotient of synthetic division by (w - z); the remainder p(z) is dropped.
    Polynomial deflate(Complex z) const {
        if (c_.size() <= 1) return {};
        std::vector<Complex> q(c_.size() - 1);
        Complex carry{};
        for (std::size_t i = c_.size() - 1; i >= 1; --i) {
            carry = carry * z + c_[i];
            q[i - 1] = carry;
        }
        return Polynomial(std::move(q));
    }

    /// Coefficients of w^d p(1/w) for d >= degree().
    Polynomial reversed(int d) const {
        std::vector<Complex> r(static_cast<std::size_t>(d) + 1);
        for (std::size_t k = 0; k < c_.size(); ++k) r[static_cast<std::size_t>(d) - k] = c_[k];
        return Polynomial(std::move(r));
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<Complex> r(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
        return Polynomial(std::move(r));
    }
    friend Polynomial operator-(const Polynomial& a) {
        std::vector<Complex> r(a.c_);
        for (auto& x : r) x = -x;
        return Polynomial(std::move(r));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (a.degree() + b.degree() > kMaxDegree) {
            throw Error(ErrorCode::DegreeOverflow,
                        "product degree " + std::to_string(a.degree() + b.degree()));
        }
        std::vector<Complex> r(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(r));
    }
    friend Polynomial operator*(Complex s, const Polynomial& p) { return Polynomial::constant(s) * p; }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

private:
    void validate() {
        while (!c_.empty() && c_.back() == Complex{}) c_.pop_back();
        if (degree() > kMaxDegree) {
            throw Error(ErrorCode::DegreeOverflow, "degree " + std::to_string(degree()) + " exceeds cap");
        }
        for (const auto& x : c_) {
            if (!is_finite(x)) throw Error(ErrorCode::InvalidArgument, "non-finite polynomial coefficient");
        }
    }

    std::vector<Complex> c_;
};

/// Coefficientwise k * c_k shift.
inline Polynomial derivative(const Polynomial& p) {
    if (p.degree() <= 0) return {};
    std::vector<Complex> d(static_cast<std::size_t>(p.degree()));
    for (int k = 1; k <= p.degree(); ++k) d[static_cast<std::size_t>(k - 1)] = static_cast<double>(k) * p.coeff(k);
    return Polynomial(std::move(d));
}

class RationalFunction {
public:
    RationalFunction() : den_(Polynomial::constant(1.0)) {}
    RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw Error(ErrorCode::InvalidArgument, "zero denominator polynomial");
        const Complex lead = den_.leading();
        if (lead != Complex{1.0}) {
            const Complex inv = 1.0 / lead;
            num_ = inv * num_;
            den_ = inv * den_;
        }
    }
    RationalFunction(Polynomial num) : RationalFunction(std::move(num), Polynomial::constant(1.0)) {}  // NOLINT
    RationalFunction(Complex c) : RationalFunction(Polynomial::constant(c)) {}  // NOLINT
    RationalFunction(double c) : RationalFunction(Complex{c}) {}  // NOLINT

    static RationalFunction identity() { return RationalFunction(Polynomial::identity()); }

    const Polynomial& num() const noexcept { return num_; }
    const Polynomial& den() const noexcept { return den_; }

    bool is_zero() const noexcept { return num_.is_zero(); }
    /// Structurally constant (both degrees zero); 2(z+1)/(z+1) is not detected.
    bool is_structurally_constant() const noexcept { return num_.degree() <= 0 && den_.degree() == 0; }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        if (a.den_ == b.den_) return {a.num_ + b.num_, a.den_};
        return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
    }
    friend RationalFunction operator-(const RationalFunction& a) { return {-a.num_, a.den_}; }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        return {a.num_ * b.num_, a.den_ * b.den_};
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.is_zero()) throw Error(ErrorCode::ZeroFunction, "division by the zero rational function");
        return {a.num_ * b.den_, a.den_ * b.num_};
    }
    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

private:
    Polynomial num_;
    Polynomial den_;
};

/// num(z)/den(z) on the Riemann sphere. Common roots at z are removed by
/// repeated synthetic division before dividing.
inline ExtendedComplex eval_rational(const RationalFunction& r, Complex z) {
    if (r.is_zero()) return Complex{};
    Polynomial num = r.num();
    Polynomial den = r.den();
    for (int guard = 0; guard <= 2 * kMaxDegree + 2; ++guard) {
        const bool den_zero = den.vanishes_at(z);
        if (!den_zero) return num(z) / den(z);
        if (!num.vanishes_at(z)) return ExtendedComplex::infinity();
        if (num.degree() <= 0 || den.degree() <= 0) break;
        num = num.deflate(z);
        den = den.deflate(z);
    }
    throw Error(ErrorCode::IndeterminateAtPoint, "numerator and denominator vanish identically");
}

inline ExtendedComplex value_at_infinity(const RationalFunction& r) {
    if (r.is_zero()) return Complex{};
    const int dn = r.num().degree();
    const int dd = r.den().degree();
    if (dn < dd) return Complex{};
    if (dn > dd) return ExtendedComplex::infinity();
    return r.num().leading() / r.den().leading();
}

/// R' as a rational function: (P'Q - PQ') / Q^2.
inline RationalFunction derivative(const RationalFunction& r) {
    const auto& p = r.num();
    const auto& q = r.den();
    if (q.degree() == 0) return {derivative(p), q};
    return {derivative(p) * q - p * derivative(q), q * q};
}

/// R'/R = (P'Q - PQ') / (PQ). The numerator degree is strictly below the
/// denominator degree whenever R is nonconstant.
inline RationalFunction log_derivative(const RationalFunction& r) {
    if (r.is_zero()) throw Error(ErrorCode::ZeroFunction, "log-derivative of the zero function");
    const auto& p = r.num();
    const auto& q = r.den();
    return {derivative(p) * q - p * derivative(q), p * q};
}

}  // namespace brody
