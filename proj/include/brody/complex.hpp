#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>

namespace brody {

using Complex = std::complex<double>;

inline bool is_finite(Complex z) noexcept {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// A point of the Riemann sphere: a finite complex number or the single
/// point at infinity.
class ExtendedComplex {
public:
    constexpr ExtendedComplex() = default;
    constexpr ExtendedComplex(Complex z) : value_(z) {}  // NOLINT(implicit)
    constexpr ExtendedComplex(double x) : value_(Complex(x, 0.0)) {}  // NOLINT(implicit)

    static constexpr ExtendedComplex infinity() {
        ExtendedComplex e;
        e.value_.reset();
        return e;
    }

    constexpr bool is_infinite() const noexcept { return !value_.has_value(); }
    constexpr bool is_finite() const noexcept { return value_.has_value(); }

    /// Precondition: is_finite().
    constexpr Complex value() const { return *value_; }

    friend bool operator==(const ExtendedComplex& a, const ExtendedComplex& b) {
        return a.value_ == b.value_;
    }

private:
    std::optional<Complex> value_ = Complex{};
};

/// Complex number with a separate binary exponent: value = m * 2^e.
/// Used where exp() of large arguments would overflow a plain double.
struct ScaledComplex {
    Complex m{};
    std::int64_t e = 0;

    ScaledComplex() = default;
    ScaledComplex(Complex z) : m(z) { normalize(); }  // NOLINT(implicit)
    ScaledComplex(Complex mant, std::int64_t exponent) : m(mant), e(exponent) { normalize(); }

    bool is_zero() const noexcept { return m == Complex{}; }
    bool valid() const noexcept { return brody::is_finite(m); }

    double log_abs() const {
        if (is_zero()) return -std::numeric_limits<double>::infinity();
        return std::log(std::abs(m)) + static_cast<double>(e) * std::numbers::ln2;
    }

    /// Conversion to a plain complex; overflows to inf, underflows to 0.
    Complex to_complex() const {
        if (e > 4000) return {std::copysign(HUGE_VAL, m.real()), std::copysign(HUGE_VAL, m.imag())};
        if (e < -4000) return {};
        const int ei = static_cast<int>(e);
        return {std::ldexp(m.real(), ei), std::ldexp(m.imag(), ei)};
    }

    void normalize() {
        if (!valid() || is_zero()) {
            if (is_zero()) e = 0;
            return;
        }
        int shift = 0;
        std::frexp(std::max(std::abs(m.real()), std::abs(m.imag())), &shift);
        m = {std::ldexp(m.real(), -shift), std::ldexp(m.imag(), -shift)};
        e += shift;
    }

    friend ScaledComplex operator*(const ScaledComplex& a, const ScaledComplex& b) {
        return {a.m * b.m, a.e + b.e};
    }
    friend ScaledComplex operator/(const ScaledComplex& a, const ScaledComplex& b) {
        return {a.m / b.m, a.e - b.e};
    }
    friend ScaledComplex operator-(const ScaledComplex& a) { return {-a.m, a.e}; }
    friend ScaledComplex operator+(const ScaledComplex& a, const ScaledComplex& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        const auto& big = a.e >= b.e ? a : b;
        const auto& small = a.e >= b.e ? b : a;
        const std::int64_t gap = big.e - small.e;
        if (gap > 1100) return big;
        const int g = static_cast<int>(gap);
        const Complex aligned{std::ldexp(small.m.real(), -g), std::ldexp(small.m.imag(), -g)};
        return {big.m + aligned, big.e};
    }
    friend ScaledComplex operator-(const ScaledComplex& a, const ScaledComplex& b) { return a + (-b); }
};

/// exp of a scaled argument. Returns an invalid value (NaN mantissa) when the
/// real part is too large even for the extended exponent.
inline ScaledComplex scaled_exp(const ScaledComplex& w) {
    const Complex arg = w.to_complex();
    if (!std::isfinite(arg.real())) {
        if (arg.real() < 0 && std::isfinite(arg.imag())) return ScaledComplex{};
        return ScaledComplex{Complex{std::nan(""), std::nan("")}, 0};
    }
    const double x = arg.real();
    if (std::abs(x) > 1e18) {
        if (x < 0) return ScaledComplex{};
        return ScaledComplex{Complex{std::nan(""), std::nan("")}, 0};
    }
    const double k = std::floor(x / std::numbers::ln2);
    const double rem = x - k * std::numbers::ln2;
    const Complex unit = std::polar(std::exp(rem), arg.imag());
    return {unit, static_cast<std::int64_t>(k)};
}

}  // namespace brody
