#pragma once

// A small language of complex functions: constants, the variable z,
// + - * /, unary minus, nonnegative integer powers and exp.
//
//   expr   := term (("+"|"-") term)* ;
//   term   := factor (("*"|"/") factor)* ;
//   factor := base ("^" uint)? ;
//   base   := number | "z" | "(" expr ")" | "exp" "(" expr ")" | "-" base ;
//   number := digits ("." digits)? "i"? ;
//
// Trees are immutable and shared. Operations whose operands are all
// constants are folded at construction time.

#include <charconv>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "brody/algebra.hpp"
#include "brody/complex.hpp"
#include "brody/error.hpp"

namespace brody {

class Expr {
public:
    enum class Kind { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Exp };

    static Expr constant(Complex c);
    static Expr var();
    static Expr add(const Expr& a, const Expr& b) { return binary(Kind::Add, a, b); }
    static Expr sub(const Expr& a, const Expr& b) { return binary(Kind::Sub, a, b); }
    static Expr mul(const Expr& a, const Expr& b) { return binary(Kind::Mul, a, b); }
    static Expr div(const Expr& a, const Expr& b) { return binary(Kind::Div, a, b); }
    static Expr neg(const Expr& a);
    static Expr pow(const Expr& base, std::uint32_t n);
    static Expr exp(const Expr& a);

    Kind kind() const noexcept;
    bool is_const() const noexcept { return kind() == Kind::Const; }
    bool is_const(Complex c) const noexcept { return is_const() && value() == c; }
    Complex value() const noexcept;
    std::uint32_t power() const noexcept;
    /// Left operand of a binary node, or the operand of Neg/Pow/Exp.
    const Expr& lhs() const noexcept;
    const Expr& rhs() const noexcept;

    friend bool operator==(const Expr& x, const Expr& y) {
        if (x.node_ == y.node_) return true;
        if (x.kind() != y.kind()) return false;
        switch (x.kind()) {
            case Kind::Const: return x.value() == y.value();
            case Kind::Var: return true;
            case Kind::Neg:
            case Kind::Exp: return x.lhs() == y.lhs();
            case Kind::Pow: return x.power() == y.power() && x.lhs() == y.lhs();
            default: return x.lhs() == y.lhs() && x.rhs() == y.rhs();
        }
    }

    friend Expr operator+(const Expr& a, const Expr& b) { return add(a, b); }
    friend Expr operator-(const Expr& a, const Expr& b) { return sub(a, b); }
    friend Expr operator*(const Expr& a, const Expr& b) { return mul(a, b); }
    friend Expr operator/(const Expr& a, const Expr& b) { return div(a, b); }
    friend Expr operator-(const Expr& a) { return neg(a); }

    static Complex ipow(Complex x, std::uint32_t n) {
        Complex acc{1.0};
        while (n) {
            if (n & 1u) acc *= x;
            n >>= 1u;
            if (n) x *= x;
        }
        return acc;
    }

private:
    struct Node;
    // Empty handle; only used for the unused child slots of leaf nodes.
    Expr() = default;
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Expr make(Kind k, Complex v, std::uint32_t n, const Expr& a, const Expr& b);
    static Expr binary(Kind k, const Expr& a, const Expr& b);

    std::shared_ptr<const Node> node_;
};

struct Expr::Node {
    Kind kind;
    Complex value;
    std::uint32_t power;
    Expr a;
    Expr b;
};

inline Expr Expr::make(Kind k, Complex v, std::uint32_t n, const Expr& a, const Expr& b) {
    return Expr(std::make_shared<const Node>(Node{k, v, n, a, b}));
}

inline Expr::Kind Expr::kind() const noexcept { return node_->kind; }
inline Complex Expr::value() const noexcept { return node_->value; }
inline std::uint32_t Expr::power() const noexcept { return node_->power; }
inline const Expr& Expr::lhs() const noexcept { return node_->a; }
inline const Expr& Expr::rhs() const noexcept { return node_->b; }

inline Expr Expr::constant(Complex c) {
    if (!is_finite(c)) throw Error(ErrorCode::InvalidArgument, "non-finite constant");
    return make(Kind::Const, c, 0, {}, {});
}

inline Expr Expr::var() { return make(Kind::Var, {}, 0, {}, {}); }

inline Expr Expr::neg(const Expr& a) {
    if (a.is_const()) return constant(-a.value());
    return make(Kind::Neg, {}, 0, a, {});
}

inline Expr Expr::pow(const Expr& base, std::uint32_t n) {
    if (base.is_const()) {
        const Complex v = ipow(base.value(), n);
        if (is_finite(v)) return constant(v);
    }
    return make(Kind::Pow, {}, n, base, {});
}

inline Expr Expr::exp(const Expr& a) {
    if (a.is_const()) {
        const Complex v = std::exp(a.value());
        if (is_finite(v)) return constant(v);
    }
    return make(Kind::Exp, {}, 0, a, {});
}

inline Expr Expr::binary(Kind k, const Expr& a, const Expr& b) {
    if (a.is_const() && b.is_const()) {
        Complex v;
        switch (k) {
            case Kind::Add: v = a.value() + b.value(); break;
            case Kind::Sub: v = a.value() - b.value(); break;
            case Kind::Mul: v = a.value() * b.value(); break;
            default: v = b.value() == Complex{} ? Complex{NAN, NAN} : a.value() / b.value(); break;
        }
        if (is_finite(v)) return constant(v);
    }
    return make(k, {}, 0, a, b);
}

// ---------------------------------------------------------------------------
// Evaluation

/// Result of evaluating an expression on the Riemann sphere.
struct Evaluation {
    ExtendedComplex value;
    /// A float overflow (typically exp of a large argument) produced the value.
    bool overflow = false;
    /// An undefined combination occurred (inf - inf, 0 * inf, 0/0, ...).
    bool indeterminate = false;
};

namespace detail {

enum class EvalState { Finite, Pole, Overflow, Invalid };

template <class T>
struct Partial {
    T v{};
    EvalState s = EvalState::Finite;
};

inline bool is_zero_value(Complex x) { return x == Complex{}; }
inline bool is_zero_value(const ScaledComplex& x) { return x.is_zero(); }
inline bool valid_value(Complex x) { return is_finite(x); }
inline bool valid_value(const ScaledComplex& x) { return x.valid(); }

inline Complex exp_value(Complex w, bool& overflow) {
    if (w.real() > 700.0) {
        overflow = true;
        return {};
    }
    return std::exp(w);
}
inline ScaledComplex exp_value(const ScaledComplex& w, bool& overflow) {
    ScaledComplex r = scaled_exp(w);
    if (!r.valid()) overflow = true;
    return r;
}

inline bool infinite(EvalState s) { return s == EvalState::Pole || s == EvalState::Overflow; }

inline EvalState merge_infinite(EvalState a, EvalState b) {
    return (a == EvalState::Overflow || b == EvalState::Overflow) ? EvalState::Overflow : EvalState::Pole;
}

template <class T>
Partial<T> finite_or_overflow(T v) {
    if (valid_value(v)) return {v, EvalState::Finite};
    return {T{}, EvalState::Overflow};
}

template <class T>
Partial<T> evaluate(const Expr& e, const T& z) {
    using K = Expr::Kind;
    using S = EvalState;
    switch (e.kind()) {
        case K::Const: return {T(e.value()), S::Finite};
        case K::Var: return {z, S::Finite};
        case K::Neg: {
            auto a = evaluate(e.lhs(), z);
            if (a.s == S::Finite) a.v = -a.v;
            return a;
        }
        case K::Exp: {
            auto a = evaluate(e.lhs(), z);
            if (a.s != S::Finite) return {T{}, S::Invalid};
            bool overflow = false;
            T r = exp_value(a.v, overflow);
            if (overflow) return {T{}, S::Overflow};
            return {r, S::Finite};
        }
        case K::Pow: {
            if (e.power() == 0) return {T(Complex{1.0}), S::Finite};
            auto a = evaluate(e.lhs(), z);
            if (a.s != S::Finite) return a;
            T acc(Complex{1.0});
            T x = a.v;
            std::uint32_t n = e.power();
            while (n) {
                if (n & 1u) acc = acc * x;
                n >>= 1u;
                if (n) x = x * x;
            }
            return finite_or_overflow(acc);
        }
        default: break;
    }

    const auto a = evaluate(e.lhs(), z);
    const auto b = evaluate(e.rhs(), z);
    if (a.s == S::Invalid || b.s == S::Invalid) return {T{}, S::Invalid};
    switch (e.kind()) {
        case K::Add:
        case K::Sub:
            if (infinite(a.s) && infinite(b.s)) return {T{}, S::Invalid};
            if (infinite(a.s)) return a;
            if (infinite(b.s)) return b;
            return finite_or_overflow(e.kind() == K::Add ? T(a.v + b.v) : T(a.v - b.v));
        case K::Mul:
            if (infinite(a.s) || infinite(b.s)) {
                if ((a.s == S::Finite && is_zero_value(a.v)) || (b.s == S::Finite && is_zero_value(b.v))) {
                    return {T{}, S::Invalid};
                }
                return {T{}, merge_infinite(a.s, b.s)};
            }
            return finite_or_overflow(T(a.v * b.v));
        case K::Div:
            if (infinite(a.s) && infinite(b.s)) return {T{}, S::Invalid};
            if (infinite(b.s)) return {T{}, S::Finite};
            if (infinite(a.s)) return a;
            if (is_zero_value(b.v)) {
                if (is_zero_value(a.v)) return {T{}, S::Invalid};
                return {T{}, S::Pole};
            }
            return finite_or_overflow(T(a.v / b.v));
        default: return {T{}, S::Invalid};
    }
}

}  // namespace detail

/// Standard complex semantics. Exact division by zero gives Infinity; exp of
/// an argument with real part above 700 gives Infinity with the overflow flag.
inline Evaluation eval(const Expr& e, Complex z) {
    const auto p = detail::evaluate<Complex>(e, z);
    switch (p.s) {
        case detail::EvalState::Finite: return {p.v, false, false};
        case detail::EvalState::Pole: return {ExtendedComplex::infinity(), false, false};
        case detail::EvalState::Overflow: return {ExtendedComplex::infinity(), true, false};
        case detail::EvalState::Invalid: break;
    }
    return {ExtendedComplex::infinity(), false, true};
}

// ---------------------------------------------------------------------------
// Symbolic differentiation

namespace detail {

// Constructors that also drop additive zeros and multiplicative ones, which
// keeps derivative trees from growing with dead branches.
inline Expr d_add(const Expr& a, const Expr& b) {
    if (a.is_const(0.0)) return b;
    if (b.is_const(0.0)) return a;
    return a + b;
}
inline Expr d_sub(const Expr& a, const Expr& b) {
    if (b.is_const(0.0)) return a;
    if (a.is_const(0.0)) return -b;
    return a - b;
}
inline Expr d_mul(const Expr& a, const Expr& b) {
    if (a.is_const(0.0) || b.is_const(0.0)) return Expr::constant(0.0);
    if (a.is_const(1.0)) return b;
    if (b.is_const(1.0)) return a;
    return a * b;
}

}  // namespace detail

/// Exact derivative by the sum, product, quotient and chain rules.
inline Expr differentiate(const Expr& e) {
    using K = Expr::Kind;
    using namespace detail;
    switch (e.kind()) {
        case K::Const: return Expr::constant(0.0);
        case K::Var: return Expr::constant(1.0);
        case K::Add: return d_add(differentiate(e.lhs()), differentiate(e.rhs()));
        case K::Sub: return d_sub(differentiate(e.lhs()), differentiate(e.rhs()));
        case K::Neg: {
            const Expr d = differentiate(e.lhs());
            return d.is_const(0.0) ? d : -d;
        }
        case K::Mul:
            return d_add(d_mul(differentiate(e.lhs()), e.rhs()), d_mul(e.lhs(), differentiate(e.rhs())));
        case K::Div: {
            const Expr& u = e.lhs();
            const Expr& v = e.rhs();
            const Expr top = d_sub(d_mul(differentiate(u), v), d_mul(u, differentiate(v)));
            if (top.is_const(0.0)) return top;
            return top / Expr::pow(v, 2);
        }
        case K::Pow: {
            const std::uint32_t n = e.power();
            if (n == 0) return Expr::constant(0.0);
            const Expr inner = n == 1 ? Expr::constant(1.0) : (n == 2 ? e.lhs() : Expr::pow(e.lhs(), n - 1));
            return d_mul(d_mul(Expr::constant(static_cast<double>(n)), inner), differentiate(e.lhs()));
        }
        case K::Exp: return d_mul(e, differentiate(e.lhs()));
    }
    return Expr::constant(0.0);
}

/// e with every occurrence of z replaced by `replacement`.
inline Expr substitute(const Expr& e, const Expr& replacement) {
    using K = Expr::Kind;
    switch (e.kind()) {
        case K::Const: return e;
        case K::Var: return replacement;
        case K::Neg: return -substitute(e.lhs(), replacement);
        case K::Exp: return Expr::exp(substitute(e.lhs(), replacement));
        case K::Pow: return Expr::pow(substitute(e.lhs(), replacement), e.power());
        case K::Add: return substitute(e.lhs(), replacement) + substitute(e.rhs(), replacement);
        case K::Sub: return substitute(e.lhs(), replacement) - substitute(e.rhs(), replacement);
        case K::Mul: return substitute(e.lhs(), replacement) * substitute(e.rhs(), replacement);
        case K::Div: return substitute(e.lhs(), replacement) / substitute(e.rhs(), replacement);
    }
    return e;
}

inline Expr to_expr(const Polynomial& p) {
    const Expr z = Expr::var();
    Expr acc = Expr::constant(0.0);
    for (int k = 0; k <= p.degree(); ++k) {
        const Complex c = p.coeff(k);
        if (c == Complex{}) continue;
        Expr term = k == 0 ? Expr::constant(c) : (k == 1 ? z : Expr::pow(z, static_cast<std::uint32_t>(k)));
        if (k > 0 && c != Complex{1.0}) term = Expr::constant(c) * term;
        acc = acc.is_const(0.0) ? term : acc + term;
    }
    return acc;
}

inline Expr to_expr(const RationalFunction& r) {
    const Expr num = to_expr(r.num());
    if (r.den().degree() == 0) return num;
    return num / to_expr(r.den());
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline std::string format_real(double x) {
    char buf[512];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed);
    return std::string(buf, res.ptr);
}

inline std::string format_constant(Complex c, int& level) {
    const double re = c.real();
    const double im = c.imag();
    level = 4;
    if (im == 0.0 && !(re < 0.0)) return format_real(std::abs(re));
    if (re == 0.0 && im > 0.0) return format_real(im) + "i";
    std::string s = "(";
    if (re != 0.0 || im == 0.0) {
        s += (re < 0.0 ? "-" : "") + format_real(std::abs(re));
        if (im != 0.0) s += im < 0.0 ? "-" : "+";
    } else if (im < 0.0) {
        s += "-";
    }
    if (im != 0.0) s += format_real(std::abs(im)) + "i";
    return s + ")";
}

// Precedence: 1 = expr, 2 = term, 3 = factor, 4 = base.
inline std::string unparse_at(const Expr& e, int required) {
    using K = Expr::Kind;
    std::string s;
    int level = 4;
    switch (e.kind()) {
        case K::Const: s = format_constant(e.value(), level); break;
        case K::Var: s = "z"; break;
        case K::Add: s = unparse_at(e.lhs(), 1) + "+" + unparse_at(e.rhs(), 2); level = 1; break;
        case K::Sub: s = unparse_at(e.lhs(), 1) + "-" + unparse_at(e.rhs(), 2); level = 1; break;
        case K::Mul: s = unparse_at(e.lhs(), 2) + "*" + unparse_at(e.rhs(), 3); level = 2; break;
        case K::Div: s = unparse_at(e.lhs(), 2) + "/" + unparse_at(e.rhs(), 3); level = 2; break;
        case K::Pow: s = unparse_at(e.lhs(), 4) + "^" + std::to_string(e.power()); level = 3; break;
        case K::Neg: s = "-" + unparse_at(e.lhs(), 4); break;
        case K::Exp: s = "exp(" + unparse_at(e.lhs(), 1) + ")"; break;
    }
    return level < required ? "(" + s + ")" : s;
}

}  // namespace detail

/// Canonical source text; parse(unparse(e)) == e.
inline std::string unparse(const Expr& e) { return detail::unparse_at(e, 1); }

// ---------------------------------------------------------------------------
// Parsing

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t offset, std::vector<std::string> expected)
        : Error(ErrorCode::SyntaxError, describe(offset, expected)), offset_(offset), expected_(std::move(expected)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    static std::string describe(std::size_t offset, const std::vector<std::string>& expected) {
        std::string s = "at offset " + std::to_string(offset) + ", expected one of:";
        for (const auto& t : expected) s += " '" + t + "'";
        return s;
    }

    std::size_t offset_;
    std::vector<std::string> expected_;
};

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expr parse_all() {
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != src_.size()) throw SyntaxError(pos_, {"+", "-", "*", "/", "end of input"});
        return e;
    }

private:
    static constexpr int kMaxDepth = 256;

    Expr parse_expr() {
        DepthGuard guard(*this);
        Expr acc = parse_term();
        for (;;) {
            skip_ws();
            if (consume('+')) acc = acc + parse_term();
            else if (consume('-')) acc = acc - parse_term();
            else return acc;
        }
    }

    Expr parse_term() {
        Expr acc = parse_factor();
        for (;;) {
            skip_ws();
            if (consume('*')) acc = acc * parse_factor();
            else if (consume('/')) acc = acc / parse_factor();
            else return acc;
        }
    }

    Expr parse_factor() {
        Expr base = parse_base();
        skip_ws();
        if (!consume('^')) return base;
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
        std::uint32_t n = 0;
        const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, n);
        if (start == pos_) throw SyntaxError(start, {"unsigned integer"});
        if (res.ec != std::errc{}) throw SyntaxError(start, {"unsigned integer below 2^32"});
        return Expr::pow(base, n);
    }

    Expr parse_base() {
        DepthGuard guard(*this);
        skip_ws();
        if (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (is_digit(c)) return parse_number();
            if (src_.substr(pos_, 3) == "exp") {
                pos_ += 3;
                skip_ws();
                expect('(');
                Expr arg = parse_expr();
                skip_ws();
                expect(')');
                return Expr::exp(arg);
            }
            if (c == 'z') {
                ++pos_;
                return Expr::var();
            }
            if (c == '(') {
                ++pos_;
                Expr inner = parse_expr();
                skip_ws();
                expect(')');
                return inner;
            }
            if (c == '-') {
                ++pos_;
                return -parse_base();
            }
        }
        throw SyntaxError(pos_, {"number", "z", "(", "exp", "-"});
    }

    Expr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            if (pos_ >= src_.size() || !is_digit(src_[pos_])) throw SyntaxError(pos_, {"digit"});
            while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
        }
        double x = 0.0;
        const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, x);
        if (res.ec != std::errc{} || !std::isfinite(x)) throw SyntaxError(start, {"finite number"});
        if (pos_ < src_.size() && src_[pos_] == 'i') {
            ++pos_;
            return Expr::constant({0.0, x});
        }
        return Expr::constant(x);
    }

    void skip_ws() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r'))
            ++pos_;
    }
    bool consume(char c) {
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!consume(c)) throw SyntaxError(pos_, {std::string(1, c)});
    }
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }

    struct DepthGuard {
        explicit DepthGuard(Parser& p) : p_(p) {
            if (++p_.depth_ > kMaxDepth) throw SyntaxError(p_.pos_, {"shallower nesting"});
        }
        ~DepthGuard() { --p_.depth_; }
        DepthGuard(const DepthGuard&) = delete;
        DepthGuard& operator=(const DepthGuard&) = delete;
        Parser& p_;
    };

    std::string_view src_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

}  // namespace detail

inline Expr parse(std::string_view src) { return detail::Parser(src).parse_all(); }

/// Parses a complex literal such as "2", "-0.5", "1+2i" or "0+1i".
inline Complex parse_complex(std::string_view src) {
    const Expr e = parse(src);
    if (!e.is_const()) throw Error(ErrorCode::ParseError, "not a complex constant: " + std::string(src));
    return e.value();
}

}  // namespace brody
