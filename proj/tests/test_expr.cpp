#include <gtest/gtest.h>

#include "brody/algebra.hpp"
#include "brody/expr.hpp"
#include "oracles.hpp"

using namespace brody;

namespace {

using K = Expr::Kind;

Complex value(const Expr& e, Complex z) {
    const Evaluation ev = eval(e, z);
    EXPECT_TRUE(ev.value.is_finite());
    return ev.value.is_finite() ? ev.value.value() : Complex{};
}

// Random expression of bounded depth built from the full grammar.
Expr random_expr(oracle::Rng& rng, int depth) {
    const double u = rng.uniform();
    if (depth == 0 || u < 0.15) {
        if (rng.uniform() < 0.5) return Expr::var();
        return Expr::constant({std::round(rng.uniform(-3, 3) * 4) / 4, std::round(rng.uniform(-1, 1) * 4) / 4});
    }
    const int pick = static_cast<int>(rng.uniform() * 7);
    switch (pick) {
        case 0: return random_expr(rng, depth - 1) + random_expr(rng, depth - 1);
        case 1: return random_expr(rng, depth - 1) - random_expr(rng, depth - 1);
        case 2: return random_expr(rng, depth - 1) * random_expr(rng, depth - 1);
        case 3: return random_expr(rng, depth - 1) / (random_expr(rng, depth - 1) + Expr::constant(4.0));
        case 4: return -random_expr(rng, depth - 1);
        case 5: return Expr::pow(random_expr(rng, depth - 1), static_cast<std::uint32_t>(rng.uniform() * 4));
        default: return Expr::exp(Expr::constant(0.5) * random_expr(rng, depth - 1));
    }
}

}  // namespace

TEST(Parse, SumOfExponentials) {
    const Expr e = parse("exp(z)+exp(1i*z)");
    ASSERT_EQ(e.kind(), K::Add);
    ASSERT_EQ(e.lhs().kind(), K::Exp);
    EXPECT_EQ(e.lhs().lhs().kind(), K::Var);
    ASSERT_EQ(e.rhs().kind(), K::Exp);
    const Expr& arg = e.rhs().lhs();
    ASSERT_EQ(arg.kind(), K::Mul);
    EXPECT_TRUE(arg.lhs().is_const(Complex{0, 1}));
    EXPECT_EQ(arg.rhs().kind(), K::Var);
}

TEST(Parse, QuotientStructure) {
    const Expr e = parse("z/(0.5*z+1)");
    ASSERT_EQ(e.kind(), K::Div);
    EXPECT_EQ(e.lhs().kind(), K::Var);
    const Expr& d = e.rhs();
    ASSERT_EQ(d.kind(), K::Add);
    ASSERT_EQ(d.lhs().kind(), K::Mul);
    EXPECT_TRUE(d.lhs().lhs().is_const(0.5));
    EXPECT_TRUE(d.rhs().is_const(1.0));
}

TEST(Parse, UnbalancedParenReportsOffset) {
    try {
        parse("exp(");
        FAIL() << "expected SyntaxError";
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.offset(), 4u);
        EXPECT_FALSE(e.expected().empty());
        EXPECT_EQ(e.code(), ErrorCode::SyntaxError);
    }
}

TEST(Parse, RejectsUnknownSymbolsAndTrailingInput) {
    EXPECT_THROW(parse("log(z)"), SyntaxError);
    EXPECT_THROW(parse("z z"), SyntaxError);
    EXPECT_THROW(parse(""), SyntaxError);
    EXPECT_THROW(parse("z^-1"), SyntaxError);
}

TEST(Parse, ComplexLiteralFolds) {
    const Expr e = parse("1+2i");
    ASSERT_TRUE(e.is_const());
    EXPECT_EQ(e.value(), Complex(1, 2));
    EXPECT_EQ(parse_complex("0+1i"), Complex(0, 1));
    EXPECT_EQ(parse_complex("-0.5"), Complex(-0.5, 0));
    EXPECT_THROW(parse_complex("z"), Error);
}

TEST(Parse, WhitespaceInsensitive) { EXPECT_EQ(parse(" exp ( z ) *  z "), parse("exp(z)*z")); }

TEST(Eval, Examples) {
    EXPECT_EQ(value(parse("exp(z)"), 0.0), Complex(1.0));
    EXPECT_EQ(value(parse("z/(0*z+1)"), Complex(3, 4)), Complex(3, 4));
    EXPECT_NEAR(std::abs(value(parse("exp(z)+exp(1i*z)"), 0.0) - Complex(2.0)), 0.0, 1e-15);
}

TEST(Eval, DivisionByZeroIsInfinity) {
    const Evaluation ev = eval(parse("1/z"), 0.0);
    EXPECT_TRUE(ev.value.is_infinite());
    EXPECT_FALSE(ev.overflow);
}

TEST(Eval, ExpOverflowFlagged) {
    const Evaluation ev = eval(parse("exp(z)"), 800.0);
    EXPECT_TRUE(ev.value.is_infinite());
    EXPECT_TRUE(ev.overflow);
    EXPECT_TRUE(eval(parse("exp(z)"), 650.0).value.is_finite());
}

TEST(Eval, IndeterminateFlagged) {
    const Evaluation ev = eval(parse("1/z - 1/z"), 0.0);
    EXPECT_TRUE(ev.indeterminate);
}

TEST(Differentiate, Examples) {
    EXPECT_EQ(differentiate(parse("exp(z)")), parse("exp(z)"));
    const Expr d = differentiate(parse("z*exp(z)"));
    for (const Complex x : {Complex{0.3, 0.2}, Complex{-1.0, 2.0}}) {
        EXPECT_NEAR(std::abs(value(d, x) - (std::exp(x) + x * std::exp(x))), 0.0, 1e-12);
    }
}

TEST(Differentiate, AgreesWithAlgebraModule) {
    const RationalFunction z = RationalFunction::identity(), one(1.0);
    const RationalFunction r = (z * z + one) / (z - one);
    const Expr d = differentiate(parse("(z^2+1)/(z-1)"));
    const RationalFunction dr = derivative(r);
    oracle::Rng rng(0);
    for (int i = 0; i < 10; ++i) {
        const Complex x = rng.in_disk(3.0);
        if (std::abs(x - 1.0) < 0.1) continue;
        const Complex want = eval_rational(dr, x).value();
        EXPECT_LE(std::abs(value(d, x) - want), 1e-6 * (1.0 + std::abs(want)));
    }
}

TEST(Differentiate, ConvertedRationalMatches) {
    const RationalFunction z = RationalFunction::identity(), one(1.0);
    const RationalFunction r = (RationalFunction(2.0) * z + one) / (z * z - RationalFunction(3.0));
    const Expr e = to_expr(r);
    for (const Complex x : {Complex{0.5, 0.5}, Complex{-2.0, 1.0}}) {
        EXPECT_NEAR(std::abs(value(e, x) - eval_rational(r, x).value()), 0.0, 1e-12);
    }
}

TEST(Substitute, AffineArgument) {
    const Expr f = parse("exp(z)+z");
    const Expr g = substitute(f, parse("2*z+1"));
    EXPECT_NEAR(std::abs(value(g, Complex{0.5, 1}) - value(f, Complex{2, 2})), 0.0, 1e-12);
}

TEST(ExprProperty, SymbolicMatchesFiniteDifferences) {
    oracle::Rng rng(0);
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
        const Expr e = random_expr(rng, 1 + i % 6);
        const Expr d = differentiate(e);
        for (int j = 0; j < 20; ++j) {
            const Complex x = rng.in_disk(2.0);
            // Keep away from poles: require modest values in a small neighbourhood.
            bool ok = true;
            for (const Complex off : {Complex{0.1}, Complex{-0.1}, Complex{0, 0.1}, Complex{0, -0.1}, Complex{}}) {
                const auto ev = eval(e, x + off);
                ok = ok && ev.value.is_finite() && std::abs(ev.value.value()) < 1e6;
            }
            const auto dv = eval(d, x);
            if (!ok || !dv.value.is_finite()) continue;
            const Complex sym = dv.value.value();
            const Complex fd = oracle::central_difference([&](Complex w) { return eval(e, w).value.value(); }, x);
            EXPECT_LE(std::abs(sym - fd), 1e-4 * (1.0 + std::abs(sym))) << unparse(e) << " at " << x;
            ++checked;
        }
    }
    EXPECT_GT(checked, 4000);
}

TEST(ExprProperty, UnparseRoundTrip) {
    oracle::Rng rng(0);
    for (int i = 0; i < 1000; ++i) {
        const Expr e = random_expr(rng, 1 + i % 6);
        const std::string s = unparse(e);
        EXPECT_EQ(parse(s), e) << s;
    }
}

TEST(ExprProperty, CorpusRoundTrip) {
    for (const char* src : {"exp(z)+exp(1i*z)", "z/(0.5*z+1)", "exp(z)+z", "z*exp(z)+z", "exp(z)+z/(2*z+1)",
                            "exp(z)+exp(-1*z)", "exp(z^2)", "(z^2+1)/(z-2)", "z*(exp(z)+1)", "exp(z)+exp(0.5*z)"}) {
        const Expr e = parse(src);
        const std::string once = unparse(e);
        EXPECT_EQ(parse(once), e) << src;
        EXPECT_EQ(unparse(parse(once)), once) << src;
    }
}
