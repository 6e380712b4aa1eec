#include <gtest/gtest.h>

#include <numbers>

#include "brody/classify.hpp"
#include "oracles.hpp"

using namespace brody;

namespace {

RationalFunction z() { return RationalFunction::identity(); }
const RationalFunction one(1.0);
const Complex I{0.0, 1.0};

BrodyStatus exp_rational(const RationalFunction& r, const RationalFunction& q) { return classify_exp_rational(r, q).status; }

}  // namespace

TEST(ExpRational, Examples) {
    const auto v0 = classify_exp_rational(RationalFunction(0.0), z() * z() * z());
    EXPECT_EQ(v0.status, BrodyStatus::Brody);
    EXPECT_NE(v0.reason().find("identically zero"), std::string::npos);
    EXPECT_EQ(exp_rational(one, z()), BrodyStatus::NotBrody);
    EXPECT_EQ(exp_rational(z(), RationalFunction(0.0)), BrodyStatus::Brody);
}

TEST(ExpRational, TwoParameterFamily) {
    // s e^z + z/(t z - 1) is Brody iff s = 0 or t != 0.
    const std::vector<Complex> grid{0.0, 1.0, -1.0, 2.0, I};
    for (const Complex s : grid) {
        for (const Complex t : grid) {
            const RationalFunction q = z() / (RationalFunction(t) * z() - one);
            const bool brody = exp_rational(RationalFunction(s), q) == BrodyStatus::Brody;
            EXPECT_EQ(brody, s == Complex{} || t != Complex{}) << "s=" << s << " t=" << t;
        }
    }
}

TEST(ExpRational, ShiftFamilyBrodyIffTNonzero) {
    for (const Complex t : {Complex{0.0}, Complex{2.0}, I, Complex{-0.5}}) {
        const RationalFunction q = z() / (RationalFunction(t) * z() + one);
        EXPECT_EQ(exp_rational(one, q) == BrodyStatus::Brody, t != Complex{});
    }
}

TEST(ExpRationalProperty, InvariantUnderConstantShiftOfQ) {
    oracle::Rng rng(0);
    for (int i = 0; i < 300; ++i) {
        std::vector<Complex> nc, dc;
        const int dn = static_cast<int>(rng.uniform() * 4), dd = static_cast<int>(rng.uniform() * 4);
        for (int k = 0; k <= dn; ++k) nc.emplace_back(rng.uniform(-2, 2), rng.uniform(-2, 2));
        for (int k = 0; k <= dd; ++k) dc.emplace_back(rng.uniform(-2, 2), rng.uniform(-2, 2));
        const RationalFunction q{Polynomial(nc), Polynomial(dc)};
        const RationalFunction r = rng.uniform() < 0.2 ? RationalFunction(0.0) : RationalFunction(Polynomial(nc));
        const Complex c{rng.uniform(-5, 5), rng.uniform(-5, 5)};
        EXPECT_EQ(exp_rational(r, q), exp_rational(r, q + RationalFunction(c)));
    }
}

TEST(ExpRational, NotBrodyCasesHaveGrowingWitness) {
    const std::vector<std::pair<RationalFunction, RationalFunction>> cases{
        {one, z()}, {z(), z()}, {one / z(), z() * z()}, {one, z() / (RationalFunction(0.0) * z() - one)}};
    for (const auto& [r, q] : cases) {
        ASSERT_EQ(exp_rational(r, q), BrodyStatus::NotBrody);
        const auto w = exp_rational_witness(r, q);
        ASSERT_TRUE(w.has_value());
        EXPECT_TRUE(w->monotone);
    }
}

TEST(TwoExp, Verdicts) {
    EXPECT_EQ(classify_two_exponentials({2.0}).status, BrodyStatus::Brody);
    EXPECT_EQ(classify_two_exponentials({1.0}).status, BrodyStatus::Brody);
    const auto vi = classify_two_exponentials({I});
    EXPECT_EQ(vi.status, BrodyStatus::NotBrody);
    EXPECT_EQ(vi.reason(), "two-exp: lambda not real");
    ASSERT_TRUE(vi.witness.has_value());
    EXPECT_TRUE(vi.witness->monotone);
    for (std::size_t i = 1; i < vi.witness->points.size(); ++i) {
        EXPECT_GT(vi.witness->points[i].value, 10.0 * vi.witness->points[i - 1].value);
    }
    // Any nonzero imaginary part is enough.
    EXPECT_EQ(classify_two_exponentials({Complex{0.5, 1e-300}}).status, BrodyStatus::NotBrody);
}

TEST(TwoExp, ZeroExamples) {
    const Complex a = two_exp_zero({I}, 0);
    EXPECT_NEAR(a.real(), -std::numbers::pi / 2, 1e-14);
    EXPECT_NEAR(a.imag(), std::numbers::pi / 2, 1e-14);
    const Complex b = two_exp_zero({-1.0}, 0);
    EXPECT_NEAR(std::abs(b - Complex{0, std::numbers::pi / 2}), 0.0, 1e-15);
    EXPECT_THROW(two_exp_zero({1.0}, 0), Error);
    EXPECT_THROW(two_exp_slope({1.0}, 0), Error);
}

TEST(TwoExp, ZerosAreZeros) {
    const TwoExpParams p{Complex{2.0, 1.0}};
    const Expr f = two_exp_expr(p);
    for (long k = -3; k <= 3; ++k) {
        const Complex a = two_exp_zero(p, k);
        const Complex v = eval(f, a).value.value();
        EXPECT_LE(std::abs(v), 1e-9 * (1 + std::abs(std::exp(a))));
    }
}

TEST(TwoExp, SlopeMatchesSymbolicDerivative) {
    for (const Complex lam : {I, Complex{2.0, 1.0}, Complex{0.5}, Complex{-2.0}}) {
        const TwoExpParams p{lam};
        const Expr df = differentiate(two_exp_expr(p));
        for (long k = -3; k <= 3; ++k) {
            const Complex want = eval(df, two_exp_zero(p, k)).value.value();
            EXPECT_LE(std::abs(two_exp_slope(p, k) - want), 1e-8 * std::abs(want));
        }
    }
}

TEST(TwoExp, SlopeClosedFormForI) {
    for (int k = -3; k <= 2; ++k) {
        const double got = std::abs(two_exp_slope({I}, k));
        EXPECT_NEAR(got / oracle::two_exp_i_slope(k), 1.0, 1e-12);
    }
    EXPECT_NEAR(std::abs(two_exp_slope({I}, -1)), 6.80304, 1e-5);
    EXPECT_NEAR(two_exp_slope_ratio({I}), std::exp(-std::numbers::pi), 1e-15);
    EXPECT_NEAR(two_exp_slope_ratio({I}), 0.04322, 1e-5);
}

TEST(TwoExpProperty, SlopeRatioIsOneIffLambdaReal) {
    for (double re = -3.0; re <= 3.0; re += 0.25) {
        for (double im = -2.0; im <= 2.0; im += 0.25) {
            const Complex lam{re, im};
            if (lam == Complex{1.0}) continue;
            const double ratio = two_exp_slope_ratio({lam});
            if (im == 0.0) {
                EXPECT_NEAR(ratio, 1.0, 1e-12);
            } else {
                EXPECT_GT(std::abs(ratio - 1.0), 1e-6) << lam;
            }
        }
    }
}

TEST(TwoExp, BoundValues) {
    EXPECT_NEAR(two_exp_bound({0.5}), 5.0, 1e-12);
    EXPECT_NEAR(two_exp_bound({1.0}), 0.5, 0.0);
    EXPECT_NEAR(two_exp_bound({0.0}), 3.0, 1e-12);
    EXPECT_NEAR(two_exp_bound({2.0}), 10.0, 1e-12);
    EXPECT_THROW(two_exp_bound({I}), Error);
    // The bound degrades as lambda approaches one from below.
    EXPECT_LT(two_exp_bound({0.9}), two_exp_bound({0.99}));
    EXPECT_LT(two_exp_bound({0.99}), two_exp_bound({0.999}));
}

TEST(TwoExp, SampledSupRespectsBound) {
    for (const double lam : {0.5, 2.0, -0.5, -2.0, -1.0, 0.0}) {
        const TwoExpParams p{lam};
        const double bound = two_exp_bound(p);
        const double m = sup_search(two_exp_expr(p), 30.0, 20000).max_value;
        EXPECT_LE(m, bound) << "lambda=" << lam;
        const auto v = classify_two_exponentials(p);
        ASSERT_TRUE(v.bound.has_value());
        EXPECT_EQ(*v.bound, bound);
    }
}

TEST(Product, PreservesBrody) {
    EXPECT_TRUE(preserves_brody_product((z() + one) / (z() + RationalFunction(2.0))));
    EXPECT_FALSE(preserves_brody_product(z()));
    EXPECT_FALSE(preserves_brody_product(one / z()));
    EXPECT_EQ(classify_product(z()).status, BrodyStatus::Unknown);
    EXPECT_EQ(classify_product((z() + one) / (z() + RationalFunction(2.0))).status, BrodyStatus::Brody);
}

TEST(Product, CounterexampleGrows) {
    // z (e^z + 1) is not Brody although e^z + 1 is.
    const Expr g = parse("z*(exp(z)+1)");
    const double a = sup_search(g, 10.0, 20000).max_value;
    const double b = sup_search(g, 40.0, 20000).max_value;
    EXPECT_GT(b, 1.5 * a);
}

TEST(Lipschitz, Examples) {
    EXPECT_NEAR(rational_sphere_lipschitz(z(), 20000), 1.0, 1e-3);
    EXPECT_NEAR(rational_sphere_lipschitz(z() * z(), 20000), oracle::square_map_stretch(), 0.01);
    EXPECT_NEAR(rational_sphere_lipschitz(z() * z(), 20000), 2.0, 0.01);
    EXPECT_NEAR(rational_sphere_lipschitz(one / z(), 20000), 1.0, 1e-3);
    EXPECT_THROW(rational_sphere_lipschitz(RationalFunction(3.0), 20000), Error);
}

TEST(Lipschitz, DominatesFinerSampling) {
    const RationalFunction r = (z() * z() + one) / (z() - RationalFunction(2.0));
    const double est = rational_sphere_lipschitz(r, 40000);
    oracle::Rng rng(0);
    for (int i = 0; i < 2000; ++i) {
        const Complex w = rng.in_disk(1.0);
        const Complex num = w * w + 1.0, den = w - 2.0;
        const Complex d = (2.0 * w * den - num) / (den * den);
        const double stretch = std::abs(d) * (1 + std::norm(w)) / (1 + std::norm(num / den));
        EXPECT_LE(stretch, est * (1 + 1e-3));
    }
}

TEST(LogDerivativeRule, Examples) {
    EXPECT_EQ(log_derivative_brody_rule(parse("exp(z)"), 50.0, 20000).status, BrodyStatus::Brody);
    EXPECT_EQ(log_derivative_brody_rule(parse("(z^2+1)/(z-2)"), 50.0, 20000).status, BrodyStatus::Brody);
    EXPECT_EQ(log_derivative_brody_rule(parse("exp(z^2)"), 50.0, 20000).status, BrodyStatus::Unknown);
    // The rule never claims NotBrody.
    EXPECT_NE(log_derivative_brody_rule(parse("exp(z)+z"), 50.0, 20000).status, BrodyStatus::NotBrody);
}
