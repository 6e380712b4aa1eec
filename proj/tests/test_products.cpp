#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

#include "brody/divisor.hpp"
#include "brody/products.hpp"
#include "oracles.hpp"

using namespace brody;

namespace {

const CanonicalProduct& squares() {
    static const CanonicalProduct p(Divisor::squares(10000));
    return p;
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Divisor, SortsAndValidates) {
    const Divisor d = Divisor::from_points({Complex{0, 5}, 2.0, Complex{-3, 0}});
    ASSERT_EQ(d.size(), 3u);
    EXPECT_EQ(d[0].a, Complex(2.0));
    EXPECT_EQ(d[2].a, Complex(0, 5));
    EXPECT_TRUE(d.reduced());
    EXPECT_THROW(Divisor::from_points({1.0, 0.0}), Error);
    EXPECT_THROW(Divisor({{1.0, 0}}), Error);
    try {
        Divisor::from_points({0.0});
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroInSupport);
    }
}

TEST(Divisor, CsvRoundTrip) {
    const Divisor d({{Complex{1.5, -2.25}, 1}, {Complex{1e10 / 3.0, 0.1}, 2}});
    std::istringstream in(divisor_to_csv(d));
    const Divisor back = divisor_from_csv(in);
    ASSERT_EQ(back.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(back[i], d[i]);
    EXPECT_FALSE(back.reduced());
    EXPECT_EQ(back.degree(), 3);
}

TEST(Divisor, CsvRejectsGarbage) {
    std::istringstream bad("re,im,mult\n1,2\n");
    EXPECT_THROW(divisor_from_csv(bad), Error);
    std::istringstream zero("re,im,mult\n0,0,1\n");
    EXPECT_THROW(divisor_from_csv(zero), Error);
}

TEST(EvalProduct, OriginIsExactlyOne) {
    const ProductEval e = squares().eval(0.0, 1e-6);
    EXPECT_EQ(e.value, Complex(1.0));
    EXPECT_EQ(e.terms_used, 0);
}

TEST(EvalProduct, ClosedFormExamples) {
    const ProductEval q = squares().eval(0.25, 1e-6);
    EXPECT_NEAR(q.value.real(), 2.0 / std::numbers::pi, 1e-6);
    const ProductEval m = squares().eval(-1.0, 1e-6);
    EXPECT_NEAR(m.value.real(), std::sinh(std::numbers::pi) / std::numbers::pi, 1e-5);
    EXPECT_NEAR(m.value.real(), 3.67608, 1e-5);
    EXPECT_GE(q.tail_bound, 0.0);
    EXPECT_LE(q.terms_used, 10000);
}

TEST(EvalProduct, VanishesOnSupport) {
    const ProductEval e = squares().eval(49.0, 1e-6);
    EXPECT_EQ(e.value, Complex{});
    EXPECT_EQ(e.terms_used, 6);
}

TEST(EvalProductProperty, MatchesClosedFormInDisk) {
    oracle::Rng rng(0);
    for (int i = 0; i < 100; ++i) {
        const Complex z = rng.in_disk(50.0);
        EXPECT_LE(rel(squares().eval(z, 1e-6).value, oracle::sinc_sqrt(z)), 1e-4) << z;
    }
}

TEST(EvalProductProperty, NegativeRealAxisUsesSinhForm) {
    for (const double x : {1.0, 4.0, 20.0, 45.0}) {
        const double want = std::sinh(std::numbers::pi * std::sqrt(x)) / (std::numbers::pi * std::sqrt(x));
        EXPECT_LE(std::abs(squares().eval(-x, 1e-6).value.real() - want), 1e-6 * want);
    }
}

TEST(EvalProductProperty, TailBoundIsHonest) {
    // Doubling the truncation moves the value by less than the reported bound.
    const CanonicalProduct small(Divisor::squares(2000)), big(Divisor::squares(4000));
    oracle::Rng rng(0);
    for (int i = 0; i < 50; ++i) {
        const Complex z = rng.in_disk(30.0);
        const ProductEval a = small.eval(z, 1e-6);
        const ProductEval b = big.eval(z, 1e-6);
        EXPECT_LE(std::abs(a.value - b.value), (a.tail_bound + b.tail_bound) * std::abs(b.value) + 1e-15);
    }
}

TEST(EvalProduct, TolUnreachableOnShortDivisor) {
    const CanonicalProduct p(Divisor::from_points({1.0, 2.0}));
    EXPECT_NO_THROW(p.eval(0.5, 1e-6));
    const CanonicalProduct raw(Divisor(std::vector<DivisorPoint>{{1.0, 1}},
                                       DivisorTail{Complex{1.0}, 1.0, Complex{}, 1.0, 1.0, 1.0, 2.0}));
    try {
        raw.eval(0.5, 1e-6);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::TolUnreachable);
    }
    EXPECT_THROW(p.eval(0.5, 0.5), Error);
}

TEST(Derivative, SquaresClosedForm) {
    for (const int k : {1, 3, 7, 20}) {
        const Complex d = squares().derivative_at_support(static_cast<std::size_t>(k - 1), 1e-9);
        const double want = oracle::sinc_sqrt_derivative_at_square(k);
        EXPECT_LE(std::abs(d.real() - want), 1e-6 * std::abs(want)) << k;
        EXPECT_NEAR(std::abs(d), 1.0 / (2.0 * k * k), 1e-6 / (2.0 * k * k));
    }
    EXPECT_NEAR(std::abs(product_derivative_at_support(Divisor::squares(10000), 0, 1e-9)), 0.5, 1e-6);
    EXPECT_NEAR(std::abs(product_derivative_at_support(Divisor::squares(10000), 2, 1e-9)), 0.055556, 1e-6);
}

TEST(Derivative, GeometricMatchesFiniteDifferences) {
    const CanonicalProduct p(Divisor::geometric(4.0, 30));
    const Complex a5 = p.divisor()[4].a;
    const double step = 1e-6 * std::abs(a5);
    const Complex fd = oracle::central_difference([&](Complex z) { return p.eval(z, 1e-12).value; }, a5, step);
    const Complex d = p.derivative_at_support(4, 1e-12);
    EXPECT_LE(rel(d, fd), 1e-5);
}

TEST(DerivativeProperty, RandomGeometricDivisors) {
    oracle::Rng rng(0);
    for (int i = 0; i < 30; ++i) {
        const double lam = rng.uniform(2.0, 12.0);
        const Complex u = std::polar(1.0, rng.uniform(0, 2 * std::numbers::pi));
        const CanonicalProduct p(Divisor::geometric(lam, 20, u));
        const std::size_t n = static_cast<std::size_t>(rng.uniform() * 5);
        const Complex a = p.divisor()[n].a;
        const Complex fd = oracle::central_difference([&](Complex z) { return p.eval(z, 1e-12).value; }, a,
                                                      1e-6 * std::abs(a));
        EXPECT_LE(rel(p.derivative_at_support(n, 1e-12), fd), 1e-5);
    }
}

TEST(Derivative, RejectsMultiplePoints) {
    const CanonicalProduct p(Divisor({{2.0, 2}, {5.0, 1}}));
    try {
        p.derivative_at_support(0, 1e-6);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MultiplicityNotOne);
    }
}

TEST(ThreeTimesShifted, MatchesDisplayedProduct) {
    const Divisor d = Divisor::from_points({2.0, Complex{0, 9}, Complex{-40, 3}});
    const CanonicalProduct p = CanonicalProduct::three_times_shifted(d);
    for (const Complex z : {Complex{1, 1}, Complex{-5, 2}, Complex{30, -30}}) {
        Complex want = 3.0;
        for (const auto& pt : d.points()) want *= z / pt.a - 1.0;
        EXPECT_LE(rel(p.eval(z, 1e-12).value, want), 1e-13);
    }
}

TEST(Fsharp, MatchesDefinition) {
    const CanonicalProduct& p = squares();
    for (const Complex z : {Complex{0.3, 0.1}, Complex{10.0, 5.0}, Complex{-3.0, 0.0}}) {
        const Complex f = oracle::sinc_sqrt(z);
        const Complex df = oracle::central_difference(oracle::sinc_sqrt, z, 1e-6);
        EXPECT_NEAR(p.fsharp(z, 1e-9), std::abs(df) / (1 + std::norm(f)), 1e-6);
    }
    EXPECT_NEAR(p.fsharp(4.0, 1e-9), 1.0 / 8.0, 1e-8);
}

TEST(TailConstant, AgreesWithPartialProducts) {
    for (const double lam : {2.0, 4.0, 10.0, 1.5}) {
        EXPECT_NEAR(claim1_constant(lam), oracle::partial_product(lam, 400), 1e-12);
    }
    EXPECT_NEAR(claim1_constant(2.0), 0.129898, 1e-6);
    EXPECT_NEAR(claim1_constant(4.0), 0.419422, 1e-6);
    EXPECT_NEAR(claim1_constant(10.0), 0.659824, 1e-6);
    EXPECT_GE(claim1_constant(4.0), 1.0 / 3.0);
    EXPECT_THROW(claim1_constant(1.0), Error);
}

TEST(TailConstant, IncreasesTowardOne) {
    double prev = 0.0;
    for (const double lam : {1.1, 2.0, 4.0, 10.0, 100.0, 1e6}) {
        const double c = claim1_constant(lam);
        EXPECT_GT(c, prev);
        EXPECT_LT(c, 1.0);
        prev = c;
    }
    EXPECT_GT(prev, 0.998);
}

TEST(Minorant, Values) {
    EXPECT_NEAR(claim2_minorant(4.0, 0), 1.0, 1e-15);
    EXPECT_NEAR(claim2_minorant(4.0, 2), 217.0, 1e-9);
    EXPECT_NEAR(claim2_minorant(4.0, 3), 27559.0, 1e-7);
    EXPECT_NEAR(claim2_minorant(4.0, 4), 27559.0 * 511.0, 1e-3);
    EXPECT_EQ(claim2_min_s(4.0, 1e6), 4);
    EXPECT_THROW(claim2_minorant(0.5, 2), Error);
}

TEST(TailCheck, Examples) {
    const auto r4 = claim1_check(Divisor::geometric(4.0, 30), 4.0, 1000, 0);
    EXPECT_TRUE(r4.passed);
    EXPECT_EQ(r4.trials, 1000);
    const auto r10 = claim1_check(Divisor::geometric(10.0, 30), 10.0, 1000, 0);
    EXPECT_TRUE(r10.passed);
    EXPECT_GE(r10.observed_min, claim1_constant(10.0));
    try {
        claim1_check(Divisor::squares(100), 1.5, 1000, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SeparationViolated);
    }
}

TEST(TailCheckProperty, NeverFailsOnSeparatedDivisors) {
    oracle::Rng rng(0);
    for (const double lam : {2.0, 4.0, 10.0}) {
        for (int i = 0; i < 5; ++i) {
            const Complex u = std::polar(1.0, rng.uniform(0, 2 * std::numbers::pi));
            const auto res = claim1_check(Divisor::geometric(lam * 1.0001, 25, u), lam, 1000, static_cast<std::uint64_t>(i));
            EXPECT_TRUE(res.passed) << lam;
            EXPECT_GE(res.observed_min, res.constant);
        }
    }
}
