#include <gtest/gtest.h>

#include <random>

#include "boxsum/burgess.hpp"

using namespace boxsum;

TEST(Parameters, Examples) {
    auto a = choose_parameters(0.1);
    EXPECT_EQ(a.r, 30U);
    EXPECT_DOUBLE_EQ(a.delta, 0.05);
    auto b = choose_parameters(0.3);
    EXPECT_EQ(b.r, 10U);
    EXPECT_DOUBLE_EQ(b.delta, 0.15);
    EXPECT_THROW(choose_parameters(0.0), std::invalid_argument);
    EXPECT_THROW(choose_parameters(0.5), std::invalid_argument);
}

TEST(Parameters, BracketHoldsOnScan) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> d(1e-3, 0.5);
    for (int i = 0; i < 1000; ++i) {
        const double eps = d(rng);
        if (eps >= 0.5) continue;
        EXPECT_TRUE(choose_parameters(eps).bracket_ok) << eps;
    }
}

TEST(Census, MatchesExhaustiveEnumeration) {
    for (auto [len, r] : {std::pair<u64, u64>{3, 2}, {4, 2}, {2, 3}, {3, 3}, {1, 4}}) {
        const u64 m = 2 * r;
        u64 total = 1;
        for (u64 i = 0; i < m; ++i) total *= len;
        u64 bad = 0;
        std::vector<u64> t(m);
        for (u64 code = 0; code < total; ++code) {
            u64 c = code;
            std::vector<u64> count(len, 0);
            for (u64 i = 0; i < m; ++i) {
                ++count[c % len];
                c /= len;
            }
            bool is_bad = true;
            for (u64 k : count) is_bad = is_bad && k != 1;
            bad += is_bad;
        }
        EXPECT_EQ(bad_tuple_count(len, r), BigInt(bad)) << len << " " << r;
        EXPECT_LE(bad_tuple_count(len, r), bad_tuple_bound(len, r));
    }
    EXPECT_EQ(bad_tuple_count(3, 2), BigInt(21));  // 3 constant tuples + 3 * 6 two-pair tuples
}

TEST(Moments, SingleShift) {
    const auto f = FieldCtx::build(31, 2, std::nullopt, 1);
    const auto m = moment_sum(Character(f, 5), 1, 3);
    EXPECT_NEAR(m.value, static_cast<double>(f.q() - 1), 1e-9);
    EXPECT_TRUE(m.value_ok);
    EXPECT_TRUE(m.census_ok);
}

TEST(Moments, BruteForceSmall) {
    const auto f = FieldCtx::build(31, 2, std::nullopt, 1);
    const Character chi(f, 7);
    const auto m = moment_sum(chi, 3, 2);
    double brute = 0;
    for (u32 i = 0; i < f.q(); ++i) {
        cplx s{0, 0};
        for (i64 z = 1; z <= 3; ++z) s += chi(f.add(f.elem(i), f.constant(z)));
        brute += std::pow(std::abs(s), 4.0);
    }
    EXPECT_NEAR(m.value, brute, 1e-6 * brute);
    EXPECT_TRUE(m.value_ok);
    EXPECT_TRUE(m.census_ok);
}

TEST(Moments, CapsAndBudget) {
    const auto f = FieldCtx::build(31, 2, std::nullopt, 1);
    const Character chi(f, 7);
    EXPECT_THROW(moment_sum(chi, 3, 31), std::invalid_argument);
    EXPECT_THROW(moment_sum(chi, 10001, 2), std::invalid_argument);
    EXPECT_THROW(moment_sum(chi, 3, 2, 100), BudgetError);
}

TEST(Trace, SmallBoxFullChain) {
    const u64 p = 61;
    const auto f = FieldCtx::build(p, 2, std::nullopt, 1);
    const auto basis = BasisMatrix::from_seed(p, 2, 3);
    const Box b = Box::make(basis, {2, -3}, {4, 5});
    const auto t = burgess_trace(f, b, Character(f, 13), 0.3);
    EXPECT_TRUE(t.all_ok());
    EXPECT_EQ(t.params.r, 10U);
    EXPECT_EQ(t.interval_len, 1U);
    EXPECT_EQ(t.tau.sum_tau, b.size() * (t.scaled_size - 1));
    EXPECT_LE(t.T, t.L0 + 1e-9);
}

TEST(Trace, ZeroShiftHasNoSymmetricDifference) {
    // a scaled box that is only {0} makes every shift trivial
    const u64 p = 61;
    const auto f = FieldCtx::build(p, 2, std::nullopt, 1);
    const Box b = Box::make(BasisMatrix::from_seed(p, 2, 3), {0, 0}, {1, 1});
    const auto t = burgess_trace(f, b, Character(f, 13), 0.3);
    EXPECT_EQ(t.scaled_size, 1U);
    EXPECT_EQ(t.max_symdiff, 0U);
    EXPECT_TRUE(t.all_ok());
}

TEST(Trace, RandomBoxesSatisfyEveryInequality) {
    std::mt19937_64 rng(8);
    for (int it = 0; it < 10; ++it) {
        const u64 p = it % 2 ? 101 : 151;
        const unsigned n = 2;
        const auto f = FieldCtx::build(p, n, std::nullopt, 2);
        i64 hmax = 1;
        while (below_half_root(hmax + 1, p)) ++hmax;
        std::uniform_int_distribution<i64> e(1, hmax), off(-20, 20);
        const Box b = Box::make(BasisMatrix::from_seed(p, n, rng() | 1), {off(rng), off(rng)}, {e(rng), e(rng)});
        const double eps = it % 3 ? 0.3 : 0.2;
        const auto t = burgess_trace(f, b, Character(f, 1 + rng() % (f.q() - 2)), eps);
        EXPECT_TRUE(t.all_ok()) << format_box_literal(b);
    }
}

TEST(Trace, RegimeViolations) {
    const auto f = FieldCtx::build(61, 2, std::nullopt, 1);
    const auto basis = BasisMatrix::from_seed(61, 2, 3);
    EXPECT_THROW(burgess_trace(f, Box::make(basis, {0, 0}, {6, 20}), Character(f, 3), 0.3), RegimeError);
    EXPECT_THROW(burgess_trace(f, Box::make(basis, {0, 0}, {2, 2}), Character(f, 0), 0.3), RegimeError);
}
