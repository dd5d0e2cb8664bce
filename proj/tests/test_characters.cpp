#include <gtest/gtest.h>

#include <random>

#include "boxsum/character.hpp"

using namespace boxsum;

TEST(Character, BasicValues) {
    const auto f = FieldCtx::build(31, 2, std::nullopt, 1);
    const Character chi(f, 7);
    EXPECT_NEAR(std::abs(chi(f.one()) - cplx(1, 0)), 0.0, 1e-12);
    EXPECT_EQ(chi(f.zero()), cplx(0, 0));
    const double angle = 2.0 * std::numbers::pi * 7.0 / static_cast<double>(f.q() - 1);
    EXPECT_NEAR(std::abs(chi(f.generator()) - std::polar(1.0, angle)), 0.0, 1e-12);
}

TEST(Character, Multiplicative) {
    const auto f = FieldCtx::build(13, 3, std::nullopt, 4);
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<u32> d(1, static_cast<u32>(f.q() - 1));
    for (u64 k : {1ULL, 6ULL, 183ULL, 2196ULL}) {
        const Character chi(f, k);
        for (int i = 0; i < 100; ++i) {
            const FqElem a = f.elem(d(rng)), b = f.elem(d(rng));
            EXPECT_NEAR(std::abs(chi(f.mul(a, b)) - chi(a) * chi(b)), 0.0, 1e-9);
        }
    }
}

TEST(Character, TrivialOnPrimeField) {
    const auto f = FieldCtx::build(3, 2, std::nullopt, 1);
    EXPECT_TRUE(Character(f, 0).trivial_on_prime_field());
    EXPECT_TRUE(Character(f, 2).trivial_on_prime_field());
    EXPECT_FALSE(Character(f, 1).trivial_on_prime_field());
    // oracle: evaluate on both elements of F_3^*
    for (u64 k = 0; k < 8; ++k) {
        const Character chi(f, k);
        const bool oracle = std::abs(chi(f.constant(1)) - cplx(1, 0)) < 1e-12 &&
                            std::abs(chi(f.constant(2)) - cplx(1, 0)) < 1e-12;
        EXPECT_EQ(chi.trivial_on_prime_field(), oracle) << k;
    }
}

TEST(Character, OrderDividesGroupOrder) {
    const auto f = FieldCtx::build(5, 2, std::vector<u64>{2, 0, 1});
    EXPECT_EQ(Character(f, 12).order(), 2U);
    EXPECT_EQ(Character(f, 0).order(), 1U);
    EXPECT_EQ(Character(f, 5).order(), 24U);
}

TEST(BoxSum, TrivialCharacterCountsNonzeroPoints) {
    const auto f = FieldCtx::build(31, 2, std::nullopt, 1);
    const auto basis = BasisMatrix::from_seed(31, 2, 3);
    const Character chi(f, 0);
    const Box away = Box::make(basis, {0, 0}, {4, 5});   // x_i >= 1, no zero
    EXPECT_NEAR(std::abs(box_char_sum(chi, away) - cplx(20, 0)), 0.0, 1e-12);
    const Box with0 = Box::make(basis, {-1, -1}, {4, 5});  // contains 0
    EXPECT_NEAR(std::abs(box_char_sum(chi, with0) - cplx(19, 0)), 0.0, 1e-12);
}

TEST(BoxSum, FullFieldVanishes) {
    for (unsigned n : {2U, 3U}) {
        const auto f = FieldCtx::build(31, n, std::nullopt, 1);
        const auto basis = BasisMatrix::from_seed(31, n, 5);
        const Box full = Box::make(basis, std::vector<i64>(n, 0), std::vector<i64>(n, 31));
        for (u64 k : {1ULL, 30ULL, 480ULL})
            EXPECT_LT(std::abs(box_char_sum(Character(f, k), full)), 1e-9);
    }
}

TEST(BoxSum, MatchesGeneratorPowerEvaluation) {
    const auto f = FieldCtx::build(31, 2, std::nullopt, 1);
    const auto basis = BasisMatrix::from_seed(31, 2, 8);
    const Box b = Box::make(basis, {3, -7}, {6, 9});
    const Character chi(f, 11);
    const cplx cg = chi(f.generator());
    cplx oracle{0, 0};
    for_each_point(b, [&](std::span<const i64>, const FqElem& e) {
        if (f.is_zero(e)) return;
        cplx v{1, 0};
        for (u32 i = 0; i < f.dlog(e); ++i) v *= cg;
        oracle += v;
    });
    EXPECT_NEAR(std::abs(box_char_sum(chi, b) - oracle), 0.0, 1e-9);
}

TEST(CompleteSum, SingleRootVanishes) {
    const auto f = FieldCtx::build(7, 2, std::nullopt, 1);
    const auto r = complete_poly_char_sum(Character(f, 3), {{f.t(), 1}});
    EXPECT_LT(std::abs(r.value), 1e-9);
}

TEST(CompleteSum, QuotientPatternIsMinusOne) {
    const auto f = FieldCtx::build(5, 2, std::vector<u64>{2, 0, 1});
    const u64 q = f.q();
    for (u64 k : {1ULL, 12ULL, 7ULL}) {
        const Character chi(f, k);
        const auto r = complete_poly_char_sum(chi, {{f.zero(), 1}, {f.constant(1), q - 2}});
        EXPECT_LT(std::abs(r.value - cplx(-1, 0)), 1e-9);
        EXPECT_FALSE(r.degenerate);
    }
}

TEST(CompleteSum, QuadraticBruteForce) {
    const auto f = FieldCtx::build(5, 2, std::vector<u64>{2, 0, 1});
    const Character chi(f, 12);
    const auto r = complete_poly_char_sum(chi, {{f.zero(), 1}, {f.constant(1), 1}});
    cplx brute{0, 0};
    for (u32 i = 0; i < f.q(); ++i) {
        const FqElem u = f.elem(i);
        brute += chi(f.mul(u, f.add(u, f.constant(1))));
    }
    EXPECT_LT(std::abs(r.value - brute), 1e-9);
    EXPECT_LE(std::abs(r.value), 5.0 + 1e-9);
    EXPECT_DOUBLE_EQ(r.weil_bound, 5.0);
}

TEST(CompleteSum, RejectsRepeatedRootsAndZeroExponent) {
    const auto f = FieldCtx::build(7, 2, std::nullopt, 1);
    const Character chi(f, 1);
    EXPECT_THROW(complete_poly_char_sum(chi, {{f.t(), 1}, {f.t(), 2}}), FieldError);
    EXPECT_THROW(complete_poly_char_sum(chi, {{f.t(), 0}}), FieldError);
}

TEST(CompleteSum, DegenerateWhenArgumentIsPower) {
    const auto f = FieldCtx::build(7, 2, std::nullopt, 1);
    const Character chi(f, 24);  // order 2
    const auto r = complete_poly_char_sum(chi, {{f.zero(), 2}, {f.one(), 4}});
    EXPECT_TRUE(r.degenerate);
}

TEST(IntervalSum, EmptyAndBruteForce) {
    const auto f = FieldCtx::build(7, 2, std::nullopt, 1);
    const Character chi(f, 5);
    EXPECT_EQ(generator_interval_sum(chi, f.t(), 3, 2).value, cplx(0, 0));
    cplx brute{0, 0};
    for (i64 t = 1; t <= 7; ++t) brute += chi(f.add(f.t(), f.constant(t)));
    EXPECT_LT(std::abs(generator_interval_sum(chi, f.t(), 1, 7).value - brute), 1e-12);
    EXPECT_THROW(generator_interval_sum(chi, f.constant(2), 1, 7), FieldError);
}

TEST(IntervalSum, MaxSubintervalDominatesEveryInterval) {
    const auto f = FieldCtx::build(31, 2, std::nullopt, 1);
    const Character chi(f, 17);
    const FqElem a = f.add(f.t(), f.constant(4));
    const double best = max_subinterval_sum(chi, a);
    double brute = 0;
    for (i64 lo = 1; lo <= 31; ++lo)
        for (i64 hi = lo; hi <= 31; ++hi) brute = std::max(brute, std::abs(generator_interval_sum(chi, a, lo, hi).value));
    EXPECT_NEAR(best, brute, 1e-9);
}

TEST(TallBox, IdentityHolds) {
    const auto f = FieldCtx::build(31, 3, std::nullopt, 1);
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<i64> off(-5, 30), len(1, 31);
    for (int it = 0; it < 10; ++it) {
        const auto basis = BasisMatrix::from_seed(31, 3, rng() | 1);
        const Box b = Box::make(basis, {off(rng), off(rng), off(rng)}, {len(rng) % 6 + 1, len(rng) % 6 + 1, len(rng)});
        const auto t = tall_box_identity(Character(f, 1 + rng() % 29000), b);
        EXPECT_LT(std::abs(t.lhs - t.rhs), 1e-6);
    }
}

TEST(TallBox, ZeroRowIsPrimeLineSum) {
    const auto f = FieldCtx::build(31, 3, std::nullopt, 1);
    const auto basis = BasisMatrix::from_seed(31, 3, 6);
    const Box b = Box::make(basis, {-2, -1, 3}, {3, 2, 20});
    const Character chi(f, 77);
    const auto t = tall_box_identity(chi, b);
    int zero_rows = 0;
    for (const auto& r : t.rows) {
        if (r.outer != std::vector<i64>{0, 0}) {
            EXPECT_FALSE(r.degenerate);
            continue;
        }
        ++zero_rows;
        EXPECT_TRUE(r.degenerate);
        const cplx line = prime_line_sum(chi, basis, b.lo(2), b.hi(2));
        EXPECT_LT(std::abs(chi(basis.column(2)) * r.inner - line), 1e-9);
    }
    EXPECT_EQ(zero_rows, 1);
}
