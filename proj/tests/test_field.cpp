#include <gtest/gtest.h>

#include <random>

#include "boxsum/basis.hpp"
#include "boxsum/field.hpp"

using namespace boxsum;

TEST(Field, DegreeOneUsesModulusT) {
    const auto f = FieldCtx::build(5, 1);
    EXPECT_EQ(f.q(), 5U);
    EXPECT_EQ(f.modulus(), (std::vector<u64>{0, 1}));
}

TEST(Field, AcceptsIrreducibleModulus) {
    // t^2 + 2 has no root mod 5: squares mod 5 are 0, 1, 4 and -2 = 3.
    EXPECT_NO_THROW(FieldCtx::build(5, 2, std::vector<u64>{2, 0, 1}));
    EXPECT_NO_THROW(FieldCtx::build(5, 2, std::vector<u64>{2, 0}));  // implicit leading 1
}

TEST(Field, RejectsBadInputs) {
    EXPECT_THROW(FieldCtx::build(5, 2, std::vector<u64>{1, 0, 1}), FieldError);  // 2^2 + 1 = 0 mod 5
    EXPECT_THROW(FieldCtx::build(9, 2), FieldError);
    EXPECT_THROW(FieldCtx::build(2, 2), FieldError);
    EXPECT_THROW(FieldCtx::build(5, 4), FieldError);
    EXPECT_THROW(FieldCtx::build(4099, 3, std::nullopt, 1, u64{1} << 24), FieldError);
    EXPECT_THROW(FieldCtx::build(5, 2, std::vector<u64>{2, 0, 3}), FieldError);  // not monic
}

TEST(Field, SquareOfTInF25) {
    const auto f = FieldCtx::build(5, 2, std::vector<u64>{2, 0, 1});
    const FqElem t = f.t();
    EXPECT_EQ(f.mul(t, t), f.constant(3));
    EXPECT_EQ(f.arith(t, t, ArithOp::mul), f.constant(3));
}

TEST(Field, F5GeneratorIsTwo) {
    const auto f = FieldCtx::build(5, 1);
    EXPECT_EQ(f.generator(), f.constant(2));
    EXPECT_EQ(f.dlog(f.one()), 0U);
}

TEST(Field, ArithmeticLaws) {
    std::mt19937_64 rng(11);
    for (auto [p, n] : {std::pair<u64, unsigned>{31, 2}, {7, 3}, {101, 2}}) {
        const auto f = FieldCtx::build(p, n, std::nullopt, 3);
        std::uniform_int_distribution<u32> d(1, static_cast<u32>(f.q() - 1));
        for (int i = 0; i < 200; ++i) {
            const FqElem a = f.elem(d(rng)), b = f.elem(d(rng)), c = f.elem(d(rng));
            EXPECT_EQ(f.mul(a, f.one()), a);
            EXPECT_EQ(f.mul(b, f.inv(b)), f.one());
            EXPECT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            EXPECT_EQ(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
            EXPECT_EQ(f.sub(f.add(a, b), b), a);
            EXPECT_EQ(f.mul(f.div(a, b), b), a);
            // table multiplication agrees with schoolbook reduction
            EXPECT_EQ(f.mul_idx(f.index(a), f.index(b)), f.index(f.mul(a, b)));
        }
        EXPECT_THROW(f.inv(f.zero()), FieldError);
        EXPECT_THROW(f.arith(f.one(), f.zero(), ArithOp::div), FieldError);
    }
}

TEST(Field, GeneratorHasFullOrderAndDlogRoundTrips) {
    const auto f = FieldCtx::build(13, 2, std::nullopt, 5);
    const FqElem g = f.generator();
    FqElem acc = f.one();
    std::vector<char> seen(f.q(), 0);
    for (u64 k = 0; k < f.q() - 1; ++k) {
        EXPECT_EQ(f.dlog(acc), k);
        EXPECT_EQ(f.exp(k), acc);
        EXPECT_FALSE(seen[f.index(acc)]);
        seen[f.index(acc)] = 1;
        acc = f.mul(acc, g);
    }
    EXPECT_EQ(acc, f.one());
    EXPECT_EQ(f.dlog(f.zero()), FieldCtx::kNoLog);
}

TEST(Field, SeededModulusIsDeterministicAndIrreducible) {
    const auto a = FieldCtx::build(31, 3, std::nullopt, 42);
    const auto b = FieldCtx::build(31, 3, std::nullopt, 42);
    EXPECT_EQ(a.modulus(), b.modulus());
    EXPECT_TRUE(poly::is_irreducible(a.modulus(), 31));
}

TEST(Field, IrreducibilityMatchesRootScanForQuadratics) {
    const u64 p = 11;
    for (u64 c0 = 0; c0 < p; ++c0)
        for (u64 c1 = 0; c1 < p; ++c1) {
            bool root = false;
            for (u64 x = 0; x < p; ++x) root = root || (x * x + c1 * x + c0) % p == 0;
            EXPECT_EQ(poly::is_irreducible({c0, c1, 1}, p), !root);
        }
}

TEST(Field, IsGenerating) {
    const auto f = FieldCtx::build(7, 3, std::nullopt, 2);
    EXPECT_FALSE(f.is_generating(f.constant(3)));
    EXPECT_TRUE(f.is_generating(f.t()));
    // oracle: a generates iff a^p != a (the only proper subfield is F_p)
    for (u32 i = 0; i < f.q(); ++i) {
        const FqElem a = f.elem(i);
        EXPECT_EQ(f.is_generating(a), !(f.pow(a, 7) == a));
    }
}

TEST(Basis, RoundTrip) {
    const u64 p = 31;
    const auto f = FieldCtx::build(p, 3, std::nullopt, 1);
    const auto basis = BasisMatrix::from_seed(p, 3, 9);
    std::vector<i64> e0{1, 0, 0}, zero{0, 0, 0};
    EXPECT_EQ(basis.to_elem(e0), basis.column(0));
    EXPECT_EQ(basis.to_elem(zero), f.zero());
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<i64> d(-100, 100);
    for (int i = 0; i < 100; ++i) {
        std::vector<i64> x{d(rng), d(rng), d(rng)};
        const auto back = basis.coords(basis.to_elem(x));
        for (unsigned k = 0; k < 3; ++k) EXPECT_EQ(static_cast<i64>(back[k]), mod_floor(x[k], p));
    }
}

TEST(Basis, RejectsSingular) {
    EXPECT_THROW(BasisMatrix::from_columns(5, 2, {{1, 2}, {2, 4}}), FieldError);
}
