#include <gtest/gtest.h>

#include <random>

#include "boxsum/energy.hpp"

using namespace boxsum;

namespace {

u64 energy_quadruples(const FieldCtx& f, const std::vector<u32>& s) {
    u64 c = 0;
    for (u32 x : s)
        for (u32 y : s)
            for (u32 w : s)
                for (u32 t : s) c += f.mul_idx(x, y) == f.mul_idx(w, t) ? 1 : 0;
    return c;
}

std::vector<u32> random_set(const FieldCtx& f, std::mt19937_64& rng, std::size_t size, bool with_zero) {
    std::vector<u32> s;
    std::vector<char> used(f.q(), 0);
    if (with_zero) {
        s.push_back(0);
        used[0] = 1;
    }
    std::uniform_int_distribution<u32> d(0, static_cast<u32>(f.q() - 1));
    while (s.size() < size) {
        const u32 x = d(rng);
        if (used[x]) continue;
        used[x] = 1;
        s.push_back(x);
    }
    return s;
}

}  // namespace

TEST(Energy, SmallExamples) {
    const auto f = FieldCtx::build(31, 2, std::nullopt, 1);
    const u32 a = 77;
    EXPECT_EQ(energy(f, std::vector<u32>{a}).E, 1U);
    const auto e = energy(f, std::vector<u32>{0, a});
    EXPECT_EQ(e.E, 10U);
    u64 total = 0;
    for (const auto& [m, r] : e.histogram) total += r;
    EXPECT_EQ(total, 4U);
}

TEST(Energy, MultiplicativeGroup) {
    const auto f = FieldCtx::build(7, 2, std::nullopt, 1);
    std::vector<u32> all;
    for (u32 i = 1; i < f.q(); ++i) all.push_back(i);
    const u64 m = f.q() - 1;
    EXPECT_EQ(energy(f, all).E, m * m * m);
}

TEST(Energy, MatchesQuadrupleDefinitionAndBounds) {
    const auto f = FieldCtx::build(13, 2, std::nullopt, 1);
    std::mt19937_64 rng(3);
    for (int it = 0; it < 20; ++it) {
        const auto s = random_set(f, rng, 3 + it % 9, it % 2);
        const u64 E = energy(f, s).E;
        EXPECT_EQ(E, energy_quadruples(f, s));
        const u64 n = s.size();
        EXPECT_GE(E, n * n);
        // with 0 present the products x1 y1 = 0 = x2 y2 add (2n - 1)^2 quadruples
        const bool has_zero = std::find(s.begin(), s.end(), 0U) != s.end();
        if (has_zero)
            EXPECT_LE(E, (n - 1) * (n - 1) * (n - 1) + (2 * n - 1) * (2 * n - 1));
        else
            EXPECT_LE(E, n * n * n);
        // dilation invariance
        const u32 c = 1 + static_cast<u32>(rng() % (f.q() - 1));
        std::vector<u32> cs;
        for (u32 x : s) cs.push_back(f.mul_idx(x, c));
        EXPECT_EQ(energy(f, cs).E, E);
    }
}

TEST(Energy, BudgetIsEnforced) {
    const auto f = FieldCtx::build(13, 2, std::nullopt, 1);
    std::vector<u32> s{1, 2, 3};
    EXPECT_THROW(energy(f, s, 8), BudgetError);
}

TEST(Ratio, CountsAndSets) {
    const auto f = FieldCtx::build(31, 2, std::nullopt, 1);
    std::mt19937_64 rng(4);
    const auto s = random_set(f, rng, 12, true);
    EXPECT_EQ(f_count(f, s, f.index(f.one())), s.size());
    for (int it = 0; it < 30; ++it) {
        const u32 z = static_cast<u32>(rng() % f.q());
        u64 brute = 0;
        for (u32 x : s)
            for (u32 y : s) brute += f.mul_idx(x, z) == y ? 1 : 0;
        EXPECT_EQ(f_count(f, s, z), brute);
    }
    EXPECT_EQ(ratio_set(f, std::vector<u32>{0, 9}), std::vector<u32>{f.index(f.one())});
    const u32 a = 40, b = 500;
    std::vector<u32> expect{f.index(f.one()), f.div_idx(a, b), f.div_idx(b, a)};
    std::sort(expect.begin(), expect.end());
    EXPECT_EQ(ratio_set(f, std::vector<u32>{a, b}), expect);

    const auto z = ratio_set(f, s);
    std::vector<char> in(f.q(), 0);
    for (u32 x : s)
        for (u32 y : s)
            if (x && y) in[f.div_idx(y, x)] = 1;
    for (u32 v = 0; v < f.q(); ++v) EXPECT_EQ(std::binary_search(z.begin(), z.end(), v), in[v] != 0);
}

TEST(Ratio, EmptyRatioForDisjointDilation) {
    const auto f = FieldCtx::build(31, 2, std::nullopt, 1);
    // S = {1}: z * 1 = 1 only for z = 1
    EXPECT_EQ(f_count(f, std::vector<u32>{1}, 2), 0U);
}

TEST(CoordinateCounts, MatchBruteForce) {
    const u64 p = 31;
    for (i64 h : {1, 2, 3}) {
        const auto f = coordinate_counts(h, p);
        for (u64 z = 0; z < p; ++z) {
            u64 c = 0;
            for (i64 x = -h; x <= h; ++x)
                for (i64 y = -h; y <= h; ++y) c += mod_floor(x * static_cast<i64>(z) - y, p) == 0 ? 1 : 0;
            EXPECT_EQ(f[z], c);
        }
    }
}

TEST(SDecomposition, UnitBoxBruteForce) {
    const auto f = FieldCtx::build(31, 2, std::nullopt, 1);
    const Box b = Box::make(BasisMatrix::from_seed(31, 2, 5), {2, 6}, {1, 1});
    const auto r = s_decomposition(f, b);
    EXPECT_TRUE(r.hypothesis_ok);
    EXPECT_TRUE(r.all_ok());
    EXPECT_EQ(r.box_size, 1U);
    EXPECT_EQ(r.diff_size, 9U);
    EXPECT_EQ(r.E, 1U);
    // f_0 from its definition
    const auto b0 = box_indices(f, difference_box(b));
    for (u32 z = 1; z < f.q(); ++z) {
        u64 c = 0;
        for (u32 x : b0)
            for (u32 y : b0) c += f.mul_idx(x, z) == y ? 1 : 0;
        EXPECT_EQ(r.f0[z], c);
    }
}

TEST(SDecomposition, RandomBoxesSatisfyChain) {
    std::mt19937_64 rng(9);
    for (int it = 0; it < 12; ++it) {
        const u64 p = it % 2 ? 31 : 61;
        const unsigned n = it % 3 == 0 ? 3 : 2;
        const auto f = FieldCtx::build(p, n, std::nullopt, 2);
        i64 hmax = 1;
        while (below_half_root(hmax + 1, p)) ++hmax;
        std::uniform_int_distribution<i64> e(1, hmax), off(-10, 10);
        std::vector<i64> N(n), H(n);
        for (unsigned i = 0; i < n; ++i) {
            N[i] = off(rng);
            H[i] = n == 3 ? std::min<i64>(e(rng), 3) : e(rng);
        }
        const Box b = Box::make(BasisMatrix::from_seed(p, n, rng() | 1), N, H);
        const auto r = s_decomposition(f, b);
        EXPECT_TRUE(r.all_ok()) << format_box_literal(b);
        EXPECT_GE(r.E, r.box_size * r.box_size);
        // f_0 = 1 outside Z
        for (u32 z = 1; z < f.q(); ++z) {
            if (!std::binary_search(r.Z.begin(), r.Z.end(), z)) {
                EXPECT_EQ(r.f0[z], 1U);
            }
        }
    }
}

TEST(Tau, ProfileChecks) {
    const auto f = FieldCtx::build(31, 2, std::nullopt, 1);
    const auto basis = BasisMatrix::from_seed(31, 2, 4);
    const Box b = Box::make(basis, {3, -2}, {3, 4});
    const Box unit = Box::make(basis, {-1, -1}, {1, 1});  // only 0
    const auto t0 = tau_profile(f, b, unit);
    EXPECT_EQ(t0.sum_tau, 0U);
    EXPECT_TRUE(t0.tau.empty());

    const Box s = Box::make(basis, {-1, -1}, {2, 3});
    const auto t = tau_profile(f, b, s);
    EXPECT_TRUE(t.all_ok());
    EXPECT_EQ(t.sum_tau, b.size() * (s.size() - 1));

    // sum_u tau(u)^2 = #{x1 y2 = x2 y1} with y's nonzero
    const auto B = box_indices(f, b), S = box_indices(f, s);
    u64 quad = 0;
    for (u32 x1 : B)
        for (u32 x2 : B)
            for (u32 y1 : S)
                for (u32 y2 : S)
                    if (y1 && y2) quad += f.mul_idx(x1, y2) == f.mul_idx(x2, y1) ? 1 : 0;
    EXPECT_EQ(t.sum_tau2(), quad);
}
