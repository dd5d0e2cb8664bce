#pragma once

// Exact multiplicative-energy bookkeeping: E(B) from the product histogram,
// solution counts f(z) = #{(x, y) : xz = y}, ratio sets, the S = S1 + S2
// split over the difference box, the per-coordinate factorisation on F_p^*,
// and the tau profile of the shift argument.

#include <algorithm>
#include <span>
#include <vector>

#include "boxsum/box.hpp"
#include "boxsum/field.hpp"

namespace boxsum {

class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr u64 kDefaultPairBudget = u64{1} << 32;

struct EnergyProfile {
    u64 E = 0;
    /// (m, r(m)) for every product m with r(m) > 0, sorted by packed index.
    std::vector<std::pair<u32, u64>> histogram;
};

/// E(S) = #{(x, y, w, t) in S^4 : xy = wt} = sum_m r(m)^2.
inline EnergyProfile energy(const FieldCtx& ctx, std::span<const u32> set, u64 pair_budget = kDefaultPairBudget) {
    if (static_cast<u128>(set.size()) * set.size() > pair_budget)
        throw BudgetError("energy: |S|^2 exceeds pair budget");
    std::vector<u64> r(ctx.q(), 0);
    for (u32 x : set)
        for (u32 y : set) ++r[ctx.mul_idx(x, y)];
    EnergyProfile out;
    for (u32 m = 0; m < ctx.q(); ++m) {
        if (r[m] == 0) continue;
        out.E += r[m] * r[m];
        out.histogram.emplace_back(m, r[m]);
    }
    return out;
}

inline std::vector<char> membership(const FieldCtx& ctx, std::span<const u32> set) {
    std::vector<char> in(ctx.q(), 0);
    for (u32 x : set) in.at(x) = 1;
    return in;
}

/// #{(x, y) in S^2 : xz = y}.
inline u64 f_count(const FieldCtx& ctx, std::span<const u32> set, u32 z) {
    const auto in = membership(ctx, set);
    u64 c = 0;
    for (u32 x : set) c += in[ctx.mul_idx(x, z)] ? 1 : 0;
    return c;
}

/// h[z] = #{(x, y) in (S \ {0})^2 : y / x = z}, dense over packed indices.
inline std::vector<u64> ratio_histogram(const FieldCtx& ctx, std::span<const u32> set) {
    std::vector<u64> h(ctx.q(), 0);
    for (u32 x : set) {
        if (x == 0) continue;
        for (u32 y : set)
            if (y != 0) ++h[ctx.div_idx(y, x)];
    }
    return h;
}

/// Z' = (S \ {0}) / (S \ {0}), sorted.
inline std::vector<u32> ratio_set(const FieldCtx& ctx, std::span<const u32> set) {
    const auto h = ratio_histogram(ctx, set);
    std::vector<u32> out;
    for (u32 z = 1; z < ctx.q(); ++z)
        if (h[z]) out.push_back(z);
    return out;
}

/// f_i(z) = #{(x, y) in [-H, H]^2 : xz = y mod p} for z = 0..p-1, by integer
/// arithmetic only.
inline std::vector<u64> coordinate_counts(i64 h, u64 p) {
    const i64 pp = static_cast<i64>(p);
    std::vector<u64> f(p, 0);
    for (i64 z = 0; z < pp; ++z) {
        for (i64 x = -h; x <= h; ++x) {
            const i64 y0 = mod_floor(x * z, pp);
            // y in [-h, h] with y = y0 mod p
            for (i64 y = y0 - ((y0 + h) / pp) * pp; y <= h; y += pp)
                if (y >= -h) ++f[static_cast<std::size_t>(z)];
        }
    }
    return f;
}

/// sum_{z in F_p^*} f_i(z)^2 for one edge.
inline u64 coordinate_square_sum(i64 h, u64 p) {
    const auto f = coordinate_counts(h, p);
    u64 s = 0;
    for (u64 z = 1; z < p; ++z) s += f[z] * f[z];
    return s;
}

struct RatioProfile {
    u64 box_size = 0;
    u64 diff_size = 0;
    u64 E = 0;
    std::vector<u32> Z_prime;  // ratios of B \ {0}
    std::vector<u32> Z;        // ratios of B_0 \ {0}
    std::vector<u64> f0;       // dense f_0(z) over packed indices (f0[0] unused)
    u64 sum_f2_over_Z_prime = 0;
    u64 S = 0, S1 = 0, S2 = 0;
    u64 Z_prime_minus_Z = 0;

    bool hypothesis_ok = false;  // every H_i < sqrt(p/2)
    bool chain_pairs = false;    // E <= 2|B|^2 + sum_{Z'} f^2
    bool chain_total = false;    // E <= 3|B|^2 + S
    bool f_below_f0 = false;     // f(z) <= f_0(z) on Z'
    bool f_sum_below = false;    // sum_{Z'} f^2 <= S + |Z' \ Z|
    bool S_below_split = false;  // S <= S1 + S2
    bool f0_factorises = false;  // f_0(z) = prod_i f_i(z) on F_p^*

    bool all_ok() const {
        return chain_pairs && chain_total && f_below_f0 && f_sum_below && S_below_split && f0_factorises;
    }
};

inline RatioProfile s_decomposition(const FieldCtx& ctx, const Box& b) {
    RatioProfile out;
    out.hypothesis_ok = std::all_of(b.H.begin(), b.H.end(), [&](i64 h) { return below_half_root(h, b.p()); });

    const auto B = box_indices(ctx, b);
    const auto B0 = box_indices(ctx, difference_box(b));
    out.box_size = B.size();
    out.diff_size = B0.size();
    out.E = energy(ctx, B).E;

    const bool zero_in_B = std::find(B.begin(), B.end(), 0U) != B.end();
    const auto hB = ratio_histogram(ctx, B);
    const auto hB0 = ratio_histogram(ctx, B0);

    // For z != 0 the only pair with a zero entry is (0, 0).
    out.f0.assign(ctx.q(), 0);
    for (u32 z = 1; z < ctx.q(); ++z) out.f0[z] = 1 + hB0[z];

    out.f_below_f0 = true;
    for (u32 z = 1; z < ctx.q(); ++z) {
        if (hB0[z]) {
            out.Z.push_back(z);
            out.S += out.f0[z] * out.f0[z];
            if (!ctx.in_prime_field(ctx.elem(z))) out.S1 += out.f0[z] * out.f0[z];
        }
        if (hB[z]) {
            out.Z_prime.push_back(z);
            const u64 f = hB[z] + (zero_in_B ? 1 : 0);
            out.sum_f2_over_Z_prime += f * f;
            if (f > out.f0[z]) out.f_below_f0 = false;
            if (!hB0[z]) ++out.Z_prime_minus_Z;
        }
    }
    // F_p^* sits at packed indices 1..p-1.
    for (u32 z = 1; z < b.p(); ++z) out.S2 += out.f0[z] * out.f0[z];

    std::vector<std::vector<u64>> fi;
    for (i64 h : b.H) fi.push_back(coordinate_counts(h, b.p()));
    out.f0_factorises = true;
    for (u32 z = 1; z < b.p(); ++z) {
        u64 prod = 1;
        for (const auto& f : fi) prod *= f[z];
        if (prod != out.f0[z]) out.f0_factorises = false;
    }

    const u64 B2 = out.box_size * out.box_size;
    out.chain_pairs = out.E <= 2 * B2 + out.sum_f2_over_Z_prime;
    out.chain_total = out.E <= 3 * B2 + out.S;
    out.f_sum_below = out.sum_f2_over_Z_prime <= out.S + out.Z_prime_minus_Z;
    out.S_below_split = out.S <= out.S1 + out.S2;
    return out;
}

struct TauProfile {
    /// (u, tau(u)) with tau(u) = #{(x, y) in B x (B_0 \ {0}) : x / y = u}.
    std::vector<std::pair<u32, u64>> tau;
    u64 box_size = 0;
    u64 scaled_size = 0;
    u64 sum_tau = 0;
    u64 tau0 = 0;
    u64 sum_tau2_nonzero = 0;  // sum over u != 0
    u64 E_box = 0;
    u64 E_scaled = 0;

    bool sum_identity = false;    // sum tau = |B| (|B_0| - 1)
    bool tau0_bound = false;      // tau(0) <= |B_0|
    bool cauchy_schwarz = false;  // (sum_{u != 0} tau^2)^2 <= E(B) E(B_0)

    bool all_ok() const { return sum_identity && tau0_bound && cauchy_schwarz; }
    u64 sum_tau2() const { return sum_tau2_nonzero + tau0 * tau0; }
};

inline TauProfile tau_profile(const FieldCtx& ctx, const Box& b, const Box& scaled) {
    TauProfile out;
    const auto B = box_indices(ctx, b);
    const auto B0 = box_indices(ctx, scaled);
    out.box_size = B.size();
    out.scaled_size = B0.size();

    std::vector<u64> t(ctx.q(), 0);
    for (u32 x : B)
        for (u32 y : B0)
            if (y != 0) ++t[ctx.div_idx(x, y)];
    for (u32 u = 0; u < ctx.q(); ++u) {
        if (!t[u]) continue;
        out.tau.emplace_back(u, t[u]);
        out.sum_tau += t[u];
        if (u == 0)
            out.tau0 = t[u];
        else
            out.sum_tau2_nonzero += t[u] * t[u];
    }
    out.E_box = energy(ctx, B).E;
    out.E_scaled = energy(ctx, B0).E;

    out.sum_identity = out.sum_tau == out.box_size * (out.scaled_size - 1);
    out.tau0_bound = out.tau0 <= out.scaled_size;
    out.cauchy_schwarz = static_cast<u128>(out.sum_tau2_nonzero) * out.sum_tau2_nonzero <=
                         static_cast<u128>(out.E_box) * out.E_scaled;
    return out;
}

}  // namespace boxsum
