#pragma once

// Amplification trace for boxes with all edges below sqrt(p/2): the shift
// x -> x + yz averaged over y in the scaled box and z in I = [1, p^delta],
// the Hoelder chain bounding the averaged sum, and the 2r-th moment of short
// interval sums with its good/bad tuple census.

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <vector>

#include "boxsum/box.hpp"
#include "boxsum/character.hpp"
#include "boxsum/energy.hpp"

namespace boxsum {

class RegimeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr u64 kMaxR = 30;
inline constexpr u64 kMaxIntervalLength = 10'000;
inline constexpr u64 kDefaultMomentBudget = u64{1} << 34;

struct BurgessParams {
    u64 r = 0;
    double delta = 0.0;
    bool bracket_ok = false;  // (6/13) eps <= delta <= (6/11) eps
};

inline BurgessParams choose_parameters(double eps) {
    if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("epsilon must lie in (0, 1/2)");
    BurgessParams out;
    out.r = static_cast<u64>(std::llround(3.0 / eps));
    out.delta = 3.0 / (2.0 * static_cast<double>(out.r));
    out.bracket_ok = 6.0 / 13.0 * eps <= out.delta + 1e-15 && out.delta <= 6.0 / 11.0 * eps + 1e-15;
    return out;
}

/// |I| for I = [1, p^delta] (never empty since p^delta > 1).
inline u64 interval_length(u64 p, double delta) {
    return std::max<u64>(1, static_cast<u64>(std::floor(std::pow(static_cast<double>(p), delta))));
}

// ---------------------------------------------------------------------------
// Moments

/// Associated Stirling numbers: partitions of an m-set into k blocks, every
/// block of size >= 2. Returns table[m][k] for m <= m_max.
inline std::vector<std::vector<BigInt>> associated_stirling(unsigned m_max) {
    std::vector<std::vector<BigInt>> s(m_max + 1, std::vector<BigInt>(m_max + 1, 0));
    s[0][0] = 1;
    for (unsigned m = 1; m <= m_max; ++m)
        for (unsigned k = 1; k <= m; ++k) {
            s[m][k] = BigInt(k) * s[m - 1][k];
            if (m >= 2) s[m][k] += BigInt(m - 1) * s[m - 2][k - 1];
        }
    return s;
}

/// Tuples in {1..len}^{2r} in which no value occurs exactly once.
inline BigInt bad_tuple_count(u64 len, u64 r) {
    const unsigned m = static_cast<unsigned>(2 * r);
    const auto s = associated_stirling(m);
    BigInt total = 0, choose = 1, fact = 1;  // C(len, k), k!
    for (unsigned k = 1; k <= m && k <= len; ++k) {
        choose = choose * (len - k + 1) / k;
        fact *= k;
        total += choose * s[m][k] * fact;
    }
    return total;
}

inline BigInt bad_tuple_bound(u64 len, u64 r) {
    BigInt b = 1;
    for (u64 i = 0; i < r; ++i) b *= len;
    for (u64 i = 0; i < 2 * r; ++i) b *= r;
    return b;
}

struct MomentResult {
    double value = 0.0;  // sum_u |sum_{z in I} chi(u + z)|^{2r}
    double bound = 0.0;  // 2r sqrt(q) |I|^{2r} + q |I|^r r^{2r}
    BigInt bad = 0;
    BigInt bad_bound = 0;
    BigInt tuples = 0;   // |I|^{2r}
    bool value_ok = false;
    bool census_ok = false;
};

inline MomentResult moment_sum(const Character& chi, u64 len, u64 r, u64 budget = kDefaultMomentBudget) {
    const FieldCtx& ctx = chi.ctx();
    if (r < 1 || r > kMaxR) throw std::invalid_argument("r must lie in [1, " + std::to_string(kMaxR) + "]");
    if (len < 1 || len > kMaxIntervalLength)
        throw std::invalid_argument("|I| must lie in [1, " + std::to_string(kMaxIntervalLength) + "]");
    if (static_cast<u128>(ctx.q()) * len > budget) throw BudgetError("moment_sum: q |I| exceeds budget");

    std::vector<FqElem> shifts(len);
    for (u64 z = 1; z <= len; ++z) shifts[z - 1] = ctx.constant(static_cast<i64>(z));

    MomentResult out;
    long double acc = 0.0L;
    for (u32 ui = 0; ui < ctx.q(); ++ui) {
        const FqElem u = ctx.elem(ui);
        CompensatedSum inner;
        for (const auto& z : shifts) inner.add(chi(ctx.add(u, z)));
        acc += std::pow(static_cast<long double>(std::norm(inner.value())), static_cast<long double>(r));
    }
    out.value = static_cast<double>(acc);

    const long double L = static_cast<long double>(len), R = static_cast<long double>(r);
    const long double q = static_cast<long double>(ctx.q());
    const long double bound = 2.0L * R * std::sqrt(q) * std::pow(L, 2.0L * R) + q * std::pow(L, R) * std::pow(R, 2.0L * R);
    out.bound = static_cast<double>(bound);
    out.value_ok = acc <= bound + 1e-3L;

    out.bad = bad_tuple_count(len, r);
    out.bad_bound = bad_tuple_bound(len, r);
    out.tuples = 1;
    for (u64 i = 0; i < 2 * r; ++i) out.tuples *= len;
    out.census_ok = out.bad <= out.bad_bound;
    return out;
}

// ---------------------------------------------------------------------------
// Trace

struct BurgessTrace {
    BurgessParams params;
    u64 interval_len = 0;
    Box scaled;
    u64 box_size = 0, scaled_size = 0;

    cplx true_sum;
    cplx averaged;          // (1 / |B_0||I|) sum_{x, y, z} chi(x + yz)
    u64 max_symdiff = 0;    // max over (y, z) of |B \ (B+yz)| + |(B+yz) \ B|
    double shift_limit = 0; // 6 p^{-delta} |B|
    bool shift_ok = false;
    bool shift_oracle_ok = false;   // membership count = closed form
    bool shift_identity_ok = false; // |true - averaged| <= max_symdiff

    // Hoelder chain, each level bounding the previous one.
    double T = 0;   // |sum_{x, y, z} chi(x + yz)|
    double L0 = 0;  // sum_{x, y} |sum_z chi(x + yz)|
    double L1 = 0;  // sum_u tau(u) |g(u)| + |B||I|
    double L2 = 0;  // (sum tau)^{1 - 1/r} (sum tau |g|^r)^{1/r} + |B||I|
    double L3 = 0;  // (sum tau)^{1 - 1/r} (sum tau^2)^{1/2r} M^{1/2r} + |B||I|
    double L4 = 0;  // L3 with M replaced by its explicit bound and sum tau by |B|(|B_0| - 1)
    bool chain_ok = false;

    TauProfile tau;
    double tau2_shape = 0;  // sum tau^2 / (|B||B_0| log^3 p)
    MomentResult moment;

    double assembled = 0;           // L3 / (|B_0||I|) + max_symdiff
    double assembled_explicit = 0;  // L4 / (|B_0||I|) + 6 p^{-delta} |B|
    bool assembled_ok = false;

    bool all_ok() const {
        return shift_ok && shift_oracle_ok && shift_identity_ok && chain_ok && tau.all_ok() && moment.value_ok &&
               moment.census_ok && assembled_ok;
    }
};

namespace detail {

inline bool le_tol(double a, double b) { return a <= b + 1e-6 * std::max(1.0, std::abs(b)); }

}  // namespace detail

inline BurgessTrace burgess_trace(const FieldCtx& ctx, const Box& b, const Character& chi, double eps) {
    for (i64 h : b.H)
        if (!below_half_root(h, b.p())) throw RegimeError("burgess_trace needs every H_i < sqrt(p/2)");
    if (chi.trivial()) throw RegimeError("burgess_trace needs a nontrivial character");

    BurgessTrace t;
    t.params = choose_parameters(eps);
    if (t.params.r > kMaxR) throw RegimeError("r exceeds cap");
    const u64 p = b.p();
    const unsigned n = b.n();
    t.interval_len = interval_length(p, t.params.delta);
    if (t.interval_len > kMaxIntervalLength) throw RegimeError("|I| exceeds cap");
    t.scaled = scaled_box(b, t.params.delta);
    t.box_size = b.size();
    t.scaled_size = t.scaled.size();
    t.true_sum = box_char_sum(chi, b);

    const double pd = static_cast<double>(p);
    t.shift_limit = 6.0 * std::pow(pd, -t.params.delta) * static_cast<double>(t.box_size);

    // Box points with integer coordinates, and scaled-box points likewise.
    std::vector<std::vector<i64>> xs;
    std::vector<FqElem> xe;
    for_each_point(b, [&](std::span<const i64> c, const FqElem& e) {
        xs.emplace_back(c.begin(), c.end());
        xe.push_back(e);
    });
    std::vector<std::vector<i64>> ys;
    std::vector<FqElem> ye;
    for_each_point(t.scaled, [&](std::span<const i64> c, const FqElem& e) {
        ys.emplace_back(c.begin(), c.end());
        ye.push_back(e);
    });

    const i64 pi = static_cast<i64>(p);
    auto inside = [&](std::span<const i64> c) {
        for (unsigned i = 0; i < n; ++i)
            if (mod_floor(c[i] - b.lo(i), pi) >= b.H[i]) return false;
        return true;
    };

    CompensatedSum triple;
    CompensatedSum level0;
    t.shift_ok = t.shift_oracle_ok = true;
    std::vector<i64> shifted(n);
    for (std::size_t yi = 0; yi < ys.size(); ++yi) {
        for (u64 z = 1; z <= t.interval_len; ++z) {
            // yz has box coordinates z * y (no reduction needed: they are
            // below p^{-delta} H_i).
            u64 kept = 0;
            for (const auto& x : xs) {
                for (unsigned i = 0; i < n; ++i) shifted[i] = x[i] + static_cast<i64>(z) * ys[yi][i];
                kept += inside(shifted) ? 1 : 0;
            }
            const u64 symdiff = 2 * (t.box_size - kept);
            u64 closed = 1;
            for (unsigned i = 0; i < n; ++i) {
                const i64 shift = static_cast<i64>(z) * ys[yi][i];
                closed *= static_cast<u64>(std::max<i64>(0, b.H[i] - shift));
            }
            if (symdiff != 2 * (t.box_size - closed)) t.shift_oracle_ok = false;
            t.max_symdiff = std::max(t.max_symdiff, symdiff);
            if (static_cast<double>(symdiff) > t.shift_limit) t.shift_ok = false;
        }
        const FqElem y = ye[yi];
        for (const auto& x : xe) {
            CompensatedSum inner;
            for (u64 z = 1; z <= t.interval_len; ++z)
                inner.add(chi(ctx.add(x, ctx.mul(y, ctx.constant(static_cast<i64>(z))))));
            triple.add(inner.value());
            level0.add(cplx(std::abs(inner.value()), 0.0));
        }
    }
    const double norm = static_cast<double>(t.scaled_size) * static_cast<double>(t.interval_len);
    t.averaged = triple.value() / norm;
    t.shift_identity_ok = detail::le_tol(std::abs(t.true_sum - t.averaged), static_cast<double>(t.max_symdiff));

    t.tau = tau_profile(ctx, b, t.scaled);
    t.moment = moment_sum(chi, t.interval_len, t.params.r);

    const double r = static_cast<double>(t.params.r);
    const double BI = static_cast<double>(t.box_size) * static_cast<double>(t.interval_len);
    long double sum_tau_g = 0, sum_tau_gr = 0;
    for (const auto& [u, tv] : t.tau.tau) {
        CompensatedSum g;
        const FqElem ue = ctx.elem(u);
        for (u64 z = 1; z <= t.interval_len; ++z) g.add(chi(ctx.add(ue, ctx.constant(static_cast<i64>(z)))));
        const long double a = std::abs(g.value());
        sum_tau_g += static_cast<long double>(tv) * a;
        sum_tau_gr += static_cast<long double>(tv) * std::pow(a, static_cast<long double>(r));
    }
    const double st = static_cast<double>(t.tau.sum_tau);
    const double st2 = static_cast<double>(t.tau.sum_tau2());
    t.T = std::abs(triple.value());
    t.L0 = std::abs(level0.value());
    t.L1 = static_cast<double>(sum_tau_g) + BI;
    t.L2 = std::pow(st, 1.0 - 1.0 / r) * std::pow(static_cast<double>(sum_tau_gr), 1.0 / r) + BI;
    t.L3 = std::pow(st, 1.0 - 1.0 / r) * std::pow(st2, 1.0 / (2 * r)) * std::pow(t.moment.value, 1.0 / (2 * r)) + BI;
    const double st_explicit = static_cast<double>(t.box_size) * static_cast<double>(t.scaled_size - 1);
    t.L4 = std::pow(st_explicit, 1.0 - 1.0 / r) * std::pow(st2, 1.0 / (2 * r)) * std::pow(t.moment.bound, 1.0 / (2 * r)) +
           BI;
    t.chain_ok = detail::le_tol(t.T, t.L0) && detail::le_tol(t.L0, t.L1) && detail::le_tol(t.L1, t.L2) &&
                 detail::le_tol(t.L2, t.L3) && detail::le_tol(t.L3, t.L4);

    const double lp = std::log(pd);
    t.tau2_shape = st2 / (static_cast<double>(t.box_size) * static_cast<double>(t.scaled_size) * lp * lp * lp);

    t.assembled = t.L3 / norm + static_cast<double>(t.max_symdiff);
    t.assembled_explicit = t.L4 / norm + t.shift_limit;
    t.assembled_ok = detail::le_tol(std::abs(t.true_sum), t.assembled) &&
                     detail::le_tol(std::abs(t.true_sum), t.assembled_explicit);
    return t;
}

}  // namespace boxsum
