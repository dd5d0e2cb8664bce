#pragma once

// Multiplicative characters chi_k(g^m) = exp(2 pi i k m / (q - 1)) with
// chi(0) = 0, and the character sums built from them: box sums, complete
// sums of polynomial arguments, interval sums at generating elements, and the
// row decomposition of a box sum along its last coordinate.

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <numeric>
#include <vector>

#include "boxsum/box.hpp"
#include "boxsum/field.hpp"

namespace boxsum {

using cplx = std::complex<double>;

class Character {
public:
    Character(const FieldCtx& ctx, u64 k) : ctx_(&ctx) {
        const u64 qm1 = ctx.q() - 1;
        k_ = k % qm1;
        const u64 g = std::gcd(k_, qm1);  // gcd(0, m) = m
        order_ = qm1 / g;
        step_ = k_ / g;
        auto roots = std::make_shared<std::vector<cplx>>(order_);
        for (u64 j = 0; j < order_; ++j)
            (*roots)[j] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(order_));
        roots_ = std::move(roots);
    }

    const FieldCtx& ctx() const { return *ctx_; }
    u64 index() const { return k_; }
    /// Order d = (q - 1) / gcd(q - 1, k).
    u64 order() const { return order_; }
    bool trivial() const { return k_ == 0; }

    /// chi restricted to F_p^* is trivial iff (p - 1) | k, since F_p^* is
    /// generated by g^((q-1)/(p-1)).
    bool trivial_on_prime_field() const { return k_ % (ctx_->p() - 1) == 0; }

    /// chi(g^m)
    cplx at_log(u64 m) const { return (*roots_)[mul_mod(step_, m % order_, order_)]; }
    cplx at_index(u32 idx) const {
        if (idx == 0) return {0.0, 0.0};
        return at_log(ctx_->dlog_idx(idx));
    }
    cplx operator()(const FqElem& a) const { return at_index(ctx_->index(a)); }

private:
    const FieldCtx* ctx_;
    u64 k_ = 0;
    u64 order_ = 1;
    u64 step_ = 0;
    std::shared_ptr<const std::vector<cplx>> roots_;
};

inline cplx char_eval(const Character& chi, const FqElem& a) { return chi(a); }

/// sum_{x in B} chi(x), lexicographic order, compensated accumulation.
inline cplx box_char_sum(const Character& chi, const Box& b) {
    CompensatedSum acc;
    for_each_point(b, [&](std::span<const i64>, const FqElem& e) { acc.add(chi(e)); });
    return acc.value();
}

struct RootPower {
    FqElem z;
    u64 e = 1;
};

struct CompleteSum {
    cplx value;
    unsigned distinct_roots = 0;
    /// Every exponent is divisible by the character order, so the argument
    /// is a d-th power and no bound applies.
    bool degenerate = false;
    double weil_bound = 0.0;  // (m - 1) sqrt(q)
};

/// sum_{u in F_q} chi( prod_i (u + z_i)^{e_i} ).
inline CompleteSum complete_poly_char_sum(const Character& chi, const std::vector<RootPower>& roots) {
    const FieldCtx& ctx = chi.ctx();
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            if (roots[i].z == roots[j].z) throw FieldError("complete sum roots must be distinct");
    for (const auto& r : roots)
        if (r.e == 0) throw FieldError("complete sum exponents must be positive");

    CompleteSum out;
    out.distinct_roots = static_cast<unsigned>(roots.size());
    out.degenerate = true;
    for (const auto& r : roots)
        if (r.e % chi.order() != 0) out.degenerate = false;
    out.weil_bound = (static_cast<double>(roots.size()) - 1.0) * std::sqrt(static_cast<double>(ctx.q()));

    const u64 qm1 = ctx.q() - 1;
    CompensatedSum acc;
    for (u64 ui = 0; ui < ctx.q(); ++ui) {
        const FqElem u = ctx.elem(static_cast<u32>(ui));
        u64 log_sum = 0;
        bool zero = false;
        for (const auto& r : roots) {
            const u32 s = ctx.index(ctx.add(u, r.z));
            if (s == 0) {
                zero = true;
                break;
            }
            log_sum = (log_sum + mul_mod(ctx.dlog_idx(s), r.e % qm1, qm1)) % qm1;
        }
        if (!zero) acc.add(chi.at_log(log_sum));
    }
    out.value = acc.value();
    return out;
}

struct IntervalSum {
    cplx value;
    double ratio = 0.0;  // |value| / (sqrt(p) log p)
};

inline double sqrt_p_log_p(u64 p) {
    const double pd = static_cast<double>(p);
    return std::sqrt(pd) * std::log(pd);
}

/// sum_{t = lo}^{hi} chi(a + t) for a generating element a.
inline IntervalSum generator_interval_sum(const Character& chi, const FqElem& a, i64 lo, i64 hi) {
    const FieldCtx& ctx = chi.ctx();
    if (!ctx.is_generating(a)) throw FieldError("interval sums need a generating element");
    CompensatedSum acc;
    for (i64 t = lo; t <= hi; ++t) acc.add(chi(ctx.add(a, ctx.constant(t))));
    IntervalSum out{acc.value(), 0.0};
    out.ratio = std::abs(out.value) / sqrt_p_log_p(ctx.p());
    return out;
}

/// max over all subintervals I of [1, p] of |sum_{t in I} chi(a + t)|, via
/// prefix sums.
inline double max_subinterval_sum(const Character& chi, const FqElem& a) {
    const FieldCtx& ctx = chi.ctx();
    const i64 p = static_cast<i64>(ctx.p());
    std::vector<cplx> prefix(static_cast<std::size_t>(p) + 1, cplx{});
    for (i64 t = 1; t <= p; ++t)
        prefix[static_cast<std::size_t>(t)] = prefix[static_cast<std::size_t>(t - 1)] + chi(ctx.add(a, ctx.constant(t)));
    double best = 0.0;
    for (std::size_t lo = 0; lo < prefix.size(); ++lo)
        for (std::size_t hi = lo + 1; hi < prefix.size(); ++hi) best = std::max(best, std::abs(prefix[hi] - prefix[lo]));
    return best;
}

/// max over all subintervals I of [1, p] of |sum_{x in I} chi(x)|; the
/// restriction of chi to F_p is a Dirichlet character mod p.
inline double max_prime_interval_sum(const Character& chi) {
    const FieldCtx& ctx = chi.ctx();
    const i64 p = static_cast<i64>(ctx.p());
    std::vector<cplx> prefix(static_cast<std::size_t>(p) + 1, cplx{});
    for (i64 t = 1; t <= p; ++t)
        prefix[static_cast<std::size_t>(t)] = prefix[static_cast<std::size_t>(t - 1)] + chi(ctx.constant(t));
    double best = 0.0;
    for (std::size_t lo = 0; lo < prefix.size(); ++lo)
        for (std::size_t hi = lo + 1; hi < prefix.size(); ++hi) best = std::max(best, std::abs(prefix[hi] - prefix[lo]));
    return best;
}

struct TallBoxRow {
    std::vector<i64> outer;  // x_1, ..., x_{n-1}
    cplx inner;              // sum over x_n of chi(sum_{i<n} x_i w_i / w_n + x_n)
    bool degenerate = false;  // the shift lies in F_p
};

struct TallBoxResult {
    cplx lhs;
    cplx rhs;
    std::vector<TallBoxRow> rows;
    double max_inner_outside_degenerate = 0.0;
};

/// Rewrites sum_{x in B} chi(x) as chi(w_n) sum_rows sum_{x_n} chi(c + x_n)
/// with c = sum_{i<n} x_i w_i / w_n.
inline TallBoxResult tall_box_identity(const Character& chi, const Box& b) {
    const FieldCtx& ctx = chi.ctx();
    const unsigned n = b.n();
    if (n < 2) throw BoxError("tall box identity needs n >= 2");

    TallBoxResult out;
    out.lhs = box_char_sum(chi, b);

    const FqElem wn = b.basis.column(n - 1);
    const FqElem wn_inv = ctx.inv(wn);
    std::vector<FqElem> ratio(n - 1);
    for (unsigned i = 0; i + 1 < n; ++i) ratio[i] = ctx.mul(b.basis.column(i), wn_inv);

    CompensatedSum total;
    std::vector<i64> x(n - 1);
    for (unsigned i = 0; i + 1 < n; ++i) x[i] = b.lo(i);
    for (bool more = true; more;) {
        FqElem c = ctx.zero();
        for (unsigned i = 0; i + 1 < n; ++i) c = ctx.add(c, ctx.scale(ratio[i], x[i]));
        CompensatedSum row;
        for (i64 t = b.lo(n - 1); t <= b.hi(n - 1); ++t) row.add(chi(ctx.add(c, ctx.constant(t))));
        TallBoxRow r{x, row.value(), !ctx.is_generating(c)};
        if (!r.degenerate) out.max_inner_outside_degenerate = std::max(out.max_inner_outside_degenerate, std::abs(r.inner));
        total.add(r.inner);
        out.rows.push_back(std::move(r));

        more = false;
        for (unsigned i = n - 1; i-- > 0;) {
            if (x[i] < b.hi(i)) {
                ++x[i];
                more = true;
                break;
            }
            x[i] = b.lo(i);
        }
    }
    out.rhs = chi(wn) * total.value();
    return out;
}

/// sum_{x = lo}^{hi} chi(x w_n), evaluated as the box sum over the degenerate
/// box with x_i = 0 for i < n.
inline cplx prime_line_sum(const Character& chi, const BasisMatrix& basis, i64 lo, i64 hi) {
    const unsigned n = basis.n();
    std::vector<i64> N(n, -1), H(n, 1);
    N[n - 1] = lo - 1;
    H[n - 1] = hi - lo + 1;
    return box_char_sum(chi, Box::make(basis, std::move(N), std::move(H)));
}

}  // namespace boxsum
