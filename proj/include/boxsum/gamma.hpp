#pragma once

// The lattice Gamma_z = { (x, y) in Z^{2n} : y = A_z x mod p } attached to a
// ratio z, its polar lattice, and the dyadic / s(z) classification of z.

#include <optional>
#include <vector>

#include "boxsum/basis.hpp"
#include "boxsum/box.hpp"
#include "boxsum/lattice.hpp"

namespace boxsum {

/// A_z (row-major n x n): coords(z x) = A_z coords(x) mod p.
inline std::vector<u64> mult_matrix(const FieldCtx& ctx, const BasisMatrix& basis, const FqElem& z) {
    const unsigned n = basis.n();
    std::vector<u64> a(n * n);
    for (unsigned c = 0; c < n; ++c) {
        const auto col = basis.coords(ctx.mul(z, basis.column(c)));
        for (unsigned r = 0; r < n; ++r) a[r * n + c] = col[r];
    }
    return a;
}

inline IntLattice gamma_z(const FieldCtx& ctx, const BasisMatrix& basis, const FqElem& z) {
    const unsigned n = basis.n();
    const auto a = mult_matrix(ctx, basis, z);
    IntLattice L;
    L.dim = 2 * n;
    L.rows.assign(2 * n, IntVec(2 * n, 0));
    for (unsigned i = 0; i < n; ++i) {
        L.rows[i][i] = 1;
        for (unsigned r = 0; r < n; ++r) L.rows[i][n + r] = static_cast<i64>(a[r * n + i]);
        L.rows[n + i][n + i] = static_cast<i64>(basis.p());
    }
    return L;
}

/// (x, y) in Gamma_z  iff  y = A_z x mod p.
inline bool in_gamma_z(const FieldCtx& ctx, const BasisMatrix& basis, const FqElem& z, std::span<const i64> v) {
    const unsigned n = basis.n();
    const i64 p = static_cast<i64>(basis.p());
    const auto a = mult_matrix(ctx, basis, z);
    for (unsigned r = 0; r < n; ++r) {
        i128 s = 0;
        for (unsigned c = 0; c < n; ++c) s += static_cast<i128>(a[r * n + c]) * v[c];
        if (mod_floor(static_cast<i64>(s % p), p) != mod_floor(v[n + r], p)) return false;
    }
    return true;
}

/// p Gamma_z^* = { (U, V) : U = -A_z^T V mod p }, returned with denom p.
inline IntLattice polar_gamma_z(const FieldCtx& ctx, const BasisMatrix& basis, const FqElem& z) {
    const unsigned n = basis.n();
    const i64 p = static_cast<i64>(basis.p());
    const auto a = mult_matrix(ctx, basis, z);
    IntLattice L;
    L.dim = 2 * n;
    L.denom = p;
    L.rows.assign(2 * n, IntVec(2 * n, 0));
    for (unsigned i = 0; i < n; ++i) {
        L.rows[i][i] = p;
        for (unsigned k = 0; k < n; ++k) L.rows[n + i][k] = mod_floor(-static_cast<i64>(a[i * n + k]), p);
        L.rows[n + i][n + i] = 1;
    }
    return L;
}

inline GaugeBody box_body(const Box& b) { return {GaugeKind::sup_box, b.H}; }
inline GaugeBody polar_body(const Box& b) { return {GaugeKind::polar_l1, b.H}; }

/// First minimum of the polar body over Gamma_z^*.
inline MinimaResult lambda1_star(const FieldCtx& ctx, const Box& b, const FqElem& z, u64 budget = kDefaultNodeBudget) {
    return successive_minima(polar_gamma_z(ctx, b.basis, z), polar_body(b), budget, 1);
}

/// The integer j with 2^{j-1} <= v < 2^j, for v > 0.
inline int dyadic_index(const Rational& v) {
    if (v.num() <= 0) throw std::domain_error("dyadic_index needs a positive value");
    int j = 0;
    Rational lo(1, 2);  // 2^{j-1}
    Rational hi(1);     // 2^j
    while (v < lo) {
        --j;
        hi = lo;
        lo = lo * Rational(1, 2);
    }
    while (!(v < hi)) {
        ++j;
        lo = hi;
        hi = hi * Rational(2);
    }
    return j;
}

struct ZClass {
    MinimaResult minima;
    MinimaResult polar;    // first minimum only
    Rational lambda1_star;
    unsigned s = 0;        // max { j : lambda_j <= 1 }
    int j = 0;             // 2^{j-1} <= H_{n-1} lambda_1 < 2^j
    int j_star = 0;        // 2^{j-1} <= p lambda_1^* / H_1 < 2^j
    std::optional<u32> recovered;  // packed y x^{-1} from the lambda_1 witness
    bool recovered_ok = false;
    bool lower_bounds_ok = true;   // lambda_1 >= 1/H_{n-1}, and lambda_2 >= 1/H_1 when n = 3
    bool polar_lower_ok = true;    // lambda_1^* >= H_1 / p whenever lambda_1^* <= 1
};

/// Classifies z for a box whose edges are sorted increasingly.
inline ZClass classify_z(const FieldCtx& ctx, const Box& b, const FqElem& z, u64 budget = kDefaultNodeBudget) {
    if (!b.sorted()) throw BoxError("classify_z expects a normalized box (H sorted)");
    const unsigned n = b.n();
    if (n < 2) throw BoxError("classify_z needs n >= 2");
    ZClass out;
    out.minima = successive_minima(gamma_z(ctx, b.basis, z), box_body(b), budget);
    out.polar = lambda1_star(ctx, b, z, budget);
    out.lambda1_star = out.polar.lambdas[0];

    for (unsigned i = 0; i < out.minima.lambdas.size(); ++i)
        if (!(Rational(1) < out.minima.lambdas[i])) out.s = i + 1;

    const i64 h_outer = b.H[n - 2];
    out.j = dyadic_index(Rational(h_outer) * out.minima.lambdas[0]);
    out.j_star = dyadic_index(Rational(static_cast<i64>(b.p())) * out.lambda1_star * Rational(1, b.H[0]));

    const auto& w = out.minima.witnesses[0];
    std::vector<i64> xs(w.begin(), w.begin() + n), ys(w.begin() + n, w.end());
    const FqElem x = b.basis.to_elem(xs);
    const FqElem y = b.basis.to_elem(ys);
    if (ctx.index(x) == 0) throw std::logic_error("classify_z: lambda_1 witness has zero x-half");
    out.recovered = ctx.index(ctx.div(y, x));
    out.recovered_ok = *out.recovered == ctx.index(z);

    out.lower_bounds_ok = !(out.minima.lambdas[0] < Rational(1, h_outer));
    if (n == 3) out.lower_bounds_ok = out.lower_bounds_ok && !(out.minima.lambdas[1] < Rational(1, b.H[0]));
    if (!(Rational(1) < out.lambda1_star))
        out.polar_lower_ok = !(out.lambda1_star < Rational(b.H[0], static_cast<i64>(b.p())));
    return out;
}

/// prod_i max(1, 1/lambda_i), in double (used against fixtures only).
inline double minima_count_shape(const std::vector<Rational>& lambdas) {
    double prod = 1.0;
    for (const auto& l : lambdas) prod *= std::max(1.0, 1.0 / l.to_double());
    return prod;
}

}  // namespace boxsum
