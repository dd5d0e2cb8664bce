#pragma once

// Boxes B = { sum x_i w_i : N_i + 1 <= x_i <= N_i + H_i } and the boxes
// derived from them: the symmetric difference box, the scaled box used by the
// shift argument, near-equal subdivision, and the line/degenerate-pair
// bookkeeping for tall boxes.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "boxsum/basis.hpp"

namespace boxsum {

class BoxError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Box {
    BasisMatrix basis;
    std::vector<i64> N;
    std::vector<i64> H;

    static Box make(BasisMatrix basis, std::vector<i64> N, std::vector<i64> H) {
        const unsigned n = basis.n();
        if (N.size() != n || H.size() != n) throw BoxError("box needs one offset and one edge per basis vector");
        for (i64 h : H)
            if (h < 1 || static_cast<u64>(h) > basis.p()) throw BoxError("box edges must satisfy 1 <= H_i <= p");
        return Box{std::move(basis), std::move(N), std::move(H)};
    }

    unsigned n() const { return basis.n(); }
    u64 p() const { return basis.p(); }
    u64 size() const {
        u64 s = 1;
        for (i64 h : H) s *= static_cast<u64>(h);
        return s;
    }
    i64 lo(unsigned i) const { return N[i] + 1; }
    i64 hi(unsigned i) const { return N[i] + H[i]; }
    bool interval_contains(unsigned i, i64 v) const { return lo(i) <= v && v <= hi(i); }
    /// Whether [N_i + 1, N_i + H_i] contains an integer congruent to 0 mod p.
    bool interval_hits_zero_mod_p(unsigned i) const {
        return mod_floor(-lo(i), static_cast<i64>(p())) < H[i];
    }
    bool sorted() const { return std::is_sorted(H.begin(), H.end()); }
};

/// Calls fn(coords, element) for every point, lexicographic in the box
/// coordinates (last coordinate fastest).
template <class Fn>
void for_each_point(const Box& b, Fn&& fn) {
    const unsigned n = b.n();
    std::vector<i64> x(n);
    for (unsigned i = 0; i < n; ++i) x[i] = b.lo(i);
    for (;;) {
        fn(std::span<const i64>(x), b.basis.to_elem(x));
        unsigned i = n;
        while (i > 0) {
            --i;
            if (x[i] < b.hi(i)) {
                ++x[i];
                break;
            }
            x[i] = b.lo(i);
            if (i == 0) return;
        }
    }
}

inline std::vector<u32> box_indices(const FieldCtx& ctx, const Box& b) {
    std::vector<u32> out;
    out.reserve(b.size());
    for_each_point(b, [&](std::span<const i64>, const FqElem& e) { out.push_back(ctx.index(e)); });
    return out;
}

inline bool box_contains(const Box& b, const FqElem& e) {
    const auto x = b.basis.coords(e);
    for (unsigned i = 0; i < b.n(); ++i)
        if (mod_floor(static_cast<i64>(x[i]) - b.lo(i), static_cast<i64>(b.p())) >= b.H[i]) return false;
    return true;
}

/// Reorders coordinates so that H_1 <= ... <= H_n (stable), permuting basis
/// columns jointly with N and H.
inline Box normalize(const Box& b) {
    std::vector<unsigned> perm(b.n());
    std::iota(perm.begin(), perm.end(), 0U);
    std::stable_sort(perm.begin(), perm.end(), [&](unsigned a, unsigned c) { return b.H[a] < b.H[c]; });
    std::vector<i64> N(b.n()), H(b.n());
    for (unsigned i = 0; i < b.n(); ++i) {
        N[i] = b.N[perm[i]];
        H[i] = b.H[perm[i]];
    }
    return Box{b.basis.permuted(perm), std::move(N), std::move(H)};
}

/// B_0 = { sum x_i w_i : -H_i <= x_i <= H_i }. Requires 2 H_i + 1 <= p so the
/// coordinates stay distinct mod p.
inline Box difference_box(const Box& b) {
    std::vector<i64> N(b.n()), H(b.n());
    for (unsigned i = 0; i < b.n(); ++i) {
        N[i] = -b.H[i] - 1;
        H[i] = 2 * b.H[i] + 1;
    }
    return Box::make(b.basis, std::move(N), std::move(H));
}

/// Coordinates x_i in [0, floor(p^{-2 delta} H_i)].
inline Box scaled_box(const Box& b, double delta) {
    const double f = std::pow(static_cast<double>(b.p()), -2.0 * delta);
    std::vector<i64> N(b.n(), -1), H(b.n());
    for (unsigned i = 0; i < b.n(); ++i) H[i] = static_cast<i64>(std::floor(f * static_cast<double>(b.H[i]))) + 1;
    return Box::make(b.basis, std::move(N), std::move(H));
}

/// |B ∩ w_n F_p|: H_n when every earlier interval meets 0 (mod p), else 0.
inline u64 omega_line_intersection(const Box& b) {
    for (unsigned i = 0; i + 1 < b.n(); ++i)
        if (!b.interval_hits_zero_mod_p(i)) return 0;
    return static_cast<u64>(b.H[b.n() - 1]);
}

/// 2 h^2 < p, i.e. h < sqrt(p/2), decided exactly.
inline bool below_half_root(i64 h, u64 p) { return static_cast<u128>(2) * h * h < p; }

/// Near-equal integer pieces of one edge: ceil(H / (sqrt(p/2) - 1)) pieces
/// whose lengths differ by at most one, each below sqrt(p/2).
inline std::vector<i64> split_edge(i64 h, u64 p) {
    if (below_half_root(h, p)) return {h};
    const double s = std::sqrt(static_cast<double>(p) / 2.0);
    i64 k = static_cast<i64>(std::ceil(static_cast<double>(h) / (s - 1.0)));
    k = std::max<i64>(k, 1);
    while (!below_half_root((h + k - 1) / k, p)) ++k;
    std::vector<i64> out(static_cast<std::size_t>(k), h / k);
    for (i64 i = 0; i < h % k; ++i) ++out[static_cast<std::size_t>(i)];
    return out;
}

/// Partition of B into sub-boxes with every edge below sqrt(p/2).
inline std::vector<Box> subdivide_box(const Box& b) {
    const u64 p = b.p();
    std::vector<std::vector<std::pair<i64, i64>>> pieces(b.n());  // (N, H) per coordinate
    for (unsigned i = 0; i < b.n(); ++i) {
        i64 off = b.N[i];
        for (i64 len : split_edge(b.H[i], p)) {
            pieces[i].emplace_back(off, len);
            off += len;
        }
    }
    std::vector<Box> out;
    std::vector<std::size_t> pick(b.n(), 0);
    for (;;) {
        std::vector<i64> N(b.n()), H(b.n());
        for (unsigned i = 0; i < b.n(); ++i) std::tie(N[i], H[i]) = pieces[i][pick[i]];
        out.push_back(Box::make(b.basis, std::move(N), std::move(H)));
        unsigned i = b.n();
        while (i > 0) {
            --i;
            if (++pick[i] < pieces[i].size()) break;
            pick[i] = 0;
            if (i == 0) return out;
        }
    }
}

/// Outer coordinate tuples (x_1, ..., x_{n-1}) for which
/// sum_{i<n} x_i w_i / w_n lies in F_p, found by direct scan.
inline std::vector<std::vector<i64>> degenerate_pair_set(const FieldCtx& ctx, const Box& b) {
    const unsigned n = b.n();
    if (n < 2) throw BoxError("degenerate pair set needs n >= 2");
    const FqElem wn_inv = ctx.inv(b.basis.column(n - 1));
    std::vector<FqElem> ratio(n - 1);
    for (unsigned i = 0; i + 1 < n; ++i) ratio[i] = ctx.mul(b.basis.column(i), wn_inv);

    std::vector<std::vector<i64>> out;
    std::vector<i64> x(n - 1);
    for (unsigned i = 0; i + 1 < n; ++i) x[i] = b.lo(i);
    for (;;) {
        FqElem e = ctx.zero();
        for (unsigned i = 0; i + 1 < n; ++i) e = ctx.add(e, ctx.scale(ratio[i], x[i]));
        if (!ctx.is_generating(e)) out.push_back(x);
        unsigned i = n - 1;
        bool done = true;
        while (i > 0) {
            --i;
            if (x[i] < b.hi(i)) {
                ++x[i];
                done = false;
                break;
            }
            x[i] = b.lo(i);
        }
        if (done) return out;
    }
}

/// Closed form of the degenerate set: the single tuple of multiples of p in
/// the outer intervals, if each interval contains one; otherwise empty.
inline std::vector<std::vector<i64>> degenerate_pair_closed_form(const Box& b) {
    std::vector<i64> x(b.n() - 1);
    const i64 p = static_cast<i64>(b.p());
    for (unsigned i = 0; i + 1 < b.n(); ++i) {
        if (!b.interval_hits_zero_mod_p(i)) return {};
        x[i] = b.lo(i) + mod_floor(-b.lo(i), p);
    }
    return {x};
}

/// "N1:H1,N2:H2[,N3:H3]"
inline Box parse_box_literal(const std::string& text, const BasisMatrix& basis) {
    std::vector<i64> N, H;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        const auto colon = part.find(':');
        if (colon == std::string::npos) throw BoxError("box literal piece '" + part + "' is not N:H");
        try {
            std::size_t used = 0;
            N.push_back(std::stoll(part.substr(0, colon), &used));
            if (used != colon) throw BoxError("bad offset in '" + part + "'");
            const std::string hs = part.substr(colon + 1);
            H.push_back(std::stoll(hs, &used));
            if (used != hs.size()) throw BoxError("bad edge in '" + part + "'");
        } catch (const std::logic_error&) {
            throw BoxError("box literal piece '" + part + "' is not N:H");
        }
    }
    return Box::make(basis, std::move(N), std::move(H));
}

inline std::string format_box_literal(const Box& b) {
    std::string s;
    for (unsigned i = 0; i < b.n(); ++i) {
        if (i) s += ',';
        s += std::to_string(b.N[i]) + ":" + std::to_string(b.H[i]);
    }
    return s;
}

}  // namespace boxsum
