#pragma once

// A basis {w_1, ..., w_n} of F_{p^n} over F_p, stored as the matrix whose
// columns are the power-basis coordinates of the w_i, together with its
// inverse mod p for the reverse conversion.

#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "boxsum/field.hpp"

namespace boxsum {

namespace detail {

/// Inverse of a row-major n x n matrix mod p; nullopt when singular.
inline std::optional<std::vector<u64>> invert_mod(std::vector<u64> a, unsigned n, u64 p) {
    std::vector<u64> inv(n * n, 0);
    for (unsigned i = 0; i < n; ++i) inv[i * n + i] = 1;
    for (unsigned col = 0; col < n; ++col) {
        unsigned piv = col;
        while (piv < n && a[piv * n + col] == 0) ++piv;
        if (piv == n) return std::nullopt;
        for (unsigned k = 0; k < n; ++k) {
            std::swap(a[col * n + k], a[piv * n + k]);
            std::swap(inv[col * n + k], inv[piv * n + k]);
        }
        const u64 s = inv_mod(a[col * n + col], p);
        for (unsigned k = 0; k < n; ++k) {
            a[col * n + k] = mul_mod(a[col * n + k], s, p);
            inv[col * n + k] = mul_mod(inv[col * n + k], s, p);
        }
        for (unsigned r = 0; r < n; ++r) {
            if (r == col || a[r * n + col] == 0) continue;
            const u64 f = a[r * n + col];
            for (unsigned k = 0; k < n; ++k) {
                a[r * n + k] = (a[r * n + k] + p - mul_mod(f, a[col * n + k], p)) % p;
                inv[r * n + k] = (inv[r * n + k] + p - mul_mod(f, inv[col * n + k], p)) % p;
            }
        }
    }
    return inv;
}

}  // namespace detail

class BasisMatrix {
public:
    /// `columns[i]` holds the power-basis coordinates of w_{i+1}.
    static BasisMatrix from_columns(u64 p, unsigned n, const std::vector<std::vector<u64>>& columns) {
        if (columns.size() != n) throw FieldError("basis needs exactly n columns");
        BasisMatrix b;
        b.p_ = p;
        b.n_ = n;
        b.m_.assign(n * n, 0);
        for (unsigned c = 0; c < n; ++c) {
            if (columns[c].size() != n) throw FieldError("basis column has wrong length");
            for (unsigned r = 0; r < n; ++r) b.m_[r * n + c] = columns[c][r] % p;
        }
        auto inv = detail::invert_mod(b.m_, n, p);
        if (!inv) throw FieldError("basis matrix is singular mod p");
        b.inv_ = std::move(*inv);
        return b;
    }

    static BasisMatrix power_basis(u64 p, unsigned n) {
        std::vector<std::vector<u64>> cols(n, std::vector<u64>(n, 0));
        for (unsigned i = 0; i < n; ++i) cols[i][i] = 1;
        return from_columns(p, n, cols);
    }

    /// Seed 0 is the power basis; any other seed draws random invertible
    /// matrices from mt19937_64 until one is nonsingular.
    static BasisMatrix from_seed(u64 p, unsigned n, u64 seed) {
        if (seed == 0) return power_basis(p, n);
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<u64> coef(0, p - 1);
        for (;;) {
            std::vector<std::vector<u64>> cols(n, std::vector<u64>(n));
            for (auto& col : cols)
                for (auto& v : col) v = coef(rng);
            std::vector<u64> flat(n * n);
            for (unsigned c = 0; c < n; ++c)
                for (unsigned r = 0; r < n; ++r) flat[r * n + c] = cols[c][r];
            if (detail::invert_mod(flat, n, p)) return from_columns(p, n, cols);
        }
    }

    u64 p() const { return p_; }
    unsigned n() const { return n_; }
    u64 entry(unsigned row, unsigned col) const { return m_[row * n_ + col]; }

    FqElem column(unsigned i) const {
        FqElem e;
        for (unsigned r = 0; r < n_; ++r) e.c[r] = static_cast<u32>(m_[r * n_ + i]);
        return e;
    }

    /// sum_i x_i w_i, with the integer x_i reduced mod p.
    FqElem to_elem(std::span<const i64> x) const {
        FqElem e;
        for (unsigned r = 0; r < n_; ++r) {
            u64 acc = 0;
            for (unsigned c = 0; c < n_; ++c)
                acc = (acc + mul_mod(m_[r * n_ + c], static_cast<u64>(mod_floor(x[c], static_cast<i64>(p_))), p_)) % p_;
            e.c[r] = static_cast<u32>(acc);
        }
        return e;
    }

    /// Coordinates of e with respect to the basis, as residues in [0, p).
    std::vector<u64> coords(const FqElem& e) const {
        std::vector<u64> x(n_, 0);
        for (unsigned r = 0; r < n_; ++r) {
            u64 acc = 0;
            for (unsigned c = 0; c < n_; ++c) acc = (acc + mul_mod(inv_[r * n_ + c], e.c[c], p_)) % p_;
            x[r] = acc;
        }
        return x;
    }

    /// Basis with columns reordered: new column i is old column perm[i].
    BasisMatrix permuted(std::span<const unsigned> perm) const {
        std::vector<std::vector<u64>> cols(n_);
        for (unsigned i = 0; i < n_; ++i) {
            const FqElem w = column(perm[i]);
            cols[i].assign(w.c.begin(), w.c.begin() + n_);
        }
        return from_columns(p_, n_, cols);
    }

    friend bool operator==(const BasisMatrix& a, const BasisMatrix& b) {
        return a.p_ == b.p_ && a.n_ == b.n_ && a.m_ == b.m_;
    }

private:
    u64 p_ = 0;
    unsigned n_ = 0;
    std::vector<u64> m_;    // row-major; column i = coordinates of w_i
    std::vector<u64> inv_;  // row-major inverse
};

}  // namespace boxsum
