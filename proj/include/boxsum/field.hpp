#pragma once

// Arithmetic in F_{p^n} for n in {1, 2, 3}: elements are coefficient vectors
// in the power basis of a monic irreducible modulus. A dense discrete-log
// table (one multiplicative sweep over a generator) backs O(1) products and
// character evaluation.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "boxsum/numeric.hpp"

namespace boxsum {

using u32 = std::uint32_t;

inline constexpr u64 kDefaultTableBudget = u64{1} << 24;
inline constexpr unsigned kMaxDegree = 3;

class FieldError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Power-basis coordinates; entries beyond the field degree stay zero.
struct FqElem {
    std::array<u32, kMaxDegree> c{};

    friend bool operator==(const FqElem&, const FqElem&) = default;
};

enum class ArithOp { add, sub, mul, inv, div };

namespace poly {

// Dense polynomials over F_p, low degree first, no trailing zeros.
using Poly = std::vector<u64>;

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly mod(Poly a, const Poly& m, u64 p) {
    trim(a);
    const u64 lead_inv = inv_mod(m.back(), p);
    while (a.size() >= m.size()) {
        const u64 coef = mul_mod(a.back(), lead_inv, p);
        const std::size_t shift = a.size() - m.size();
        for (std::size_t i = 0; i < m.size(); ++i)
            a[shift + i] = (a[shift + i] + p - mul_mod(coef, m[i], p)) % p;
        trim(a);
    }
    return a;
}

inline Poly mul_mod_poly(const Poly& a, const Poly& b, const Poly& m, u64 p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mul_mod(a[i], b[j], p)) % p;
    return mod(std::move(r), m, p);
}

inline Poly pow_mod_poly(Poly base, u64 e, const Poly& m, u64 p) {
    Poly r = mod(Poly{1}, m, p);
    base = mod(std::move(base), m, p);
    while (e > 0) {
        if (e & 1U) r = mul_mod_poly(r, base, m, p);
        base = mul_mod_poly(base, base, m, p);
        e >>= 1U;
    }
    return r;
}

inline Poly gcd(Poly a, Poly b, u64 p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

inline Poly sub(Poly a, const Poly& b, u64 p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i] % p) % p;
    trim(a);
    return a;
}

/// Rabin's test, specialised to n <= 3 where the only proper divisor is 1.
inline bool is_irreducible(const Poly& f, u64 p) {
    const std::size_t n = f.size() - 1;
    if (n == 0) return false;
    if (n == 1) return true;
    const Poly t{0, 1};
    Poly frob = pow_mod_poly(t, p, f, p);  // t^p mod f
    if (gcd(f, sub(frob, t, p), p).size() != 1) return false;
    Poly acc = frob;
    for (std::size_t d = 1; d < n; ++d) acc = pow_mod_poly(acc, p, f, p);
    return sub(acc, mod(t, f, p), p).empty();
}

}  // namespace poly

class FieldCtx {
public:
    /// Builds F_{p^n}. Without a modulus, monic candidates are drawn in the
    /// order of an mt19937_64 stream seeded by `seed` until one is irreducible.
    static FieldCtx build(u64 p, unsigned n, std::optional<std::vector<u64>> modulus = std::nullopt,
                          u64 seed = 0, u64 table_budget = kDefaultTableBudget) {
        if (n < 1 || n > kMaxDegree) throw FieldError("degree must be 1, 2 or 3");
        if (p == 2) throw FieldError("characteristic 2 is not supported");
        if (!is_prime(p)) throw FieldError("p = " + std::to_string(p) + " is not prime");
        if (ipow(p, n) > table_budget)
            throw FieldError("p^n = " + std::to_string(ipow(p, n)) + " exceeds table budget " +
                             std::to_string(table_budget));

        FieldCtx f;
        f.p_ = p;
        f.n_ = n;
        f.q_ = ipow(p, n);
        if (modulus) {
            poly::Poly m = *modulus;
            for (auto& c : m) c %= p;
            if (m.size() == n) m.push_back(1);  // leading 1 may be left implicit
            if (m.size() != n + 1 || m.back() != 1)
                throw FieldError("modulus must be monic of degree " + std::to_string(n));
            if (!poly::is_irreducible(m, p)) throw FieldError("modulus is reducible over F_p");
            f.modulus_ = std::move(m);
        } else if (n == 1) {
            f.modulus_ = {0, 1};
        } else {
            std::mt19937_64 rng(seed);
            std::uniform_int_distribution<u64> coef(0, p - 1);
            for (;;) {
                poly::Poly m(n + 1, 1);
                for (unsigned i = 0; i < n; ++i) m[i] = coef(rng);
                if (poly::is_irreducible(m, p)) {
                    f.modulus_ = std::move(m);
                    break;
                }
            }
        }
        f.find_generator_and_dlog();
        return f;
    }

    FieldCtx(FieldCtx&&) noexcept = default;
    FieldCtx& operator=(FieldCtx&&) noexcept = default;
    FieldCtx(const FieldCtx&) = delete;
    FieldCtx& operator=(const FieldCtx&) = delete;

    u64 p() const { return p_; }
    unsigned n() const { return n_; }
    u64 q() const { return q_; }
    const std::vector<u64>& modulus() const { return modulus_; }
    FqElem generator() const { return gen_; }

    FqElem zero() const { return {}; }
    FqElem one() const { return constant(1); }
    FqElem constant(i64 c) const {
        FqElem e;
        e.c[0] = static_cast<u32>(mod_floor(c, static_cast<i64>(p_)));
        return e;
    }
    /// The class of t (equals the constant -m_0 when n = 1).
    FqElem t() const {
        if (n_ == 1) return constant(-static_cast<i64>(modulus_[0]));
        FqElem e;
        e.c[1] = 1;
        return e;
    }
    FqElem from_coeffs(std::span<const i64> coeffs) const {
        if (coeffs.size() != n_) throw FieldError("coefficient vector has wrong length");
        FqElem e;
        for (unsigned i = 0; i < n_; ++i) e.c[i] = static_cast<u32>(mod_floor(coeffs[i], static_cast<i64>(p_)));
        return e;
    }

    bool is_zero(const FqElem& a) const { return a == FqElem{}; }

    FqElem add(const FqElem& a, const FqElem& b) const {
        FqElem r;
        for (unsigned i = 0; i < n_; ++i) r.c[i] = static_cast<u32>((u64{a.c[i]} + b.c[i]) % p_);
        return r;
    }
    FqElem sub(const FqElem& a, const FqElem& b) const {
        FqElem r;
        for (unsigned i = 0; i < n_; ++i) r.c[i] = static_cast<u32>((u64{a.c[i]} + p_ - b.c[i]) % p_);
        return r;
    }
    FqElem neg(const FqElem& a) const { return sub(zero(), a); }
    FqElem scale(const FqElem& a, i64 c) const {
        const u64 cc = static_cast<u64>(mod_floor(c, static_cast<i64>(p_)));
        FqElem r;
        for (unsigned i = 0; i < n_; ++i) r.c[i] = static_cast<u32>(mul_mod(a.c[i], cc, p_));
        return r;
    }

    /// Schoolbook product reduced by the monic modulus; independent of the tables.
    FqElem mul(const FqElem& a, const FqElem& b) const {
        std::array<u64, 2 * kMaxDegree - 1> prod{};
        for (unsigned i = 0; i < n_; ++i)
            for (unsigned j = 0; j < n_; ++j) prod[i + j] = (prod[i + j] + u64{a.c[i]} * b.c[j]) % p_;
        for (unsigned k = 2 * n_ - 2; k >= n_; --k) {
            const u64 coef = prod[k];
            prod[k] = 0;
            if (coef == 0) continue;
            // t^n = -(m_0 + ... + m_{n-1} t^{n-1})
            for (unsigned i = 0; i < n_; ++i)
                prod[k - n_ + i] = (prod[k - n_ + i] + (p_ - modulus_[i]) * coef) % p_;
        }
        FqElem r;
        for (unsigned i = 0; i < n_; ++i) r.c[i] = static_cast<u32>(prod[i]);
        return r;
    }

    FqElem pow(FqElem base, u64 e) const {
        FqElem r = one();
        while (e > 0) {
            if (e & 1U) r = mul(r, base);
            base = mul(base, base);
            e >>= 1U;
        }
        return r;
    }

    FqElem inv(const FqElem& a) const {
        if (is_zero(a)) throw FieldError("division by zero");
        return elem(inv_idx(index(a)));
    }
    FqElem div(const FqElem& a, const FqElem& b) const { return mul(a, inv(b)); }

    FqElem arith(const FqElem& a, const FqElem& b, ArithOp op) const {
        switch (op) {
            case ArithOp::add: return add(a, b);
            case ArithOp::sub: return sub(a, b);
            case ArithOp::mul: return mul(a, b);
            case ArithOp::inv: return inv(b);
            case ArithOp::div: return div(a, b);
        }
        throw FieldError("unknown arithmetic op");
    }

    // Packed index c_0 + c_1 p + c_2 p^2 in [0, q).
    u32 index(const FqElem& a) const {
        u64 idx = 0;
        for (unsigned i = n_; i-- > 0;) idx = idx * p_ + a.c[i];
        return static_cast<u32>(idx);
    }
    FqElem elem(u32 idx) const {
        FqElem e;
        u64 v = idx;
        for (unsigned i = 0; i < n_; ++i) {
            e.c[i] = static_cast<u32>(v % p_);
            v /= p_;
        }
        return e;
    }

    static constexpr u32 kNoLog = ~u32{0};

    /// Exponent of a to base g; kNoLog for zero.
    u32 dlog(const FqElem& a) const { return dlog_[index(a)]; }
    u32 dlog_idx(u32 idx) const { return dlog_[idx]; }
    /// g^k as a packed index.
    u32 exp_idx(u64 k) const { return exp_[k % (q_ - 1)]; }
    FqElem exp(u64 k) const { return elem(exp_idx(k)); }

    u32 mul_idx(u32 a, u32 b) const {
        if (a == 0 || b == 0) return 0;
        u64 s = u64{dlog_[a]} + dlog_[b];
        if (s >= q_ - 1) s -= q_ - 1;
        return exp_[s];
    }
    u32 inv_idx(u32 a) const {
        if (a == 0) throw FieldError("division by zero");
        const u32 l = dlog_[a];
        return exp_[l == 0 ? 0 : q_ - 1 - l];
    }
    /// a / b on packed indices, b nonzero.
    u32 div_idx(u32 a, u32 b) const {
        if (a == 0) return 0;
        const u64 s = (u64{dlog_[a]} + (q_ - 1) - dlog_[b]) % (q_ - 1);
        return exp_[s];
    }

    /// True iff F_p(a) is the whole field; for n in {2, 3} that means a is
    /// not a constant.
    bool is_generating(const FqElem& a) const {
        if (n_ == 1) return true;
        for (unsigned i = 1; i < n_; ++i)
            if (a.c[i] != 0) return true;
        return false;
    }

    bool in_prime_field(const FqElem& a) const { return n_ == 1 || !is_generating(a); }

    std::string modulus_string() const {
        std::string s;
        for (unsigned i = n_ + 1; i-- > 0;) {
            if (modulus_[i] == 0) continue;
            if (!s.empty()) s += " + ";
            if (i == 0 || modulus_[i] != 1) s += std::to_string(modulus_[i]);
            if (i >= 1) s += "t";
            if (i >= 2) s += "^" + std::to_string(i);
        }
        return s;
    }

private:
    FieldCtx() = default;

    void find_generator_and_dlog() {
        const u64 order = q_ - 1;
        const auto factors = prime_factors(order);
        for (u64 idx = 1; idx < q_; ++idx) {
            const FqElem cand = elem(static_cast<u32>(idx));
            bool ok = pow(cand, order) == one();
            for (u64 l : factors) {
                if (!ok) break;
                ok = !(pow(cand, order / l) == one());
            }
            if (ok) {
                gen_ = cand;
                break;
            }
        }
        dlog_.assign(q_, kNoLog);
        exp_.assign(order, 0);
        FqElem x = one();
        for (u64 k = 0; k < order; ++k) {
            const u32 xi = index(x);
            exp_[k] = xi;
            dlog_[xi] = static_cast<u32>(k);
            x = mul(x, gen_);
        }
    }

    u64 p_ = 0;
    unsigned n_ = 0;
    u64 q_ = 0;
    std::vector<u64> modulus_;
    FqElem gen_;
    std::vector<u32> dlog_;
    std::vector<u32> exp_;
};

}  // namespace boxsum
