#pragma once

// Full-rank lattices L = (rows / denom) Z^d with exact successive minima for a
// weighted sup-box or weighted l1 gauge.
//
// The basis is first brought to upper-triangular Hermite form; lattice vectors
// are then enumerated depth-first coordinate by coordinate, each coordinate
// bounded by what the remaining gauge budget allows. Gauge values are exact
// rationals, so every minimum is decided by integer comparisons.

#include <algorithm>
#include <cmath>
#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "boxsum/numeric.hpp"

namespace boxsum {


inline constexpr u64 kDefaultNodeBudget = 10'000'000;

class EnumerationBudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using IntVec = std::vector<i64>;

struct IntLattice {
    unsigned dim = 0;
    std::vector<IntVec> rows;  // basis vectors, integer representatives
    i64 denom = 1;

    BigInt det_rows() const;
    /// |det rows| / denom^dim
    BigRational covolume() const {
        BigInt d = det_rows();
        if (d < 0) d = -d;
        BigInt den = 1;
        for (unsigned i = 0; i < dim; ++i) den *= denom;
        return BigRational(d, den);
    }
};

enum class GaugeKind { sup_box, polar_l1 };

/// Coordinate k (0-based, k < 2n) carries weight H_{k mod n}.
struct GaugeBody {
    GaugeKind kind = GaugeKind::sup_box;
    std::vector<i64> weights;  // H_1..H_n

    unsigned dim() const { return static_cast<unsigned>(2 * weights.size()); }
    i64 weight(unsigned k) const { return weights[k % weights.size()]; }

    /// Gauge of the lattice vector v / denom.
    Rational gauge(std::span<const i64> v, i64 denom) const {
        if (kind == GaugeKind::sup_box) {
            Rational best(0);
            for (unsigned k = 0; k < v.size(); ++k) best = std::max(best, Rational(v[k] < 0 ? -v[k] : v[k], weight(k) * denom));
            return best;
        }
        i64 s = 0;
        for (unsigned k = 0; k < v.size(); ++k) s += (v[k] < 0 ? -v[k] : v[k]) * weight(k);
        return {s, denom};
    }

    /// Lebesgue volume of the unit body.
    BigRational volume() const {
        const unsigned d = dim();
        if (kind == GaugeKind::sup_box) {
            BigInt v = 1;
            for (unsigned k = 0; k < d; ++k) v *= 2 * weight(k);
            return BigRational(v);
        }
        BigInt num = BigInt(1) << d, den = 1;
        for (unsigned k = 2; k <= d; ++k) den *= k;
        for (unsigned k = 0; k < d; ++k) den *= weight(k);
        return BigRational(num, den);
    }
};

namespace detail {

inline std::vector<std::vector<BigRational>> to_rational(const std::vector<IntVec>& rows) {
    std::vector<std::vector<BigRational>> m(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (i64 v : rows[r]) m[r].emplace_back(v);
    return m;
}

/// Rank over Q by Gaussian elimination.
inline unsigned rank(const std::vector<IntVec>& rows) {
    if (rows.empty()) return 0;
    auto m = to_rational(rows);
    const std::size_t cols = m[0].size();
    unsigned rk = 0;
    for (std::size_t c = 0; c < cols && rk < m.size(); ++c) {
        std::size_t piv = rk;
        while (piv < m.size() && m[piv][c] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[rk]);
        for (std::size_t r = rk + 1; r < m.size(); ++r) {
            if (m[r][c] == 0) continue;
            const BigRational f = m[r][c] / m[rk][c];
            for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rk][k];
        }
        ++rk;
    }
    return rk;
}

inline BigInt determinant(const std::vector<IntVec>& rows) {
    auto m = to_rational(rows);
    const std::size_t d = m.size();
    BigRational det = 1;
    for (std::size_t c = 0; c < d; ++c) {
        std::size_t piv = c;
        while (piv < d && m[piv][c] == 0) ++piv;
        if (piv == d) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < d; ++r) {
            if (m[r][c] == 0) continue;
            const BigRational f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < d; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return boost::multiprecision::numerator(det);
}

/// Integer basis of { x : <w, x> = 0 for all w in rows }.
inline std::vector<IntVec> integer_kernel(const std::vector<IntVec>& rows, unsigned dim) {
    std::vector<IntVec> out;
    if (rows.empty()) {
        for (unsigned k = 0; k < dim; ++k) {
            IntVec e(dim, 0);
            e[k] = 1;
            out.push_back(std::move(e));
        }
        return out;
    }
    auto m = to_rational(rows);
    std::vector<int> pivot_of_col(dim, -1);
    std::size_t rk = 0;
    for (unsigned c = 0; c < dim && rk < m.size(); ++c) {
        std::size_t piv = rk;
        while (piv < m.size() && m[piv][c] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[rk]);
        const BigRational inv = 1 / m[rk][c];
        for (auto& x : m[rk]) x *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == rk || m[r][c] == 0) continue;
            const BigRational f = m[r][c];
            for (unsigned k = 0; k < dim; ++k) m[r][k] -= f * m[rk][k];
        }
        pivot_of_col[c] = static_cast<int>(rk);
        ++rk;
    }
    for (unsigned free = 0; free < dim; ++free) {
        if (pivot_of_col[free] >= 0) continue;
        std::vector<BigRational> x(dim, 0);
        x[free] = 1;
        for (unsigned c = 0; c < dim; ++c)
            if (pivot_of_col[c] >= 0) x[c] = -m[static_cast<std::size_t>(pivot_of_col[c])][free];
        BigInt l = 1;
        for (const auto& v : x) {
            const BigInt den = boost::multiprecision::denominator(v);
            l = l / boost::multiprecision::gcd(l, den) * den;
        }
        IntVec iv(dim);
        BigInt g = 0;
        std::vector<BigInt> ints(dim);
        for (unsigned c = 0; c < dim; ++c) {
            ints[c] = boost::multiprecision::numerator(x[c]) * (l / boost::multiprecision::denominator(x[c]));
            g = boost::multiprecision::gcd(g, ints[c]);
        }
        for (unsigned c = 0; c < dim; ++c) iv[c] = static_cast<i64>(ints[c] / g);
        out.push_back(std::move(iv));
    }
    return out;
}

}  // namespace detail

inline BigInt IntLattice::det_rows() const { return detail::determinant(rows); }

/// Upper-triangular Hermite form of the row basis: row j vanishes on columns
/// < j and has a positive pivot in column j; entries above a pivot are reduced
/// into [0, pivot).
inline std::vector<IntVec> hermite_form(const std::vector<IntVec>& rows) {
    const std::size_t d = rows.size();
    std::vector<std::vector<BigInt>> m(d);
    for (std::size_t r = 0; r < d; ++r)
        for (i64 v : rows[r]) m[r].emplace_back(v);
    auto axpy = [&](std::size_t dst, const BigInt& f, std::size_t src) {
        for (std::size_t k = 0; k < d; ++k) m[dst][k] -= f * m[src][k];
    };
    for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t r = c + 1; r < d; ++r) {
            while (m[r][c] != 0) {
                const BigInt q = m[c][c] / m[r][c];
                axpy(c, q, r);
                std::swap(m[c], m[r]);
            }
        }
        if (m[c][c] == 0) throw std::invalid_argument("hermite_form: basis is singular");
        if (m[c][c] < 0)
            for (auto& x : m[c]) x = -x;
        for (std::size_t r = 0; r < c; ++r) {
            BigInt q = m[r][c] / m[c][c];
            if (m[r][c] < 0 && q * m[c][c] != m[r][c]) q -= 1;
            if (q != 0) axpy(r, q, c);
        }
    }
    std::vector<IntVec> out(d, IntVec(d));
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t k = 0; k < d; ++k) out[r][k] = static_cast<i64>(m[r][k]);
    return out;
}

namespace detail {

/// LLL reduction (delta = 0.99) of integer rows in the metric where
/// coordinate k is multiplied by scale[k]. Used only to seed upper bounds.
inline std::vector<IntVec> lll_reduce(std::vector<IntVec> b, const std::vector<double>& scale) {
    const std::size_t d = b.size();
    if (d == 0) return b;
    const std::size_t m = b[0].size();
    auto dot = [&](const IntVec& x, const std::vector<double>& y) {
        double s = 0;
        for (std::size_t k = 0; k < m; ++k) s += static_cast<double>(x[k]) * scale[k] * y[k];
        return s;
    };
    std::vector<std::vector<double>> gs(d, std::vector<double>(m));
    std::vector<std::vector<double>> mu(d, std::vector<double>(d, 0.0));
    std::vector<double> norm2(d);
    auto recompute = [&] {
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t k = 0; k < m; ++k) gs[i][k] = static_cast<double>(b[i][k]) * scale[k];
            for (std::size_t j = 0; j < i; ++j) {
                mu[i][j] = norm2[j] > 0 ? dot(b[i], gs[j]) / norm2[j] : 0.0;
                for (std::size_t k = 0; k < m; ++k) gs[i][k] -= mu[i][j] * gs[j][k];
            }
            norm2[i] = 0;
            for (double x : gs[i]) norm2[i] += x * x;
        }
    };
    recompute();
    std::size_t k = 1, guard = 0;
    while (k < d && ++guard < 100000) {
        for (std::size_t j = k; j-- > 0;) {
            const i64 r = std::llround(mu[k][j]);
            if (r == 0) continue;
            for (std::size_t c = 0; c < m; ++c) b[k][c] -= r * b[j][c];
            recompute();
        }
        if (norm2[k] >= (0.99 - mu[k][k - 1] * mu[k][k - 1]) * norm2[k - 1]) {
            ++k;
        } else {
            std::swap(b[k], b[k - 1]);
            recompute();
            k = std::max<std::size_t>(k - 1, 1);
        }
    }
    return b;
}

/// Depth-first enumeration of v = sum_j c_j T_j over a triangular basis T,
/// pruned by the gauge radius returned by `radius()` (re-read at every node,
/// so a leaf callback may shrink it). Coefficients are tried outward from the
/// centre of their admissible range.
template <class RadiusFn, class LeafFn>
class TriangularEnumerator {
public:
    TriangularEnumerator(const std::vector<IntVec>& tri, const GaugeBody& body, i64 denom, RadiusFn radius,
                         LeafFn leaf, u64 budget)
        : t_(tri), body_(body), denom_(denom), d_(static_cast<unsigned>(tri.size())), radius_(radius), leaf_(leaf),
          budget_(budget) {}

    u64 run() {
        IntVec acc(d_, 0), v(d_, 0);
        recurse(0, acc, v, 0);
        return nodes_;
    }

private:
    // Largest |v_k| allowed at coordinate k given l1 mass already spent.
    i64 coordinate_bound(unsigned k, i64 spent) const {
        const Rational r = radius_();
        if (body_.kind == GaugeKind::sup_box)
            return static_cast<i64>(static_cast<i128>(r.num()) * body_.weight(k) * denom_ / r.den());
        const i64 total = static_cast<i64>(static_cast<i128>(r.num()) * denom_ / r.den());
        if (total < spent) return -1;
        return (total - spent) / body_.weight(k);
    }

    static i64 floor_div(i64 a, i64 b) {
        i64 q = a / b;
        if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
        return q;
    }

    void recurse(unsigned k, const IntVec& acc, IntVec& v, i64 spent) {
        if (k == d_) {
            leaf_(std::span<const i64>(v));
            return;
        }
        const i64 piv = t_[k][k];
        const i64 s = acc[k];
        // centre coefficient: c with s + c * piv closest to 0
        const i64 centre = floor_div(-s + piv / 2, piv);
        IntVec next(d_);
        auto visit = [&](i64 c) -> bool {
            const i64 vk = s + c * piv;
            const i64 bound = coordinate_bound(k, spent);
            if ((vk < 0 ? -vk : vk) > bound) return false;
            if (++nodes_ > budget_) throw EnumerationBudgetError("enumeration node budget exceeded");
            for (unsigned j = k; j < d_; ++j) next[j] = acc[j] + c * t_[k][j];
            v[k] = vk;
            const i64 w = body_.kind == GaugeKind::polar_l1 ? (vk < 0 ? -vk : vk) * body_.weight(k) : 0;
            IntVec here = next;
            recurse(k + 1, here, v, spent + w);
            return true;
        };
        // two monotone sides: c = centre, centre + 1, ... and centre - 1, ...
        i64 up = centre, down = centre - 1;
        bool up_alive = true, down_alive = true;
        while (up_alive || down_alive) {
            const i64 vu = s + up * piv, vd = s + down * piv;
            const bool pick_up = up_alive && (!down_alive || (vu < 0 ? -vu : vu) <= (vd < 0 ? -vd : vd));
            if (pick_up) {
                up_alive = visit(up);
                ++up;
            } else {
                down_alive = visit(down);
                --down;
            }
        }
    }

    const std::vector<IntVec>& t_;
    const GaugeBody& body_;
    i64 denom_;
    unsigned d_;
    RadiusFn radius_;
    LeafFn leaf_;
    u64 budget_;
    u64 nodes_ = 0;
};

template <class RadiusFn, class LeafFn>
u64 enumerate_triangular(const std::vector<IntVec>& tri, const GaugeBody& body, i64 denom, RadiusFn radius,
                         LeafFn leaf, u64 budget) {
    TriangularEnumerator<RadiusFn, LeafFn> e(tri, body, denom, radius, leaf, budget);
    return e.run();
}

inline bool positive_leading(std::span<const i64> v) {
    for (i64 x : v)
        if (x != 0) return x > 0;
    return false;
}

inline bool in_span(std::span<const i64> v, const std::vector<IntVec>& kernel) {
    for (const auto& n : kernel) {
        i128 s = 0;
        for (std::size_t k = 0; k < v.size(); ++k) s += static_cast<i128>(n[k]) * v[k];
        if (s != 0) return false;
    }
    return true;
}

}  // namespace detail

/// Calls fn(v) for every nonzero lattice vector (integer representative) with
/// gauge <= radius; both v and -v are visited.
template <class Fn>
u64 for_each_vector(const IntLattice& L, const GaugeBody& body, Rational radius, Fn&& fn,
                    u64 budget = kDefaultNodeBudget) {
    const auto tri = hermite_form(L.rows);
    return detail::enumerate_triangular(
        tri, body, L.denom, [&] { return radius; },
        [&](std::span<const i64> v) {
            if (std::any_of(v.begin(), v.end(), [](i64 x) { return x != 0; })) fn(v);
        },
        budget);
}

/// |{ v in L : gauge(v) <= radius }|, zero vector included.
inline u64 count_points(const IntLattice& L, const GaugeBody& body, Rational radius, u64 budget = kDefaultNodeBudget) {
    u64 c = 1;
    for_each_vector(L, body, radius, [&](std::span<const i64>) { ++c; }, budget);
    return c;
}

struct MinimaResult {
    std::vector<Rational> lambdas;
    std::vector<IntVec> witnesses;  // integer representatives; lattice vector = w / denom
    u64 nodes = 0;

    /// prod lambda_i * vol(body) / covol(L), exact.
    BigRational minkowski_ratio;
    bool minkowski_ok = false;  // 2^d / d! <= ratio <= 2^d
};

inline BigRational minkowski_lower(unsigned d) {
    BigInt f = 1;
    for (unsigned k = 2; k <= d; ++k) f *= k;
    return BigRational(BigInt(1) << d, f);
}
inline BigRational minkowski_upper(unsigned d) { return BigRational(BigInt(1) << d); }

/// First `count` successive minima (all of them by default). Each minimum is
/// the least gauge of a vector outside the span of the earlier witnesses;
/// among vectors attaining it, the witness is the lexicographically smallest
/// one with positive leading entry.
inline MinimaResult successive_minima(const IntLattice& L, const GaugeBody& body, u64 budget = kDefaultNodeBudget,
                                      unsigned count = 0) {
    if (body.dim() != L.dim) throw std::invalid_argument("gauge body and lattice dimensions differ");
    const unsigned d = L.dim;
    if (count == 0 || count > d) count = d;
    const auto tri = hermite_form(L.rows);

    // Upper-bound seeds: HNF rows, a reduced basis, and its pairwise sums and differences.
    std::vector<double> scale(d);
    for (unsigned k = 0; k < d; ++k)
        scale[k] = body.kind == GaugeKind::sup_box ? 1.0 / static_cast<double>(body.weight(k))
                                                   : static_cast<double>(body.weight(k));
    const auto reduced = detail::lll_reduce(tri, scale);
    std::vector<IntVec> seeds = tri;
    seeds.insert(seeds.end(), reduced.begin(), reduced.end());
    for (std::size_t a = 0; a < reduced.size(); ++a)
        for (std::size_t c = a + 1; c < reduced.size(); ++c) {
            IntVec plus(d), minus(d);
            for (unsigned k = 0; k < d; ++k) {
                plus[k] = reduced[a][k] + reduced[c][k];
                minus[k] = reduced[a][k] - reduced[c][k];
            }
            seeds.push_back(std::move(plus));
            seeds.push_back(std::move(minus));
        }

    MinimaResult out;
    for (unsigned i = 0; i < count; ++i) {
        const auto kernel = detail::integer_kernel(out.witnesses, d);
        Rational best;
        IntVec best_vec;
        auto consider = [&](std::span<const i64> v) {
            if (!detail::positive_leading(v) || detail::in_span(v, kernel)) return;
            const Rational g = body.gauge(v, L.denom);
            if (best_vec.empty() || g < best ||
                (g == best && std::lexicographical_compare(v.begin(), v.end(), best_vec.begin(), best_vec.end()))) {
                best = g;
                best_vec.assign(v.begin(), v.end());
            }
        };
        for (const auto& row : seeds) {
            IntVec r = row;
            if (!detail::positive_leading(r))
                for (auto& x : r) x = -x;
            consider(r);
        }
        if (best_vec.empty()) throw std::logic_error("successive_minima: basis lies in a proper subspace");
        try {
            out.nodes += detail::enumerate_triangular(tri, body, L.denom, [&] { return best; }, consider,
                                                      budget - std::min(budget, out.nodes));
        } catch (const EnumerationBudgetError&) {
            std::string msg = "enumeration budget exceeded at minimum " + std::to_string(i + 1) + "; found";
            for (const auto& l : out.lambdas) msg += " " + l.str();
            msg += "; current upper bound " + best.str();
            throw EnumerationBudgetError(msg);
        }
        out.lambdas.push_back(best);
        out.witnesses.push_back(std::move(best_vec));
    }

    if (count == d) {
        BigRational prod = 1;
        for (const auto& l : out.lambdas) prod *= BigRational(l.num(), l.den());
        out.minkowski_ratio = prod * body.volume() / L.covolume();
        out.minkowski_ok = minkowski_lower(d) <= out.minkowski_ratio && out.minkowski_ratio <= minkowski_upper(d);
    }
    return out;
}

/// L^* = { u : <u, v> in Z for all v in L }, basis = inverse transpose.
inline IntLattice polar_of(const IntLattice& L) {
    const unsigned d = L.dim;
    auto m = detail::to_rational(L.rows);
    std::vector<std::vector<BigRational>> inv(d, std::vector<BigRational>(d, 0));
    for (unsigned i = 0; i < d; ++i) inv[i][i] = 1;
    for (unsigned c = 0; c < d; ++c) {
        unsigned piv = c;
        while (piv < d && m[piv][c] == 0) ++piv;
        if (piv == d) throw std::invalid_argument("polar_of: singular lattice");
        std::swap(m[piv], m[c]);
        std::swap(inv[piv], inv[c]);
        const BigRational s = 1 / m[c][c];
        for (unsigned k = 0; k < d; ++k) {
            m[c][k] *= s;
            inv[c][k] *= s;
        }
        for (unsigned r = 0; r < d; ++r) {
            if (r == c || m[r][c] == 0) continue;
            const BigRational f = m[r][c];
            for (unsigned k = 0; k < d; ++k) {
                m[r][k] -= f * m[c][k];
                inv[r][k] -= f * inv[c][k];
            }
        }
    }
    // rows of (rows / denom)^{-T} = denom * column j of rows^{-1}
    std::vector<std::vector<BigRational>> dual(d, std::vector<BigRational>(d));
    BigInt l = 1;
    for (unsigned j = 0; j < d; ++j)
        for (unsigned k = 0; k < d; ++k) {
            dual[j][k] = inv[k][j] * L.denom;
            const BigInt den = boost::multiprecision::denominator(dual[j][k]);
            l = l / boost::multiprecision::gcd(l, den) * den;
        }
    BigInt g = l;
    std::vector<std::vector<BigInt>> ints(d, std::vector<BigInt>(d));
    for (unsigned j = 0; j < d; ++j)
        for (unsigned k = 0; k < d; ++k) {
            ints[j][k] = boost::multiprecision::numerator(dual[j][k]) * (l / boost::multiprecision::denominator(dual[j][k]));
            g = boost::multiprecision::gcd(g, ints[j][k]);
        }
    IntLattice out;
    out.dim = d;
    out.denom = static_cast<i64>(l / g);
    out.rows.assign(d, IntVec(d));
    for (unsigned j = 0; j < d; ++j)
        for (unsigned k = 0; k < d; ++k) out.rows[j][k] = static_cast<i64>(ints[j][k] / g);
    return out;
}

/// Same lattice (as a set) iff equal denominators and equal Hermite forms.
inline bool same_lattice(const IntLattice& a, const IntLattice& b) {
    return a.dim == b.dim && a.denom == b.denom && hermite_form(a.rows) == hermite_form(b.rows);
}

inline IntLattice standard_lattice(unsigned d) {
    IntLattice L;
    L.dim = d;
    L.rows.assign(d, IntVec(d, 0));
    for (unsigned i = 0; i < d; ++i) L.rows[i][i] = 1;
    return L;
}

}  // namespace boxsum
