#pragma once

// Small integer and floating-point helpers shared by every module.

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace boxsum {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

/// Non-negative residue of a mod m (m > 0).
constexpr i64 mod_floor(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

constexpr u64 mul_mod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

constexpr u64 pow_mod(u64 base, u64 exp, u64 m) {
    u64 result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1U) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1U;
    }
    return result;
}

/// Inverse of a modulo prime p; a must be nonzero mod p.
constexpr u64 inv_mod(u64 a, u64 p) { return pow_mod(a, p - 2, p); }

constexpr bool is_prime(u64 n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (u64 d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

/// Distinct prime factors by trial division (desk-scale inputs only).
inline std::vector<u64> prime_factors(u64 n) {
    std::vector<u64> out;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d != 0) continue;
        out.push_back(d);
        while (n % d == 0) n /= d;
    }
    if (n > 1) out.push_back(n);
    return out;
}

constexpr u64 ipow(u64 base, unsigned exp) {
    u64 r = 1;
    while (exp-- > 0) r *= base;
    return r;
}

/// Exact rational with 64-bit parts; comparisons go through 128-bit products.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(i64 num, i64 den = 1) : num_(num), den_(den) {
        if (den_ == 0) throw std::domain_error("Rational: zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        const i64 g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    constexpr i64 num() const { return num_; }
    constexpr i64 den() const { return den_; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend constexpr bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend constexpr bool operator<(const Rational& a, const Rational& b) {
        return static_cast<i128>(a.num_) * b.den_ < static_cast<i128>(b.num_) * a.den_;
    }
    friend constexpr bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend constexpr bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend constexpr bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    friend Rational operator*(const Rational& a, const Rational& b) {
        const i64 g1 = std::gcd(a.num_ < 0 ? -a.num_ : a.num_, b.den_);
        const i64 g2 = std::gcd(b.num_ < 0 ? -b.num_ : b.num_, a.den_);
        const i64 n1 = g1 ? a.num_ / g1 : a.num_, d2 = g1 ? b.den_ / g1 : b.den_;
        const i64 n2 = g2 ? b.num_ / g2 : b.num_, d1 = g2 ? a.den_ / g2 : a.den_;
        return {n1 * n2, d1 * d2};
    }

    std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }
    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    i64 num_ = 0;
    i64 den_ = 1;
};

/// Neumaier-compensated accumulator for complex sums.
class CompensatedSum {
public:
    void add(std::complex<double> v) {
        add_part(re_, cre_, v.real());
        add_part(im_, cim_, v.imag());
    }
    std::complex<double> value() const { return {re_ + cre_, im_ + cim_}; }

private:
    static void add_part(double& sum, double& comp, double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double re_ = 0, cre_ = 0, im_ = 0, cim_ = 0;
};

}  // namespace boxsum
