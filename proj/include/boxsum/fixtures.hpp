#pragma once

// Measured stand-ins for the unspecified implied constants. A pilot run
// records the maximum of each monitored ratio over a seeded grid; regression
// runs on a different seed must stay below the recorded value times a fixed
// headroom factor.

#include <cmath>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <random>
#include <string>

#include "boxsum/energy.hpp"
#include "boxsum/gamma.hpp"
#include "boxsum/survey.hpp"

namespace boxsum {

inline constexpr int kFixtureVersion = 1;
inline constexpr double kFixtureHeadroom = 1.5;
inline constexpr u64 kPilotSeed = 20240601;
inline constexpr u64 kRegressionSeed = 7771;

struct Measurements {
    double K_E = 0;    // E(B) / (|B|^2 log^3 p)
    double K_2 = 0;    // sum_{z in F_p^*} f_i(z)^2 / (H^2 log p)
    double K_c = 0;    // f_0(z) / prod max(1, 1/lambda_i)
    double K_j = 0;    // |Z_j| / prod_i max(1, H_i 2^j / H_{n-1})^2
    double K_T = 0;    // lambda_1^* lambda_{2n}
    double c_est = 0;  // max |sum_{t in I} chi(g + t)| / (sqrt p log p)

    static constexpr const char* kNames[] = {"K_E", "K_2", "K_c", "K_j", "K_T", "c_est"};
    double get(const std::string& k) const {
        if (k == "K_E") return K_E;
        if (k == "K_2") return K_2;
        if (k == "K_c") return K_c;
        if (k == "K_j") return K_j;
        if (k == "K_T") return K_T;
        return c_est;
    }
    void set(const std::string& k, double v) {
        if (k == "K_E") K_E = v;
        else if (k == "K_2") K_2 = v;
        else if (k == "K_c") K_c = v;
        else if (k == "K_j") K_j = v;
        else if (k == "K_T") K_T = v;
        else c_est = v;
    }
};

struct PilotScale {
    std::vector<u64> primes{31, 61, 101};
    u64 boxes_per_prime = 4;   // energy and minima boxes
    u64 z_per_box = 25;        // sampled z for K_c and K_T
    u64 class_box_limit = 6000; // |Z \ F_p| cap for the exhaustive K_j census
    std::vector<u64> interval_primes{31, 61};
    u64 chars_per_field = 4;
    u64 generators_per_field = 4;
};

/// Edges drawn from [1, floor below sqrt(p/2)], sorted.
inline Box random_small_box(const BasisMatrix& basis, std::mt19937_64& rng) {
    const u64 p = basis.p();
    i64 hmax = 1;
    while (below_half_root(hmax + 1, p)) ++hmax;
    std::uniform_int_distribution<i64> edge(1, hmax), off(0, static_cast<i64>(p) - 1);
    std::vector<i64> N(basis.n()), H(basis.n());
    for (unsigned i = 0; i < basis.n(); ++i) {
        H[i] = edge(rng);
        N[i] = off(rng);
    }
    return normalize(Box::make(basis, std::move(N), std::move(H)));
}

inline double log3(u64 p) {
    const double l = std::log(static_cast<double>(p));
    return l * l * l;
}

inline Measurements measure_constants(unsigned n, u64 seed, const PilotScale& scale = {}) {
    Measurements m;
    std::mt19937_64 rng(seed * 1000003ULL + n);

    for (u64 p : scale.primes) {
        const auto ctx = FieldCtx::build(p, n, std::nullopt, seed);
        for (i64 h = 1; below_half_root(h, p); ++h)
            m.K_2 = std::max(m.K_2, static_cast<double>(coordinate_square_sum(h, p)) /
                                        (static_cast<double>(h * h) * std::log(static_cast<double>(p))));

        for (u64 k = 0; k < scale.boxes_per_prime; ++k) {
            const BasisMatrix basis = BasisMatrix::from_seed(p, n, rng() | 1);
            const Box b = random_small_box(basis, rng);
            const RatioProfile prof = s_decomposition(ctx, b);
            const double B2 = static_cast<double>(b.size()) * static_cast<double>(b.size());
            m.K_E = std::max(m.K_E, static_cast<double>(prof.E) / (B2 * log3(p)));

            std::vector<u32> outside;  // Z \ F_p
            for (u32 z : prof.Z)
                if (z >= p) outside.push_back(z);
            if (outside.empty()) continue;

            std::vector<u32> sample = outside;
            std::shuffle(sample.begin(), sample.end(), rng);
            if (sample.size() > scale.z_per_box) sample.resize(scale.z_per_box);
            for (u32 z : sample) {
                const ZClass c = classify_z(ctx, b, ctx.elem(z));
                m.K_c = std::max(m.K_c, static_cast<double>(prof.f0[z]) / minima_count_shape(c.minima.lambdas));
                m.K_T = std::max(m.K_T, c.lambda1_star.to_double() * c.minima.lambdas.back().to_double());
            }

            if (outside.size() <= scale.class_box_limit) {
                std::map<int, u64> sizes;
                for (u32 z : outside) ++sizes[classify_z(ctx, b, ctx.elem(z)).j];
                const double hn1 = static_cast<double>(b.H[n - 2]);
                for (const auto& [j, count] : sizes) {
                    double shape = 1.0;
                    for (i64 h : b.H) {
                        const double f = std::max(1.0, static_cast<double>(h) * std::ldexp(1.0, j) / hn1);
                        shape *= f * f;
                    }
                    m.K_j = std::max(m.K_j, static_cast<double>(count) / shape);
                }
            }
        }
    }

    for (u64 p : scale.interval_primes) {
        const auto ctx = FieldCtx::build(p, n, std::nullopt, seed);
        std::uniform_int_distribution<u64> kd(1, ctx.q() - 2);
        std::uniform_int_distribution<u32> gd(static_cast<u32>(p), static_cast<u32>(ctx.q() - 1));
        for (u64 c = 0; c < scale.chars_per_field; ++c) {
            const Character chi(ctx, kd(rng));
            for (u64 g = 0; g < scale.generators_per_field; ++g) {
                const FqElem a = ctx.elem(gd(rng));  // outside F_p, generating since n is prime
                m.c_est = std::max(m.c_est, max_subinterval_sum(chi, a) / sqrt_p_log_p(p));
            }
        }
    }
    return m;
}

struct FixtureFile {
    int version = kFixtureVersion;
    u64 pilot_seed = kPilotSeed;
    double headroom = kFixtureHeadroom;
    std::map<unsigned, Measurements> measured;  // by n
    std::map<unsigned, Measurements> limits;    // measured * headroom

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["version"] = version;
        j["pilot_seed"] = pilot_seed;
        j["headroom"] = headroom;
        for (const auto& [n, m] : measured) {
            nlohmann::ordered_json e;
            for (const char* k : Measurements::kNames) {
                e["measured"][k] = m.get(k);
                e["limit"][k] = limits.at(n).get(k);
            }
            j["n" + std::to_string(n)] = e;
        }
        return j;
    }

    static FixtureFile from_json(const nlohmann::json& j) {
        FixtureFile f;
        f.version = j.at("version").get<int>();
        if (f.version != kFixtureVersion)
            throw std::runtime_error("fixture file version " + std::to_string(f.version) + " is not supported");
        f.pilot_seed = j.at("pilot_seed").get<u64>();
        f.headroom = j.at("headroom").get<double>();
        for (unsigned n : {2U, 3U}) {
            const std::string key = "n" + std::to_string(n);
            if (!j.contains(key)) continue;
            Measurements m, l;
            for (const char* k : Measurements::kNames) {
                m.set(k, j.at(key).at("measured").at(k).get<double>());
                l.set(k, j.at(key).at("limit").at(k).get<double>());
            }
            f.measured[n] = m;
            f.limits[n] = l;
        }
        return f;
    }
};

inline FixtureFile run_pilot(u64 seed = kPilotSeed, const PilotScale& scale = {}) {
    FixtureFile f;
    f.pilot_seed = seed;
    for (unsigned n : {2U, 3U}) {
        const Measurements m = measure_constants(n, seed, scale);
        Measurements l;
        for (const char* k : Measurements::kNames) l.set(k, m.get(k) * f.headroom);
        f.measured[n] = m;
        f.limits[n] = l;
    }
    return f;
}

inline FixtureFile load_fixtures(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fixture file '" + path + "'");
    return FixtureFile::from_json(nlohmann::json::parse(in));
}

}  // namespace boxsum
