#pragma once

// Grid surveys of box character sums: configuration, per-point routing by
// edge size, CSV/JSON reports, and a worker pool whose output order is fixed
// by grid index.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "boxsum/box.hpp"
#include "boxsum/burgess.hpp"
#include "boxsum/character.hpp"
#include "boxsum/energy.hpp"

namespace boxsum {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ReportFormat { csv, json };

struct ExperimentConfig {
    std::vector<u64> primes;
    unsigned n = 2;
    double epsilon = 0.3;
    u64 modulus_seed = 1;
    std::vector<u64> basis_seeds{0};
    std::vector<std::string> boxes;  // "N1:H1,..." literals
    u64 random_boxes = 0;            // extra admissible random boxes per (p, basis)
    std::vector<u64> char_indices;   // empty: one random nontrivial index per box
    std::string out;
    ReportFormat format = ReportFormat::csv;
    u64 seed = 1;
    unsigned workers = 1;
};

inline ExperimentConfig parse_config(const nlohmann::json& j) {
    static const std::vector<std::string> known{"primes", "n",     "epsilon", "modulus_seed", "basis_seeds",
                                                "boxes",  "random_boxes", "char_indices", "out", "format",
                                                "seed",   "workers"};
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("unknown config key '" + key + "'");
    ExperimentConfig c;
    try {
        if (j.contains("primes")) c.primes = j.at("primes").get<std::vector<u64>>();
        if (j.contains("n")) c.n = j.at("n").get<unsigned>();
        if (j.contains("epsilon")) c.epsilon = j.at("epsilon").get<double>();
        if (j.contains("modulus_seed")) c.modulus_seed = j.at("modulus_seed").get<u64>();
        if (j.contains("basis_seeds")) c.basis_seeds = j.at("basis_seeds").get<std::vector<u64>>();
        if (j.contains("boxes")) c.boxes = j.at("boxes").get<std::vector<std::string>>();
        if (j.contains("random_boxes")) c.random_boxes = j.at("random_boxes").get<u64>();
        if (j.contains("char_indices")) c.char_indices = j.at("char_indices").get<std::vector<u64>>();
        if (j.contains("out")) c.out = j.at("out").get<std::string>();
        if (j.contains("format")) {
            const auto f = j.at("format").get<std::string>();
            if (f == "csv")
                c.format = ReportFormat::csv;
            else if (f == "json")
                c.format = ReportFormat::json;
            else
                throw ConfigError("format must be csv or json, got '" + f + "'");
        }
        if (j.contains("seed")) c.seed = j.at("seed").get<u64>();
        if (j.contains("workers")) c.workers = j.at("workers").get<unsigned>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config field has wrong type: ") + e.what());
    }
    if (!(c.epsilon > 0.0 && c.epsilon < 0.5)) throw ConfigError("epsilon must lie in (0, 1/2)");
    if (c.n < 1 || c.n > 3) throw ConfigError("n must be 1, 2 or 3");
    if (c.workers == 0) throw ConfigError("workers must be positive");
    if (c.basis_seeds.empty()) throw ConfigError("basis_seeds must not be empty");
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return parse_config(j);
}

struct ReportRow {
    u64 p = 0;
    unsigned n = 0;
    double eps = 0;
    u64 char_index = 0;
    u64 basis_seed = 0;
    std::string box;
    std::vector<i64> H_sorted;
    cplx sum;
    double norm_sum = 0;
    u64 line_term = 0;
    std::string route;
    std::vector<std::pair<std::string, bool>> flags;

    bool passed() const {
        return std::all_of(flags.begin(), flags.end(), [](const auto& f) { return f.second; });
    }
};

enum class Route { direct, subdivided, tall };

inline const char* route_name(Route r) {
    switch (r) {
        case Route::direct: return "direct";
        case Route::subdivided: return "subdivided";
        case Route::tall: return "tall";
    }
    return "?";
}

/// direct: every edge below sqrt(p/2); subdivided: every edge at most
/// p^{1/2 + eps/2}; tall otherwise.
inline Route route_for(const Box& b, double eps) {
    const u64 p = b.p();
    if (std::all_of(b.H.begin(), b.H.end(), [&](i64 h) { return below_half_root(h, p); })) return Route::direct;
    const double limit = std::pow(static_cast<double>(p), 0.5 + eps / 2.0);
    const i64 hmax = *std::max_element(b.H.begin(), b.H.end());
    return static_cast<double>(hmax) <= limit ? Route::subdivided : Route::tall;
}

inline constexpr u64 kSurveyEnergyBudget = 100'000'000;

/// Evaluates one grid point. `b` is normalized first, so the last basis vector
/// carries the longest edge.
inline ReportRow evaluate_point(const FieldCtx& ctx, const Box& input, u64 char_index, u64 basis_seed, double eps) {
    const Box b = normalize(input);
    const Character chi(ctx, char_index);
    ReportRow row;
    row.p = b.p();
    row.n = b.n();
    row.eps = eps;
    row.char_index = chi.index();
    row.basis_seed = basis_seed;
    row.box = format_box_literal(input);
    row.H_sorted = b.H;
    row.sum = box_char_sum(chi, b);
    row.norm_sum = std::abs(row.sum) / static_cast<double>(b.size());
    if (b.n() >= 2 && chi.trivial_on_prime_field()) row.line_term = omega_line_intersection(b);
    const Route route = route_for(b, eps);
    row.route = route_name(route);

    row.flags.emplace_back("trivial", std::abs(row.sum) <= static_cast<double>(b.size()) + 1e-6);
    if (route == Route::direct) {
        const u64 b0 = difference_box(b).size();
        if (static_cast<u128>(b0) * b0 <= kSurveyEnergyBudget) row.flags.emplace_back("energy", s_decomposition(ctx, b).all_ok());
    } else if (route == Route::subdivided) {
        CompensatedSum pieces;
        u64 total = 0;
        bool small = true;
        for (const Box& piece : subdivide_box(b)) {
            total += piece.size();
            pieces.add(box_char_sum(chi, piece));
            for (i64 h : piece.H) small = small && below_half_root(h, b.p());
        }
        row.flags.emplace_back("partition",
                               small && total == b.size() && std::abs(pieces.value() - row.sum) < 1e-6);
    } else if (b.n() >= 2) {
        const auto t = tall_box_identity(chi, b);
        row.flags.emplace_back("tall_identity", std::abs(t.lhs - t.rhs) < 1e-6);
        const auto scan = degenerate_pair_set(ctx, b);
        row.flags.emplace_back("degenerate_set", scan == degenerate_pair_closed_form(b));
        if (!scan.empty() && !chi.trivial_on_prime_field()) {
            const cplx line = prime_line_sum(chi, b.basis, b.lo(b.n() - 1), b.hi(b.n() - 1));
            row.flags.emplace_back("polya_vinogradov", std::abs(line) <= sqrt_p_log_p(b.p()) + 1e-6);
        }
    }
    return row;
}

/// Admissible random box: every edge in [ceil(p^{1/4 + eps}), p], so that
/// |B| >= p^{n (1/4 + eps)}; offsets uniform in [0, p).
inline Box random_admissible_box(const BasisMatrix& basis, double eps, std::mt19937_64& rng) {
    const u64 p = basis.p();
    const i64 lo = std::min<i64>(static_cast<i64>(p),
                                 static_cast<i64>(std::ceil(std::pow(static_cast<double>(p), 0.25 + eps) - 1e-9)));
    std::uniform_int_distribution<i64> edge(lo, static_cast<i64>(p));
    std::uniform_int_distribution<i64> off(0, static_cast<i64>(p) - 1);
    std::vector<i64> N(basis.n()), H(basis.n());
    for (unsigned i = 0; i < basis.n(); ++i) {
        H[i] = edge(rng);
        N[i] = off(rng);
    }
    return Box::make(basis, std::move(N), std::move(H));
}

inline std::mt19937_64 grid_rng(u64 seed, u64 p, u64 basis_seed, u64 index) {
    std::seed_seq seq{static_cast<u32>(seed), static_cast<u32>(seed >> 32), static_cast<u32>(p),
                      static_cast<u32>(basis_seed), static_cast<u32>(basis_seed >> 32), static_cast<u32>(index)};
    return std::mt19937_64(seq);
}

/// Runs fn(i) for i in [0, count) on `workers` threads.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
    workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < count; i = next++) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

struct SurveyReport {
    std::vector<ReportRow> rows;
    std::vector<std::string> errors;  // grid points that could not be built

    bool passed() const {
        return errors.empty() && std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.passed(); });
    }
};

inline SurveyReport theorem_survey(const ExperimentConfig& cfg) {
    struct Point {
        std::size_t field;
        u64 basis_seed;
        std::optional<Box> box;
        std::string error;
        u64 char_index = 0;
    };
    std::vector<std::unique_ptr<FieldCtx>> fields;
    std::vector<Point> points;
    SurveyReport report;

    for (u64 p : cfg.primes) {
        try {
            fields.push_back(std::make_unique<FieldCtx>(FieldCtx::build(p, cfg.n, std::nullopt, cfg.modulus_seed)));
        } catch (const std::exception& e) {
            report.errors.push_back("p=" + std::to_string(p) + ": " + e.what());
            continue;
        }
        const FieldCtx& ctx = *fields.back();
        for (u64 bs : cfg.basis_seeds) {
            const BasisMatrix basis = BasisMatrix::from_seed(p, cfg.n, bs);
            std::vector<std::optional<Box>> boxes;
            std::vector<std::string> box_errors;
            for (const auto& lit : cfg.boxes) {
                try {
                    boxes.emplace_back(parse_box_literal(lit, basis));
                    box_errors.emplace_back();
                } catch (const std::exception& e) {
                    boxes.emplace_back(std::nullopt);
                    box_errors.push_back("p=" + std::to_string(p) + " box '" + lit + "': " + e.what());
                }
            }
            for (u64 k = 0; k < cfg.random_boxes; ++k) {
                auto rng = grid_rng(cfg.seed, p, bs, k);
                boxes.emplace_back(random_admissible_box(basis, cfg.epsilon, rng));
                box_errors.emplace_back();
            }
            for (std::size_t bi = 0; bi < boxes.size(); ++bi) {
                if (!boxes[bi]) {
                    report.errors.push_back(box_errors[bi]);
                    continue;
                }
                std::vector<u64> chars = cfg.char_indices;
                if (chars.empty()) {
                    auto rng = grid_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL, p, bs, bi);
                    chars.push_back(std::uniform_int_distribution<u64>(1, ctx.q() - 2)(rng));
                }
                for (u64 k : chars) points.push_back({fields.size() - 1, bs, boxes[bi], {}, k});
            }
        }
    }

    report.rows.resize(points.size());
    parallel_for(points.size(), cfg.workers, [&](std::size_t i) {
        const Point& pt = points[i];
        report.rows[i] = evaluate_point(*fields[pt.field], *pt.box, pt.char_index, pt.basis_seed, cfg.epsilon);
    });
    return report;
}

inline const char* kCsvHeader =
    "p,n,eps,char_index,basis_seed,box,H_sorted,sum_re,sum_im,sum_abs,norm_sum,line_term,route,pass_flags";

inline std::string format_double(double v) {
    if (v == 0.0) v = 0.0;  // drop the sign of negative zero
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string flags_string(const ReportRow& r) {
    std::string s;
    for (const auto& [name, ok] : r.flags) {
        if (!s.empty()) s += ';';
        s += name + "=" + (ok ? "1" : "0");
    }
    return s;
}

inline std::string to_csv(const SurveyReport& rep) {
    std::ostringstream os;
    os << kCsvHeader << '\n';
    for (const auto& r : rep.rows) {
        std::string hs;
        for (i64 h : r.H_sorted) hs += (hs.empty() ? "" : ";") + std::to_string(h);
        os << r.p << ',' << r.n << ',' << format_double(r.eps) << ',' << r.char_index << ',' << r.basis_seed << ",\""
           << r.box << "\"," << hs << ',' << format_double(r.sum.real()) << ',' << format_double(r.sum.imag()) << ','
           << format_double(std::abs(r.sum)) << ',' << format_double(r.norm_sum) << ',' << r.line_term << ','
           << r.route << ',' << flags_string(r) << '\n';
    }
    return os.str();
}

inline std::string to_json(const SurveyReport& rep) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : rep.rows) {
        nlohmann::ordered_json o;
        o["p"] = r.p;
        o["n"] = r.n;
        o["eps"] = r.eps;
        o["char_index"] = r.char_index;
        o["basis_seed"] = r.basis_seed;
        o["box"] = r.box;
        o["H_sorted"] = r.H_sorted;
        o["sum_re"] = r.sum.real();
        o["sum_im"] = r.sum.imag();
        o["sum_abs"] = std::abs(r.sum);
        o["norm_sum"] = r.norm_sum;
        o["line_term"] = r.line_term;
        o["route"] = r.route;
        nlohmann::ordered_json flags = nlohmann::ordered_json::object();
        for (const auto& [name, ok] : r.flags) flags[name] = ok;
        o["pass_flags"] = flags;
        rows.push_back(std::move(o));
    }
    nlohmann::ordered_json doc;
    doc["rows"] = std::move(rows);
    doc["errors"] = rep.errors;
    return doc.dump(2) + "\n";
}

inline std::string render(const SurveyReport& rep, ReportFormat f) {
    return f == ReportFormat::csv ? to_csv(rep) : to_json(rep);
}

// ---------------------------------------------------------------------------
// Decay diagnostic

struct DecayPoint {
    u64 p = 0;
    double median = 0;
};

struct DecayResult {
    SurveyReport survey;
    std::vector<DecayPoint> medians;
    bool non_increasing = false;
};

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

inline DecayResult decay_diagnostic(const std::vector<u64>& primes, unsigned n, double eps, u64 boxes, u64 seed,
                                    unsigned workers) {
    ExperimentConfig cfg;
    cfg.primes = primes;
    cfg.n = n;
    cfg.epsilon = eps;
    cfg.basis_seeds = {seed};
    cfg.random_boxes = boxes;
    cfg.seed = seed;
    cfg.workers = workers;
    DecayResult out;
    out.survey = theorem_survey(cfg);
    for (u64 p : primes) {
        std::vector<double> v;
        for (const auto& r : out.survey.rows)
            if (r.p == p) v.push_back(r.norm_sum);
        out.medians.push_back({p, median(v)});
    }
    out.non_increasing = true;
    for (std::size_t i = 1; i < out.medians.size(); ++i)
        if (out.medians[i].median > out.medians[i - 1].median) out.non_increasing = false;
    return out;
}

inline std::string decay_summary_csv(const DecayResult& d) {
    std::ostringstream os;
    os << "p,median_norm_sum\n";
    for (const auto& m : d.medians) os << m.p << ',' << format_double(m.median) << '\n';
    return os.str();
}

}  // namespace boxsum
