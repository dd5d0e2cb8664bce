// Command-line front end for the boxsum library.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

#include "boxsum/boxsum.hpp"

using namespace boxsum;
using ojson = nlohmann::ordered_json;

namespace {

struct Common {
    u64 p = 31;
    unsigned n = 2;
    std::string modulus;
    u64 basis_seed = 0;
    std::string box;
    u64 char_index = 1;
    double epsilon = 0.3;
    u64 seed = 1;
    unsigned workers = 1;
    std::string out;
    std::string format = "text";
};

std::vector<u64> parse_u64_list(const std::string& s) {
    std::vector<u64> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(std::stoull(part));
    return out;
}

FieldCtx make_field(const Common& c) {
    std::optional<std::vector<u64>> mod;
    if (!c.modulus.empty()) mod = parse_u64_list(c.modulus);
    return FieldCtx::build(c.p, c.n, mod, c.seed);
}

std::string elem_string(const FieldCtx& ctx, const FqElem& e) {
    std::string s = "(";
    for (unsigned i = 0; i < ctx.n(); ++i) s += (i ? "," : "") + std::to_string(e.c[i]);
    return s + ")";
}

ojson cplx_json(cplx v) { return ojson{{"re", v.real()}, {"im", v.imag()}, {"abs", std::abs(v)}}; }

void emit(const Common& c, const ojson& j) {
    std::string text;
    if (c.format == "json") {
        text = j.dump(2) + "\n";
    } else {
        for (const auto& [k, v] : j.items()) text += k + " = " + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
    }
    if (c.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(c.out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write '" + c.out + "'");
        f << text;
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << text;
}

ojson minima_json(const MinimaResult& m) {
    ojson j;
    for (const auto& l : m.lambdas) j["lambdas"].push_back(l.str());
    j["witnesses"] = m.witnesses;
    j["nodes"] = m.nodes;
    j["minkowski_ok"] = m.minkowski_ok;
    return j;
}

int cmd_field(const Common& c) {
    const auto ctx = make_field(c);
    const auto basis = BasisMatrix::from_seed(c.p, c.n, c.basis_seed);
    ojson j;
    j["p"] = ctx.p();
    j["n"] = ctx.n();
    j["q"] = ctx.q();
    j["modulus"] = ctx.modulus_string();
    j["generator"] = elem_string(ctx, ctx.generator());
    for (unsigned i = 0; i < c.n; ++i) j["basis"].push_back(elem_string(ctx, basis.column(i)));
    emit(c, j);
    return 0;
}

int cmd_charsum(const Common& c) {
    const auto ctx = make_field(c);
    const Box b = parse_box_literal(c.box, BasisMatrix::from_seed(c.p, c.n, c.basis_seed));
    const Character chi(ctx, c.char_index);
    const cplx s = box_char_sum(chi, b);
    ojson j;
    j["box"] = format_box_literal(b);
    j["size"] = b.size();
    j["char_index"] = chi.index();
    j["order"] = chi.order();
    j["sum"] = cplx_json(s);
    j["norm_sum"] = std::abs(s) / static_cast<double>(b.size());
    j["route"] = route_name(route_for(normalize(b), c.epsilon));
    emit(c, j);
    return 0;
}

int cmd_energy(const Common& c) {
    const auto ctx = make_field(c);
    const Box b = parse_box_literal(c.box, BasisMatrix::from_seed(c.p, c.n, c.basis_seed));
    const RatioProfile r = s_decomposition(ctx, b);
    ojson j;
    j["size"] = r.box_size;
    j["E"] = r.E;
    j["E_over_B2_log3p"] = static_cast<double>(r.E) /
                           (static_cast<double>(r.box_size) * static_cast<double>(r.box_size) * log3(c.p));
    j["Z_prime"] = r.Z_prime.size();
    j["Z"] = r.Z.size();
    j["S"] = r.S;
    j["S1"] = r.S1;
    j["S2"] = r.S2;
    j["hypothesis_ok"] = r.hypothesis_ok;
    j["chain_pairs"] = r.chain_pairs;
    j["chain_total"] = r.chain_total;
    j["f_below_f0"] = r.f_below_f0;
    j["f0_factorises"] = r.f0_factorises;
    emit(c, j);
    return r.all_ok() ? 0 : 1;
}

int cmd_minima(const Common& c, std::optional<u32> z_index, u64 sweep) {
    const auto ctx = make_field(c);
    const Box b = normalize(parse_box_literal(c.box, BasisMatrix::from_seed(c.p, c.n, c.basis_seed)));
    std::vector<u32> zs;
    if (z_index) {
        if (*z_index >= ctx.q()) throw std::invalid_argument("z index must be below q");
        zs.push_back(*z_index);
    } else {
        std::mt19937_64 rng(c.seed);
        std::uniform_int_distribution<u32> d(static_cast<u32>(c.p), static_cast<u32>(ctx.q() - 1));
        for (u64 i = 0; i < sweep; ++i) zs.push_back(d(rng));
    }
    bool ok = true;
    ojson rows = ojson::array();
    for (u32 zi : zs) {
        const FqElem z = ctx.elem(zi);
        ojson j;
        j["z"] = zi;
        if (ctx.in_prime_field(z)) {
            j["minima"] = minima_json(successive_minima(gamma_z(ctx, b.basis, z), box_body(b)));
        } else {
            const ZClass cl = classify_z(ctx, b, z);
            j["minima"] = minima_json(cl.minima);
            j["lambda1_star"] = cl.lambda1_star.str();
            j["s"] = cl.s;
            j["j"] = cl.j;
            j["j_star"] = cl.j_star;
            j["recovered_ok"] = cl.recovered_ok;
            j["lower_bounds_ok"] = cl.lower_bounds_ok;
            ok = ok && cl.recovered_ok && cl.lower_bounds_ok && cl.minima.minkowski_ok;
        }
        rows.push_back(j);
    }
    Common jc = c;
    if (jc.format != "json") jc.format = "json";  // nested output reads best as JSON
    emit(jc, rows.size() == 1 ? rows[0] : rows);
    return ok ? 0 : 1;
}

int cmd_burgess(const Common& c) {
    const auto ctx = make_field(c);
    const Box b = parse_box_literal(c.box, BasisMatrix::from_seed(c.p, c.n, c.basis_seed));
    const Character chi(ctx, c.char_index);
    const BurgessTrace t = burgess_trace(ctx, b, chi, c.epsilon);
    ojson j;
    j["r"] = t.params.r;
    j["delta"] = t.params.delta;
    j["interval_len"] = t.interval_len;
    j["scaled_box"] = format_box_literal(t.scaled);
    j["true_abs"] = std::abs(t.true_sum);
    j["averaged_abs"] = std::abs(t.averaged);
    j["max_symdiff"] = t.max_symdiff;
    j["shift_limit"] = t.shift_limit;
    j["chain"] = {t.T, t.L0, t.L1, t.L2, t.L3, t.L4};
    j["moment"] = t.moment.value;
    j["moment_bound"] = t.moment.bound;
    j["tau2_shape"] = t.tau2_shape;
    j["assembled"] = t.assembled;
    j["assembled_explicit"] = t.assembled_explicit;
    j["all_ok"] = t.all_ok();
    emit(c, j);
    return t.all_ok() ? 0 : 1;
}

int cmd_moments(const Common& c, u64 len, u64 r) {
    const auto ctx = make_field(c);
    const Character chi(ctx, c.char_index);
    if (r == 0 || len == 0) {
        const auto prm = choose_parameters(c.epsilon);
        if (r == 0) r = prm.r;
        if (len == 0) len = interval_length(c.p, prm.delta);
    }
    const MomentResult m = moment_sum(chi, len, r);
    ojson j;
    j["interval_len"] = len;
    j["r"] = r;
    j["value"] = m.value;
    j["bound"] = m.bound;
    j["bad_tuples"] = m.bad.str();
    j["bad_bound"] = m.bad_bound.str();
    j["value_ok"] = m.value_ok;
    j["census_ok"] = m.census_ok;
    emit(c, j);
    return m.value_ok && m.census_ok ? 0 : 1;
}

int finish_survey(const SurveyReport& rep, ReportFormat fmt, const std::string& out) {
    write_text(out, render(rep, fmt));
    for (const auto& e : rep.errors) std::cerr << "error: " << e << "\n";
    return rep.passed() ? 0 : 1;
}

ReportFormat parse_format(const std::string& f) {
    if (f == "json") return ReportFormat::json;
    return ReportFormat::csv;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Character sums over boxes in finite fields"};
    app.require_subcommand(1);
    Common c;

    auto add_field = [&](CLI::App* s) {
        s->add_option("--p", c.p, "prime characteristic");
        s->add_option("--n", c.n, "extension degree (1..3)");
        s->add_option("--modulus", c.modulus, "modulus coefficients c0,c1,...; leading 1 optional");
        s->add_option("--basis-seed", c.basis_seed, "0 = power basis");
        s->add_option("--seed", c.seed, "RNG seed");
        s->add_option("--out", c.out, "output file (default stdout)");
        s->add_option("--format", c.format, "text|json (csv|json for surveys)");
    };

    auto* field = app.add_subcommand("field", "build a field and basis");
    add_field(field);

    auto* charsum = app.add_subcommand("charsum", "one box character sum");
    add_field(charsum);
    charsum->add_option("--box", c.box, "N1:H1,N2:H2[,N3:H3]")->required();
    charsum->add_option("--char-index", c.char_index);
    charsum->add_option("--epsilon", c.epsilon);

    auto* energy_cmd = app.add_subcommand("energy", "energy and S-decomposition of a box");
    add_field(energy_cmd);
    energy_cmd->add_option("--box", c.box)->required();

    std::optional<u32> z_index;
    u64 sweep = 10;
    auto* minima = app.add_subcommand("minima", "successive minima of Gamma_z");
    add_field(minima);
    minima->add_option("--box", c.box)->required();
    minima->add_option("--z", z_index, "packed field index of z");
    minima->add_option("--sweep", sweep, "number of random z outside F_p when --z is absent");

    auto* burgess = app.add_subcommand("burgess", "amplification trace");
    add_field(burgess);
    burgess->add_option("--box", c.box)->required();
    burgess->add_option("--char-index", c.char_index);
    burgess->add_option("--epsilon", c.epsilon);

    u64 len = 0, r = 0;
    auto* moments = app.add_subcommand("moments", "2r-th moment of interval sums");
    add_field(moments);
    moments->add_option("--char-index", c.char_index);
    moments->add_option("--epsilon", c.epsilon);
    moments->add_option("--interval", len, "|I| (default from epsilon)");
    moments->add_option("--r", r, "moment order r (default from epsilon)");

    std::string primes = "31,61,101";
    u64 random_boxes = 20;
    bool decay = false;
    std::string summary_out;
    auto* survey = app.add_subcommand("survey", "grid survey over random admissible boxes");
    add_field(survey);
    survey->add_option("--primes", primes, "comma-separated primes");
    survey->add_option("--epsilon", c.epsilon);
    survey->add_option("--random-boxes", random_boxes);
    survey->add_option("--workers", c.workers);
    survey->add_option("--char-index", c.char_index, "fixed character index (default random per box)");
    survey->add_flag("--decay", decay, "decay diagnostic: medians per prime");
    survey->add_option("--summary-out", summary_out, "decay summary CSV path");

    std::string pilot_out = "fixtures/fixtures.json";
    auto* pilot = app.add_subcommand("pilot", "measure fixture constants");
    pilot->add_option("--seed", c.seed, "pilot seed")->default_val(kPilotSeed);
    pilot->add_option("--out", pilot_out);

    std::string config_path;
    std::optional<unsigned> workers_override;
    std::string run_out;
    auto* run = app.add_subcommand("run", "run a JSON experiment config");
    run->add_option("config", config_path)->required();
    run->add_option("--workers", workers_override);
    run->add_option("--out", run_out, "overrides the config's output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*field) return cmd_field(c);
        if (*charsum) return cmd_charsum(c);
        if (*energy_cmd) return cmd_energy(c);
        if (*minima) return cmd_minima(c, z_index, sweep);
        if (*burgess) return cmd_burgess(c);
        if (*moments) return cmd_moments(c, len, r);
        if (*survey) {
            if (decay) {
                const auto d = decay_diagnostic(parse_u64_list(primes), c.n, c.epsilon, random_boxes, c.seed, c.workers);
                if (!summary_out.empty()) write_text(summary_out, decay_summary_csv(d));
                std::cerr << "median normalized sum non-increasing: " << (d.non_increasing ? "yes" : "no") << "\n";
                return finish_survey(d.survey, parse_format(c.format), c.out);
            }
            ExperimentConfig cfg;
            cfg.primes = parse_u64_list(primes);
            cfg.n = c.n;
            cfg.epsilon = c.epsilon;
            cfg.modulus_seed = c.seed;
            cfg.basis_seeds = {c.basis_seed};
            cfg.random_boxes = random_boxes;
            if (survey->count("--char-index")) cfg.char_indices = {c.char_index};
            cfg.seed = c.seed;
            cfg.workers = c.workers;
            return finish_survey(theorem_survey(cfg), parse_format(c.format), c.out);
        }
        if (*pilot) {
            const FixtureFile f = run_pilot(c.seed);
            write_text(pilot_out, f.to_json().dump(2) + "\n");
            return 0;
        }
        if (*run) {
            ExperimentConfig cfg = load_config(config_path);
            if (workers_override) cfg.workers = *workers_override;
            if (!run_out.empty()) cfg.out = run_out;
            return finish_survey(theorem_survey(cfg), cfg.format, cfg.out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
