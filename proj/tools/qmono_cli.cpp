#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qmono/experiments.hpp"
#include "qmono/monogamy.hpp"
#include "qmono/states.hpp"

using namespace qmono;

namespace {

struct ParsedState {
    PureState psi;
    int nodal;
};

std::vector<double> parse_numbers(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t pos = 0;
        out.push_back(std::stod(item, &pos));
        while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
        if (pos != item.size()) throw std::invalid_argument("bad number: " + item);
    }
    return out;
}

// Accepted forms: genw:theta,phi | ghz | w | wclass:a,b,c,d |
// ghzclass:l0,l1,l2,l3,l4,phase | haar:<counter>
ParsedState parse_state(const std::string& spec, std::uint64_t seed) {
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (head == "ghz" && args.empty()) return {ghz_state(), 0};
    if (head == "w" && args.empty()) return {w_state(), 0};
    if (head == "genw") {
        const auto v = parse_numbers(args);
        if (v.size() != 2) throw std::invalid_argument("genw expects theta,phi");
        return {generalized_w({v[0], v[1]}), kGenWNodal};
    }
    if (head == "wclass") {
        const auto v = parse_numbers(args);
        if (v.size() != 4) throw std::invalid_argument("wclass expects a,b,c,d");
        return {w_class(v[0], v[1], v[2], v[3]), 0};
    }
    if (head == "ghzclass") {
        const auto v = parse_numbers(args);
        if (v.size() != 6) throw std::invalid_argument("ghzclass expects l0,l1,l2,l3,l4,phase");
        return {ghz_class({v[0], v[1], v[2], v[3], v[4]}, v[5]), 0};
    }
    if (head == "haar") {
        size_t pos = 0;
        const std::uint64_t counter = std::stoull(args, &pos);
        if (pos != args.size()) throw std::invalid_argument("haar expects an integer counter");
        SeededSampler s{seed, counter};
        return {haar_random_pure(s, 3), 0};
    }
    throw std::invalid_argument("unknown state spec: " + spec);
}

Measure parse_measure_or_throw(const std::string& name) {
    Measure m;
    if (!parse_measure(name, m)) {
        throw std::invalid_argument("unknown measure: " + name +
                                    " (one of discord, deficit_fwd, deficit_bwd, eof, tangle)");
    }
    return m;
}

std::pair<int, int> parse_dims(const std::string& s, const char* what) {
    const auto x = s.find('x');
    if (x == std::string::npos) {
        throw std::invalid_argument(std::string(what) + " expects the form NxM");
    }
    size_t p1 = 0, p2 = 0;
    const int a = std::stoi(s.substr(0, x), &p1);
    const int b = std::stoi(s.substr(x + 1), &p2);
    if (p1 != x || p2 != s.size() - x - 1 || a < 1 || b < 1) {
        throw std::invalid_argument(std::string(what) + " expects the form NxM");
    }
    return {a, b};
}

std::vector<long> parse_powers(const std::string& s) {
    std::vector<long> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t pos = 0;
        out.push_back(std::stol(item, &pos));
        if (pos != item.size()) throw std::invalid_argument("bad power: " + item);
    }
    if (out.empty()) throw std::invalid_argument("powers list is empty");
    return out;
}

// Options shared by the sweep-style subcommands.
struct CommonOpts {
    std::uint64_t seed = 0;
    long samples = 10000;
    std::string grid = "100x100";
    std::string powers = "1,2,3,4,5";
    std::string out;
    std::string format = "csv";
    int threads = 1;
    std::string opt_grid;
    double opt_tol = 0.0;

    CLI::Option* threads_opt = nullptr;
    CLI::Option* opt_grid_opt = nullptr;
    CLI::Option* opt_tol_opt = nullptr;
};

void add_optimizer_flags(CLI::App* cmd, CommonOpts& o) {
    o.opt_grid_opt =
        cmd->add_option("--opt-grid", o.opt_grid, "Optimizer lattice as TxP (default 24x48)");
    o.opt_tol_opt =
        cmd->add_option("--opt-tol", o.opt_tol, "Optimizer refinement tolerance (default 1e-6)");
}

void add_common_flags(CLI::App* cmd, CommonOpts& o, bool grid_mode) {
    cmd->add_option("--seed", o.seed, "PRNG seed (64-bit)");
    if (grid_mode) {
        cmd->add_option("--grid", o.grid, "Grid as n_theta x n_phi (default 100x100)");
    } else {
        cmd->add_option("--samples", o.samples, "Number of Monte Carlo samples");
    }
    cmd->add_option("--powers", o.powers, "Comma-separated integer powers");
    cmd->add_option("--out", o.out, "Output file path")->required();
    cmd->add_option("--format", o.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    o.threads_opt = cmd->add_option("--threads", o.threads, "Worker threads (default 1)");
    add_optimizer_flags(cmd, o);
}

int resolve_threads(const CommonOpts& o) {
    if (o.threads_opt != nullptr && o.threads_opt->count() > 0) return o.threads;
    if (const char* env = std::getenv("QMONO_THREADS")) {
        size_t pos = 0;
        const std::string text(env);
        const int v = std::stoi(text, &pos);
        if (pos != text.size() || v < 1) {
            throw std::invalid_argument("QMONO_THREADS must be a positive integer");
        }
        return v;
    }
    return 1;
}

OptimizerConfig resolve_optimizer(const CommonOpts& o) {
    OptimizerConfig cfg;
    if (o.opt_grid_opt != nullptr && o.opt_grid_opt->count() > 0) {
        const auto [t, p] = parse_dims(o.opt_grid, "--opt-grid");
        cfg.grid_t = t;
        cfg.grid_p = p;
    }
    if (o.opt_tol_opt != nullptr && o.opt_tol_opt->count() > 0) {
        cfg.refine_tol = o.opt_tol;
    }
    return cfg;
}

SweepConfig build_sweep_config(const CommonOpts& o, Family family, Measure measure,
                               bool grid_mode) {
    SweepConfig cfg;
    cfg.family = family;
    cfg.measure = measure;
    cfg.powers = parse_powers(o.powers);
    cfg.seed = o.seed;
    cfg.samples = o.samples;
    if (grid_mode) {
        const auto [nt, np] = parse_dims(o.grid, "--grid");
        cfg.n_theta = nt;
        cfg.n_phi = np;
    }
    cfg.optimizer = resolve_optimizer(o);
    cfg.threads = resolve_threads(o);
    cfg.out_path = o.out;
    cfg.format = o.format == "json" ? OutputFormat::json : OutputFormat::csv;
    return cfg;
}

const char* min_power_text(const MinPowerResult& r, std::string& scratch) {
    switch (r.kind) {
        case MinPowerResult::Kind::no_finite_power:
            return "NO_FINITE_POWER";
        case MinPowerResult::Kind::cap_exceeded:
            return "CAP_EXCEEDED";
        case MinPowerResult::Kind::found:
            scratch = std::to_string(r.power);
            return scratch.c_str();
    }
    return "?";
}

const char* status_text(MonogamyStatus s) {
    switch (s) {
        case MonogamyStatus::monogamous: return "monogamous";
        case MonogamyStatus::strictly_monogamous: return "strictly_monogamous";
        case MonogamyStatus::non_monogamous: return "non_monogamous";
        case MonogamyStatus::no_finite_power: return "no_finite_power";
    }
    return "?";
}

// Exit 2 when more than 1% of the samples rest on failed minimizations.
int failure_exit(const SweepResult& res) {
    if (res.n_failed * 100 > res.n_samples) {
        std::fprintf(stderr, "error: optimizer failed on %ld of %ld samples (over 1%%)\n",
                     res.n_failed, res.n_samples);
        return 2;
    }
    return 0;
}

void report_sweep(const char* name, const SweepResult& res) {
    std::fprintf(stderr, "%s: %ld samples, %ld failed, %ld out-of-bound, %.1fs\n", name,
                 res.n_samples, res.n_failed, res.n_exceed, res.wall_seconds);
}

int run_score(const std::string& state_spec, const std::string& measure_str, long power,
              bool power_given, const CommonOpts& o) {
    const ParsedState ps = parse_state(state_spec, o.seed);
    const Measure m = parse_measure_or_throw(measure_str);
    const TripleResult tr = score_triple(ps.psi, m, ps.nodal, resolve_optimizer(o));
    const ScoreTriple t{std::max(0.0, tr.triple.x), std::max(0.0, tr.triple.y),
                        std::max(0.0, tr.triple.z)};
    const MonogamyRecord rec = classify_triple(t);

    std::string scratch;
    std::printf("state %s\n", state_spec.c_str());
    std::printf("measure %s\n", measure_name(m));
    std::printf("nodal %d\n", ps.nodal);
    std::printf("x %.6f\n", t.x);
    std::printf("y %.6f\n", t.y);
    std::printf("z %.6f\n", t.z);
    std::printf("delta %.6f\n", rec.delta);
    if (power_given) {
        std::printf("delta_p%ld %.6f\n", power, delta_score(t, power));
    }
    std::printf("min_power %s\n", min_power_text(rec.min_power, scratch));
    std::printf("status %s\n", status_text(rec.status));
    std::printf("converged %s\n", tr.converged ? "yes" : "no");
    if (!tr.converged) {
        std::fprintf(stderr, "error: basis optimization did not converge\n");
        return 2;
    }
    return 0;
}

int run_min_power(const std::string& triple_str, const std::string& batch_path) {
    std::vector<ScoreTriple> triples;
    if (!triple_str.empty()) {
        const auto v = parse_numbers(triple_str);
        if (v.size() != 3) throw std::invalid_argument("--triple expects x,y,z");
        triples.push_back({v[0], v[1], v[2]});
    } else {
        std::ifstream in(batch_path);
        if (!in) throw std::invalid_argument("cannot open batch file: " + batch_path);
        std::string line;
        while (std::getline(in, line)) {
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            const auto v = parse_numbers(line);
            if (v.size() != 3) throw std::invalid_argument("batch line is not x,y,z: " + line);
            triples.push_back({v[0], v[1], v[2]});
        }
    }
    std::string scratch;
    for (const ScoreTriple& t : triples) {
        std::printf("%s\n", min_power_text(min_monogamy_power(t), scratch));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monogamy scores and minimal restoring powers for few-qubit correlation measures"};
    app.require_subcommand(1);

    // score
    auto* score_cmd = app.add_subcommand("score", "Monogamy record of one three-qubit state");
    std::string score_state, score_measure;
    long score_power = 1;
    CommonOpts score_opts;
    score_cmd->add_option("--state", score_state, "State spec, e.g. genw:0.5,1.0 or ghz")
        ->required();
    score_cmd->add_option("--measure", score_measure, "Correlation measure")->required();
    auto* score_power_opt =
        score_cmd->add_option("--power", score_power, "Also print delta at this power");
    score_cmd->add_option("--seed", score_opts.seed, "Seed for haar:<counter> states");
    add_optimizer_flags(score_cmd, score_opts);

    // min-power
    auto* mp_cmd = app.add_subcommand("min-power", "Minimal power restoring monogamy");
    std::string mp_triple, mp_batch;
    auto* mp_triple_opt = mp_cmd->add_option("--triple", mp_triple, "Score triple x,y,z");
    auto* mp_batch_opt =
        mp_cmd->add_option("--batch", mp_batch, "CSV file of x,y,z lines (# comments allowed)");
    mp_triple_opt->excludes(mp_batch_opt);

    // sweep-genw
    auto* sweep_cmd = app.add_subcommand("sweep-genw", "Delta surface over the (theta, phi) grid");
    CommonOpts sweep_opts;
    std::string sweep_measure = "deficit_fwd";
    std::string sweep_gnuplot;
    sweep_cmd->add_option("--measure", sweep_measure, "Correlation measure");
    add_common_flags(sweep_cmd, sweep_opts, true);
    sweep_cmd->add_option("--gnuplot", sweep_gnuplot,
                          "Also write a whitespace-matrix surface file to this path");

    // fraction
    auto* frac_cmd = app.add_subcommand("fraction", "Monte Carlo non-monogamous fractions");
    CommonOpts frac_opts;
    std::string frac_family = "genw";
    std::string frac_measure = "deficit_fwd";
    frac_cmd->add_option("--family", frac_family, "State family")
        ->check(CLI::IsMember({"genw", "haar3", "wclass", "ghzclass"}));
    frac_cmd->add_option("--measure", frac_measure, "Correlation measure");
    add_common_flags(frac_cmd, frac_opts, false);

    // haar-hist
    auto* hist_cmd = app.add_subcommand("haar-hist", "Fraction ladder for Haar three-qubit states");
    CommonOpts hist_opts;
    hist_opts.powers = "1,2,3,4,5,6";
    std::string hist_measure = "deficit_fwd";
    hist_cmd->add_option("--measure", hist_measure, "Correlation measure");
    add_common_flags(hist_cmd, hist_opts, false);

    // validate
    auto* val_cmd = app.add_subcommand("validate", "Cross-check suite over Haar samples");
    CommonOpts val_opts;
    val_opts.samples = 1000;
    val_cmd->add_option("--samples", val_opts.samples, "Number of Haar samples");
    val_cmd->add_option("--seed", val_opts.seed, "PRNG seed (64-bit)");
    add_optimizer_flags(val_cmd, val_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (app.got_subcommand(score_cmd)) {
            return run_score(score_state, score_measure, score_power,
                             score_power_opt->count() > 0, score_opts);
        }
        if (app.got_subcommand(mp_cmd)) {
            if (mp_triple.empty() && mp_batch.empty()) {
                throw std::invalid_argument("min-power needs --triple or --batch");
            }
            return run_min_power(mp_triple, mp_batch);
        }
        if (app.got_subcommand(sweep_cmd)) {
            const SweepConfig cfg = build_sweep_config(sweep_opts, Family::genw,
                                                       parse_measure_or_throw(sweep_measure), true);
            const SweepResult res = sweep_genw_grid(cfg);
            write_gnuplot_file(res, sweep_gnuplot);
            report_sweep("sweep-genw", res);
            return failure_exit(res);
        }
        if (app.got_subcommand(frac_cmd)) {
            Family family;
            parse_family(frac_family, family);
            const SweepConfig cfg =
                build_sweep_config(frac_opts, family, parse_measure_or_throw(frac_measure), false);
            const SweepResult res = estimate_fraction(cfg);
            report_sweep("fraction", res);
            return failure_exit(res);
        }
        if (app.got_subcommand(hist_cmd)) {
            const SweepConfig cfg = build_sweep_config(hist_opts, Family::haar3,
                                                       parse_measure_or_throw(hist_measure), false);
            const SweepResult res = histogram_powers(cfg);
            report_sweep("haar-hist", res);
            return failure_exit(res);
        }
        if (app.got_subcommand(val_cmd)) {
            const ValidationReport rep =
                validate_suite(val_opts.seed, val_opts.samples, resolve_optimizer(val_opts));
            std::fputs(format_validation_report(rep).c_str(), stdout);
            return 0;
        }
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\nrun with --help for usage\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
