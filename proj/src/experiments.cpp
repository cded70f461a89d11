#include "qmono/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include <limits>

#include "json.hpp"

namespace qmono {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;
constexpr int kMaxThreads = 64;

// Locale-independent double formatting: 17 significant digits round-trip
// binary64 exactly.
std::string fmt_g17(double v) {
    char buf[48];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, end);
}

// Shortest round-trip form, for manifest values.
std::string fmt_shortest(double v) {
    char buf[48];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

// Index-sharded worker pool. Each index is processed exactly once and the
// body writes only to its own slot, so results are identical at any worker
// count. The first worker exception is rethrown after the join.
void parallel_for(long n, int threads, const std::function<void(long)>& body) {
    threads = std::clamp(threads, 1, kMaxThreads);
    if (threads == 1 || n <= 1) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<long> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const long i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                body(i);
            } catch (...) {
                const std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

ScoreTriple clamp_triple(const ScoreTriple& t) {
    return {std::max(0.0, t.x), std::max(0.0, t.y), std::max(0.0, t.z)};
}

std::string distribution_law(Family f, SweepMode mode) {
    if (mode == SweepMode::grid) {
        return "theta_i = (pi/4) i/n_theta, phi_j = 2pi j/n_phi, i,j >= 1";
    }
    switch (f) {
        case Family::genw:
            return "theta ~ U(0, pi/4], phi ~ U(0, 2pi]";
        case Family::haar3:
            return "Haar (normalized complex Gaussian amplitudes)";
        case Family::wclass:
            return "Haar on span{|000>,|001>,|010>,|100>}";
        case Family::ghzclass:
            return "lambda_k = |N(0,1)| normalized, phase ~ U[0, 2pi)";
    }
    return "?";
}

std::vector<std::pair<std::string, std::string>> manifest_entries(const SweepResult& res,
                                                                  SweepMode mode) {
    const SweepConfig& c = res.cfg;
    std::vector<std::pair<std::string, std::string>> m;
    m.emplace_back("family", family_name(c.family));
    m.emplace_back("measure", measure_name(c.measure));
    m.emplace_back("distribution", distribution_law(c.family, mode));
    std::string powers;
    for (size_t k = 0; k < c.powers.size(); ++k) {
        if (k) powers += ',';
        powers += std::to_string(c.powers[k]);
    }
    m.emplace_back("powers", powers);
    if (mode == SweepMode::grid) {
        m.emplace_back("grid", std::to_string(c.n_theta) + "x" + std::to_string(c.n_phi));
    } else {
        m.emplace_back("samples", std::to_string(c.samples));
    }
    m.emplace_back("seed", std::to_string(c.seed));
    m.emplace_back("optimizer", "grid_t=" + std::to_string(c.optimizer.grid_t) +
                                    " grid_p=" + std::to_string(c.optimizer.grid_p) +
                                    " refine_tol=" + fmt_shortest(c.optimizer.refine_tol) +
                                    " max_iters=" + std::to_string(c.optimizer.max_iters));
    m.emplace_back("prng", kPrngName);
    m.emplace_back("nodal", std::to_string(c.family == Family::genw ? kGenWNodal : 0));
    m.emplace_back("n_samples", std::to_string(res.n_samples));
    m.emplace_back("n_failed", std::to_string(res.n_failed));
    m.emplace_back("n_exceed", std::to_string(res.n_exceed));
    return m;
}

void write_manifest_comments(const SweepResult& res, SweepMode mode, std::ostream& os) {
    for (const auto& [key, value] : manifest_entries(res, mode)) {
        os << "# " << key << ": " << value << "\n";
    }
}

ordered_json manifest_json(const SweepResult& res, SweepMode mode) {
    ordered_json j;
    for (const auto& [key, value] : manifest_entries(res, mode)) {
        j[key] = value;
    }
    return j;
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw std::runtime_error("cannot open output file: " + path);
    }
    body(os);
    os.flush();
    if (!os) {
        os.close();
        std::remove(path.c_str());
        throw std::runtime_error("write failed, partial file removed: " + path);
    }
}

// Shared sample-mode driver: draw, score, classify, aggregate fractions.
SweepResult run_fraction(const SweepConfig& cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const int nodal = cfg.family == Family::genw ? kGenWNodal : 0;
    const long n = cfg.samples;

    std::vector<TripleResult> triples(n);
    parallel_for(n, cfg.threads, [&](long i) {
        const PureState psi = sample_state(cfg.family, cfg.seed, static_cast<std::uint64_t>(i));
        triples[i] = score_triple(psi, cfg.measure, nodal, cfg.optimizer);
    });

    SweepResult res;
    res.cfg = cfg;
    res.n_samples = n;
    res.records.reserve(n);
    long n_valid = 0;
    for (const TripleResult& tr : triples) {
        SampleOutcome so;
        const ScoreTriple t = clamp_triple(tr.triple);
        so.record = classify_triple(t);
        so.converged = tr.converged;
        so.within_bound = t.y <= t.x + kSignTol && t.z <= t.x + kSignTol;
        if (!so.converged) {
            ++res.n_failed;
        } else if (!so.within_bound) {
            ++res.n_exceed;
        } else {
            ++n_valid;
        }
        res.records.push_back(std::move(so));
    }

    for (long m : cfg.powers) {
        long bad = 0;
        for (const SampleOutcome& so : res.records) {
            if (!so.converged || !so.within_bound) continue;
            if (delta_score(so.record.triple, m) < -kSignTol) ++bad;
        }
        FractionRow row;
        row.power = m;
        row.n_valid = n_valid;
        row.n_failed = res.n_failed;
        row.frac_nonmono = n_valid > 0 ? static_cast<double>(bad) / n_valid : 0.0;
        row.std_err = n_valid > 0
                          ? std::sqrt(row.frac_nonmono * (1.0 - row.frac_nonmono) / n_valid)
                          : 0.0;
        res.fractions.push_back(row);
    }

    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_output_file(res, SweepMode::fraction);
    return res;
}

}  // namespace

const char* family_name(Family f) {
    switch (f) {
        case Family::genw: return "genw";
        case Family::haar3: return "haar3";
        case Family::wclass: return "wclass";
        case Family::ghzclass: return "ghzclass";
    }
    return "?";
}

const char* measure_name(Measure m) {
    switch (m) {
        case Measure::discord: return "discord";
        case Measure::deficit_fwd: return "deficit_fwd";
        case Measure::deficit_bwd: return "deficit_bwd";
        case Measure::eof: return "eof";
        case Measure::tangle: return "tangle";
    }
    return "?";
}

bool parse_family(const std::string& name, Family& out) {
    for (Family f : {Family::genw, Family::haar3, Family::wclass, Family::ghzclass}) {
        if (name == family_name(f)) {
            out = f;
            return true;
        }
    }
    return false;
}

bool parse_measure(const std::string& name, Measure& out) {
    for (Measure m : {Measure::discord, Measure::deficit_fwd, Measure::deficit_bwd, Measure::eof,
                      Measure::tangle}) {
        if (name == measure_name(m)) {
            out = m;
            return true;
        }
    }
    return false;
}

void SweepConfig::validate() const {
    if (samples < 1) throw std::invalid_argument("SweepConfig: samples must be >= 1");
    if (n_theta < 1 || n_phi < 1) {
        throw std::invalid_argument("SweepConfig: grid must be at least 1x1");
    }
    if (powers.empty()) throw std::invalid_argument("SweepConfig: powers must be non-empty");
    for (long m : powers) {
        if (m < 1) throw std::invalid_argument("SweepConfig: powers must be >= 1");
    }
    if (threads < 1) throw std::invalid_argument("SweepConfig: threads must be >= 1");
    optimizer.validate();
}

PureState sample_state(Family family, std::uint64_t seed, std::uint64_t index) {
    SeededSampler s{seed, index};
    switch (family) {
        case Family::genw:
            return generalized_w(sample_genw(s));
        case Family::haar3:
            return haar_random_pure(s, 3);
        case Family::wclass: {
            auto eng = detail::engine_at(seed, index);
            std::array<Complex, 4> a{};
            double norm2 = 0.0;
            for (Complex& v : a) {
                const auto [re, im] = detail::next_gaussian_pair(eng);
                v = Complex(re, im);
                norm2 += std::norm(v);
            }
            const double inv = 1.0 / std::sqrt(norm2);
            return w_class(a[0] * inv, a[1] * inv, a[2] * inv, a[3] * inv);
        }
        case Family::ghzclass: {
            auto eng = detail::engine_at(seed, index);
            std::array<double, 5> lambda{};
            double norm2 = 0.0;
            for (double& l : lambda) {
                l = std::abs(detail::next_gaussian_pair(eng).first);
                norm2 += l * l;
            }
            const double inv = 1.0 / std::sqrt(norm2);
            for (double& l : lambda) l *= inv;
            const double phase = 2.0 * kPi * detail::next_unit(eng);
            return ghz_class(lambda, phase);
        }
    }
    throw std::invalid_argument("sample_state: unknown family");
}

TripleResult score_triple(const PureState& psi, Measure measure, int nodal,
                          const OptimizerConfig& cfg) {
    if (psi.dims != std::vector<int>{2, 2, 2}) {
        throw std::invalid_argument("score_triple: state is not three qubits");
    }
    if (nodal < 0 || nodal > 2) {
        throw std::invalid_argument("score_triple: nodal party out of range");
    }

    const DensityMatrix rho = to_density(psi);
    std::array<int, 2> others{};
    for (int q = 0, k = 0; q < 3; ++q) {
        if (q != nodal) others[k++] = q;
    }

    struct PairState {
        DensityMatrix rho;
        int pos_nodal;
        int pos_other;
    };
    auto make_pair = [&](int other) {
        const int pos_nodal = nodal < other ? 0 : 1;
        DensityMatrix pr = partial_trace(rho, {std::min(nodal, other), std::max(nodal, other)});
        return PairState{std::move(pr), pos_nodal, 1 - pos_nodal};
    };
    const PairState pb = make_pair(others[0]);
    const PairState pc = make_pair(others[1]);

    TripleResult out;
    auto take = [&out](const MeasureResult& r) {
        out.converged = out.converged && r.converged;
        return r.value;
    };

    switch (measure) {
        case Measure::discord:
            // The joint term measures the nodal qubit: the product-party side
            // is not a single qubit, and for a pure state the discord across
            // the cut equals the marginal entropy for either choice.
            out.triple.x = take(discord(rho, nodal, cfg));
            out.triple.y = take(discord(pb.rho, pb.pos_other, cfg));
            out.triple.z = take(discord(pc.rho, pc.pos_other, cfg));
            break;
        case Measure::deficit_fwd:
            out.triple.x = take(one_way_deficit(rho, DeficitKind::forward, {nodal}, cfg));
            out.triple.y = take(one_way_deficit(pb.rho, DeficitKind::forward, {pb.pos_nodal}, cfg));
            out.triple.z = take(one_way_deficit(pc.rho, DeficitKind::forward, {pc.pos_nodal}, cfg));
            break;
        case Measure::deficit_bwd:
            // Same nodal-side dephasing for the joint term, for the same
            // pure-state reason as discord.
            out.triple.x = take(one_way_deficit(rho, DeficitKind::forward, {nodal}, cfg));
            out.triple.y =
                take(one_way_deficit(pb.rho, DeficitKind::backward, {pb.pos_nodal}, cfg));
            out.triple.z =
                take(one_way_deficit(pc.rho, DeficitKind::backward, {pc.pos_nodal}, cfg));
            break;
        case Measure::eof:
            out.triple.x = vn_entropy(partial_trace(rho, {nodal}));
            out.triple.y = eof_two_qubit(pb.rho);
            out.triple.z = eof_two_qubit(pc.rho);
            break;
        case Measure::tangle: {
            const DensityMatrix rn = partial_trace(rho, {nodal});
            const double det =
                (rn.mat(0, 0) * rn.mat(1, 1) - rn.mat(0, 1) * rn.mat(1, 0)).real();
            out.triple.x = std::max(0.0, 4.0 * det);
            const double cb = concurrence(pb.rho);
            const double cc = concurrence(pc.rho);
            out.triple.y = cb * cb;
            out.triple.z = cc * cc;
            break;
        }
    }
    return out;
}

SweepResult sweep_genw_grid(const SweepConfig& cfg) {
    cfg.validate();
    if (cfg.family != Family::genw) {
        throw std::invalid_argument("sweep_genw_grid: family must be genw");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const long total = static_cast<long>(cfg.n_theta) * cfg.n_phi;

    std::vector<GridRow> rows(total);
    std::vector<unsigned char> ok(total, 1);
    std::vector<unsigned char> bounded(total, 1);
    parallel_for(total, cfg.threads, [&](long k) {
        const int i = static_cast<int>(k / cfg.n_phi);
        const int j = static_cast<int>(k % cfg.n_phi);
        const double theta = (kPi / 4.0) * (i + 1) / cfg.n_theta;
        const double phi = 2.0 * kPi * (j + 1) / cfg.n_phi;
        const TripleResult tr =
            score_triple(generalized_w({theta, phi}), cfg.measure, kGenWNodal, cfg.optimizer);
        const ScoreTriple t = clamp_triple(tr.triple);
        GridRow row{theta, phi, {}};
        row.deltas.reserve(cfg.powers.size());
        for (long m : cfg.powers) row.deltas.push_back(delta_score(t, m));
        rows[k] = std::move(row);
        ok[k] = tr.converged ? 1 : 0;
        bounded[k] = (t.y <= t.x + kSignTol && t.z <= t.x + kSignTol) ? 1 : 0;
    });

    SweepResult res;
    res.cfg = cfg;
    res.grid = std::move(rows);
    res.n_samples = total;
    for (long k = 0; k < total; ++k) {
        if (!ok[k]) {
            ++res.n_failed;
        } else if (!bounded[k]) {
            ++res.n_exceed;
        }
    }
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_output_file(res, SweepMode::grid);
    return res;
}

SweepResult estimate_fraction(const SweepConfig& cfg) { return run_fraction(cfg); }

SweepResult histogram_powers(const SweepConfig& cfg) {
    if (cfg.family != Family::haar3) {
        throw std::invalid_argument("histogram_powers: family must be haar3");
    }
    for (size_t k = 0; k < cfg.powers.size(); ++k) {
        if (cfg.powers[k] != static_cast<long>(k) + 1) {
            throw std::invalid_argument("histogram_powers: powers must be the ladder 1..k");
        }
    }
    return run_fraction(cfg);
}

ValidationReport validate_suite(std::uint64_t seed, long n, const OptimizerConfig& cfg) {
    if (n < 1) throw std::invalid_argument("validate_suite: n must be >= 1");
    ValidationReport rep;
    rep.seed = seed;
    rep.n = n;
    rep.ckw_min = std::numeric_limits<double>::infinity();

    SeededSampler s{seed, 0};
    for (long i = 0; i < n; ++i) {
        const PureState psi = haar_random_pure(s, 3);

        const double r = kw_residual(psi, cfg);
        rep.kw_max_abs = std::max(rep.kw_max_abs, std::abs(r));
        rep.kw_mean_abs += std::abs(r);

        const double tau = tangle_ckw(psi, 0);
        rep.ckw_min = std::min(rep.ckw_min, tau);
        if (tau < -1e-8) ++rep.ckw_violations;
        ++rep.ckw_checked;

        const TripleResult td = score_triple(psi, Measure::discord, 0, cfg);
        const TripleResult tw = score_triple(psi, Measure::deficit_bwd, 0, cfg);
        if (!td.converged || !tw.converged) {
            ++rep.n_opt_failed;
        } else {
            const double delta_d = delta_score(clamp_triple(td.triple), 1);
            const double delta_w = delta_score(clamp_triple(tw.triple), 1);
            if (delta_w >= 0.0) {
                ++rep.deficit_mono_count;
                if (delta_d < -1e-6) ++rep.discord_nonmono_count;
            }
        }

        // Pairwise comparison on the same reduced state with the same
        // measured party (the second).
        const DensityMatrix pair = partial_trace(to_density(psi), {0, 1});
        const MeasureResult d_pair = discord(pair, 1, cfg);
        const MeasureResult w_pair = one_way_deficit(pair, DeficitKind::backward, {0}, cfg);
        ++rep.d_le_deficit_total;
        if (d_pair.value <= w_pair.value + 1e-6) ++rep.d_le_deficit_count;
    }
    rep.kw_mean_abs /= static_cast<double>(n);

    // Fixed-basis identity on random two-qubit mixed states:
    // discord_functional(b) - S(rho_meas) - deficit_functional(b) + H(probs(b))
    // should vanish identically.
    for (long i = 0; i < n; ++i) {
        const DensityMatrix rho = random_density_matrix(s, {2, 2});
        const double s_meas = vn_entropy(partial_trace(rho, {1}));
        auto eng = detail::engine_at(s.seed, s.counter);
        ++s.counter;
        for (int b = 0; b < 10; ++b) {
            const double t = std::acos(1.0 - 2.0 * detail::next_unit(eng));
            const double p = 2.0 * kPi * detail::next_unit(eng);
            const MeasurementBasis basis{t, p};
            const double h = shannon_entropy(measure_qubit(rho, 1, basis).probs);
            const double residual = discord_functional(rho, 1, basis) -
                                    (s_meas + deficit_functional(rho, 1, basis) - h);
            rep.identity_max_abs = std::max(rep.identity_max_abs, std::abs(residual));
        }
    }
    return rep;
}

std::string format_validation_report(const ValidationReport& rep) {
    std::ostringstream os;
    os << "validation suite: n = " << rep.n << ", seed = " << rep.seed << "\n"
       << "  kw residual:          max |r| = " << fmt_shortest(rep.kw_max_abs)
       << ", mean |r| = " << fmt_shortest(rep.kw_mean_abs) << "\n"
       << "  fixed-basis identity: max |residual| = " << fmt_shortest(rep.identity_max_abs)
       << " (10 bases per state)\n"
       << "  ckw tangle:           min = " << fmt_shortest(rep.ckw_min) << ", violations (< -1e-8) "
       << rep.ckw_violations << " / " << rep.ckw_checked << "\n"
       << "  discord vs deficit:   bwd-deficit monogamous = " << rep.deficit_mono_count
       << ", discord non-monogamous among them = " << rep.discord_nonmono_count << "\n"
       << "  discord <= bwd deficit: " << rep.d_le_deficit_count << " / "
       << rep.d_le_deficit_total << " within 1e-6\n"
       << "  optimizer failures:   " << rep.n_opt_failed << "\n";
    return os.str();
}

void write_grid_csv(const SweepResult& res, std::ostream& os) {
    write_manifest_comments(res, SweepMode::grid, os);
    os << "theta,phi";
    for (long m : res.cfg.powers) os << ",delta_p" << m;
    os << "\n";
    for (const GridRow& row : res.grid) {
        os << fmt_g17(row.theta) << ',' << fmt_g17(row.phi);
        for (double d : row.deltas) os << ',' << fmt_g17(d);
        os << "\n";
    }
}

void write_fraction_csv(const SweepResult& res, std::ostream& os) {
    write_manifest_comments(res, SweepMode::fraction, os);
    os << "power,frac_nonmono,stderr,n_valid,n_failed\n";
    for (const FractionRow& row : res.fractions) {
        os << row.power << ',' << fmt_g17(row.frac_nonmono) << ',' << fmt_g17(row.std_err) << ','
           << row.n_valid << ',' << row.n_failed << "\n";
    }
}

void write_grid_json(const SweepResult& res, std::ostream& os) {
    ordered_json j;
    j["manifest"] = manifest_json(res, SweepMode::grid);
    ordered_json rows = ordered_json::array();
    for (const GridRow& row : res.grid) {
        ordered_json r;
        r["theta"] = row.theta;
        r["phi"] = row.phi;
        for (size_t k = 0; k < res.cfg.powers.size(); ++k) {
            r["delta_p" + std::to_string(res.cfg.powers[k])] = row.deltas[k];
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    os << j.dump(2) << "\n";
}

void write_fraction_json(const SweepResult& res, std::ostream& os) {
    ordered_json j;
    j["manifest"] = manifest_json(res, SweepMode::fraction);
    ordered_json rows = ordered_json::array();
    for (const FractionRow& row : res.fractions) {
        ordered_json r;
        r["power"] = row.power;
        r["frac_nonmono"] = row.frac_nonmono;
        r["stderr"] = row.std_err;
        r["n_valid"] = row.n_valid;
        r["n_failed"] = row.n_failed;
        rows.push_back(std::move(r));
    }
    j["fractions"] = std::move(rows);
    os << j.dump(2) << "\n";
}

void write_gnuplot_matrix(const SweepResult& res, std::ostream& os) {
    write_manifest_comments(res, SweepMode::grid, os);
    for (size_t k = 0; k < res.cfg.powers.size(); ++k) {
        if (k) os << "\n\n";
        os << "# power " << res.cfg.powers[k] << "\n";
        for (int i = 0; i < res.cfg.n_theta; ++i) {
            for (int j = 0; j < res.cfg.n_phi; ++j) {
                if (j) os << ' ';
                os << fmt_g17(res.grid[static_cast<size_t>(i) * res.cfg.n_phi + j].deltas[k]);
            }
            os << "\n";
        }
    }
}

void write_output_file(const SweepResult& res, SweepMode mode) {
    if (res.cfg.out_path.empty()) return;
    write_file(res.cfg.out_path, [&](std::ostream& os) {
        if (mode == SweepMode::grid) {
            res.cfg.format == OutputFormat::csv ? write_grid_csv(res, os)
                                                : write_grid_json(res, os);
        } else {
            res.cfg.format == OutputFormat::csv ? write_fraction_csv(res, os)
                                                : write_fraction_json(res, os);
        }
    });
}

void write_gnuplot_file(const SweepResult& res, const std::string& path) {
    if (path.empty()) return;
    write_file(path, [&](std::ostream& os) { write_gnuplot_matrix(res, os); });
}

}  // namespace qmono
