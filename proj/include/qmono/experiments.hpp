#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qmono/measures.hpp"
#include "qmono/monogamy.hpp"
#include "qmono/optimizer.hpp"
#include "qmono/states.hpp"

namespace qmono {

enum class Family { genw, haar3, wclass, ghzclass };
enum class Measure { discord, deficit_fwd, deficit_bwd, eof, tangle };
enum class OutputFormat { csv, json };

const char* family_name(Family f);
const char* measure_name(Measure m);
bool parse_family(const std::string& name, Family& out);
bool parse_measure(const std::string& name, Measure& out);

// The generalized W family is written with the distinguished qubit in the
// third slot: its marginal is diag(cos^2 theta, sin^2 theta), so monogamy
// scores for that family are taken with nodal party 2.
inline constexpr int kGenWNodal = 2;

struct SweepConfig {
    Family family = Family::genw;
    Measure measure = Measure::deficit_fwd;
    std::vector<long> powers = {1, 2, 3, 4, 5};
    long samples = 10000;  // sample mode
    int n_theta = 100;     // grid mode
    int n_phi = 100;
    std::uint64_t seed = 0;
    OptimizerConfig optimizer{};
    int threads = 1;
    std::string out_path;  // empty: caller handles persistence
    OutputFormat format = OutputFormat::csv;

    void validate() const;
};

struct GridRow {
    double theta = 0.0;
    double phi = 0.0;
    std::vector<double> deltas;  // one delta per entry of SweepConfig::powers
};

struct FractionRow {
    long power = 0;
    double frac_nonmono = 0.0;  // fraction of valid samples with delta < -kSignTol
    double std_err = 0.0;       // binomial standard error sqrt(f(1-f)/n_valid)
    long n_valid = 0;
    long n_failed = 0;
};

// Per-sample classification plus the validity flags that decide whether the
// sample enters fraction denominators: converged means every basis
// optimization settled, within_bound means y <= x and z <= x up to kSignTol.
struct SampleOutcome {
    MonogamyRecord record;
    bool converged = true;
    bool within_bound = true;
};

struct SweepResult {
    SweepConfig cfg;
    std::vector<GridRow> grid;            // grid mode
    std::vector<SampleOutcome> records;   // sample mode, in sample-index order
    std::vector<FractionRow> fractions;   // sample mode
    long n_samples = 0;
    long n_failed = 0;  // optimizer non-convergence
    long n_exceed = 0;  // y > x or z > x beyond kSignTol
    double wall_seconds = 0.0;  // stderr reporting only, never serialized
};

struct TripleResult {
    ScoreTriple triple;
    bool converged = true;
};

// Monogamy scores (x, y, z) = (Q_{A:BC}, Q_AB, Q_AC) of a three-qubit pure
// state, with A the nodal party. Joint terms of the measurement-optimized
// measures are evaluated by measuring the nodal qubit; for pure inputs the
// value across the cut is the marginal entropy whichever side is measured.
TripleResult score_triple(const PureState& psi, Measure measure, int nodal,
                          const OptimizerConfig& cfg = {});

// Pure-function state source: sample i depends only on (family, seed, i).
PureState sample_state(Family family, std::uint64_t seed, std::uint64_t index);

// Grid sweep over theta_i = (pi/4) i/n_theta, phi_j = 2pi j/n_phi (i, j
// starting at 1, so both half-open-from-below ranges keep their endpoints).
SweepResult sweep_genw_grid(const SweepConfig& cfg);

// Monte Carlo non-monogamous fraction per power for the configured family.
SweepResult estimate_fraction(const SweepConfig& cfg);

// estimate_fraction specialized to Haar three-qubit states with a contiguous
// power ladder 1..k.
SweepResult histogram_powers(const SweepConfig& cfg);

struct ValidationReport {
    std::uint64_t seed = 0;
    long n = 0;
    double kw_max_abs = 0.0;
    double kw_mean_abs = 0.0;
    double identity_max_abs = 0.0;  // fixed-basis discord/deficit identity
    long ckw_checked = 0;
    long ckw_violations = 0;  // tangle < -1e-8
    double ckw_min = 0.0;
    long deficit_mono_count = 0;   // samples with delta(bwd deficit) >= 0
    long discord_nonmono_count = 0;  // of those, delta(discord) < -1e-6
    long d_le_deficit_count = 0;  // pair discord <= pair bwd deficit + 1e-6
    long d_le_deficit_total = 0;
    long n_opt_failed = 0;
};

// Cross-checks over n Haar three-qubit states (and n random two-qubit mixed
// states for the fixed-basis identity, 10 random bases each). Always returns
// a report; nothing is asserted here.
ValidationReport validate_suite(std::uint64_t seed, long n, const OptimizerConfig& cfg = {});

std::string format_validation_report(const ValidationReport& rep);

// Writers emit the manifest first (as `# key: value` lines in CSV, a
// "manifest" object in JSON), then the rows. Output depends only on the
// result contents, never on wall time or thread count.
void write_grid_csv(const SweepResult& res, std::ostream& os);
void write_fraction_csv(const SweepResult& res, std::ostream& os);
void write_grid_json(const SweepResult& res, std::ostream& os);
void write_fraction_json(const SweepResult& res, std::ostream& os);

// Fig-style surface export: one whitespace matrix block per power
// (n_theta rows x n_phi columns of delta), blocks separated by blank lines.
void write_gnuplot_matrix(const SweepResult& res, std::ostream& os);

enum class SweepMode { grid, fraction };

// Writes res.cfg.out_path in res.cfg.format (no-op when out_path is empty).
// A failed write removes the partial file and throws std::runtime_error.
void write_output_file(const SweepResult& res, SweepMode mode);
void write_gnuplot_file(const SweepResult& res, const std::string& path);

}  // namespace qmono
