#pragma once

#include <array>
#include <vector>

#include "qmono/basis.hpp"
#include "qmono/optimizer.hpp"
#include "qmono/qmat.hpp"

namespace qmono {

// Result of a rank-1 projective measurement on a single qubit of a joint state.
// probs sum to 1; conditionals are the normalized reduced states of the
// unmeasured part (maximally mixed when the branch probability is ~0);
// dephased = sum_i (P_i at the measured slot) rho (P_i at the measured slot).
struct MeasurementOutcome {
    std::array<double, 2> probs;
    std::array<DensityMatrix, 2> conditionals;
    DensityMatrix dephased;
};

// forward measures the first party of the declared bipartition, backward the
// second.
enum class DeficitKind { forward, backward };

// Value of an optimized measure together with the achieving basis, kept for
// audit. converged is false when the basis search failed to settle or the
// value came out below -1e-6; values in (-1e-6, 0) are clamped to 0.
struct MeasureResult {
    double value = 0.0;
    MeasurementBasis basis;
    bool converged = false;
    long evals = 0;
};

// Measures the qubit at subsystem `party` of rho in the given basis.
// Throws std::invalid_argument if that subsystem is not two-dimensional.
MeasurementOutcome measure_qubit(const DensityMatrix& rho, int party,
                                 const MeasurementBasis& basis);

// Quantum discord with measurement on `measured` (a qubit):
//   D = S(rho_measured) - S(rho) + min over bases of sum_i p_i S(conditional_i),
// in bits.
MeasureResult discord(const DensityMatrix& rho, int measured,
                      const OptimizerConfig& cfg = {});

// One-way quantum work-deficit across the bipartition (split_first : rest):
//   min over bases of S(dephased) - S(rho), in bits,
// with the dephasing applied to the first party (forward) or the second
// (backward). The measured party must consist of exactly one qubit subsystem.
MeasureResult one_way_deficit(const DensityMatrix& rho, DeficitKind kind,
                              const std::vector<int>& split_first,
                              const OptimizerConfig& cfg = {});

// Wootters concurrence of a two-qubit state, in [0, 1].
double concurrence(const DensityMatrix& rho);

// Entanglement of formation of a two-qubit state, in bits:
//   h((1 + sqrt(1 - C^2)) / 2).
double eof_two_qubit(const DensityMatrix& rho);

// CKW tangle of a three-qubit pure state with the given nodal party:
//   4 det(rho_nodal) - C^2(nodal, other1) - C^2(nodal, other2).
// Non-negative up to roundoff for every input.
double tangle_ckw(const PureState& psi, int nodal);

// Koashi-Winter residual of a three-qubit pure state (parties A=0, B=1, C=2):
//   E^f(rho_AB) - min over bases on C of sum_i p_i E(psi_AB|i),
// where E is the entanglement entropy of the conditional pure state. Zero up
// to optimizer tolerance for every input.
double kw_residual(const PureState& psi, const OptimizerConfig& cfg = {});

// Fixed-basis functionals, used to cross-check the optimized quantities.
// deficit_functional evaluates S(dephased) - S(rho) by a full eigensolve of
// the dephased state, deliberately not reusing the conditional-block
// decomposition that the optimized path relies on.
double deficit_functional(const DensityMatrix& rho, int measured,
                          const MeasurementBasis& basis);
double discord_functional(const DensityMatrix& rho, int measured,
                          const MeasurementBasis& basis);

namespace detail {

// Branch blocks of a qubit measurement without forming the dephased state:
// block_i = (<v_i| at the measured slot) rho (|v_i> at the measured slot),
// probs_i = tr(block_i). Rows/columns run over the unmeasured subsystems in
// their original order.
struct MeasuredBlocks {
    std::array<Matrix, 2> blocks;
    std::array<double, 2> probs{};
};
MeasuredBlocks measured_blocks(const DensityMatrix& rho, int party,
                               const MeasurementBasis& basis);

// H(probs) + sum_i p_i S(block_i / p_i): equals S(dephased) for rank-1
// projective measurements because the dephased state is block diagonal in
// the measured basis.
double dephased_entropy(const MeasuredBlocks& mb);

// sum_i p_i S(block_i / p_i), the basis-dependent term of discord.
double avg_conditional_entropy(const MeasuredBlocks& mb);

}  // namespace detail

}  // namespace qmono
