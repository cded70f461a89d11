#pragma once

#include "qmono/basis.hpp"

#include <functional>

namespace qmono {

// Coarse grid plus simplex refinement over the two measurement angles.
struct OptimizerConfig {
    int grid_t = 24;
    int grid_p = 48;
    double refine_tol = 1e-6;
    int max_iters = 500;

    void validate() const;
};

struct OptResult {
    double value = 0.0;
    MeasurementBasis arg{};
    long evals = 0;
    bool converged = true;
};

// Deterministic minimization: evaluate the (grid_t x grid_p) lattice over
// (t, p), then run Nelder-Mead refinements from the 3 best lattice points.
// The returned value never exceeds any lattice sample.
OptResult minimize_over_basis(const std::function<double(const MeasurementBasis&)>& obj,
                              const OptimizerConfig& cfg = {});

}  // namespace qmono
