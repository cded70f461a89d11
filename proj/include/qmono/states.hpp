#pragma once

#include "qmono/qmat.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <utility>

namespace qmono {

// Two-angle parameterization of the generalized W family,
// sin(t)cos(p)|011> + sin(t)sin(p)|101> + cos(t)|110>,
// with t in (0, pi/4] and p in (0, 2pi].
struct GenWParams {
    double theta;
    double phi;
};

// Counter-based sampler handle: sample i is a pure function of
// (seed, i), so parallel draws reproduce the serial stream at any
// worker count. Each draw consumes one counter value.
struct SeededSampler {
    std::uint64_t seed = 0;
    std::uint64_t counter = 0;
};

// PRNG pipeline identifier recorded in every output manifest.
inline constexpr const char* kPrngName = "splitmix64->mt19937_64, Box-Muller normals";

PureState generalized_w(const GenWParams& p);

// W-class canonical form a|001> + b|010> + c|100> + d|000>.
PureState w_class(Complex a, Complex b, Complex c, Complex d);

// GHZ-class canonical form
// l0|000> + l1 e^{i phase}|100> + l2|101> + l3|110> + l4|111>.
PureState ghz_class(const std::array<double, 5>& lambda, double phase);

PureState w_state();
PureState ghz_state();

// Haar-random pure state on 2 or 3 qubits via normalized independent
// standard complex Gaussian amplitudes.
PureState haar_random_pure(SeededSampler& s, int n_qubits);

// Uniform product measure on (0, pi/4] x (0, 2pi].
GenWParams sample_genw(SeededSampler& s);

// Hilbert-Schmidt random density matrix (Ginibre G: rho = GG^/tr GG^).
DensityMatrix random_density_matrix(SeededSampler& s, const std::vector<int>& dims);

namespace detail {

std::uint64_t splitmix64(std::uint64_t& state);
std::mt19937_64 engine_at(std::uint64_t seed, std::uint64_t counter);
double next_unit(std::mt19937_64& eng);  // [0, 1)
std::pair<double, double> next_gaussian_pair(std::mt19937_64& eng);

}  // namespace detail

}  // namespace qmono
