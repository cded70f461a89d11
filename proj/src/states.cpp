#include "qmono/states.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qmono {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

PureState generalized_w(const GenWParams& p) {
    if (!(p.theta > 0.0) || p.theta > kPi / 4.0) {
        throw std::invalid_argument("generalized_w: theta outside (0, pi/4]");
    }
    if (!(p.phi > 0.0) || p.phi > 2.0 * kPi) {
        throw std::invalid_argument("generalized_w: phi outside (0, 2pi]");
    }
    Vector amps = Vector::Zero(8);
    amps(3) = std::sin(p.theta) * std::cos(p.phi);  // |011>
    amps(5) = std::sin(p.theta) * std::sin(p.phi);  // |101>
    amps(6) = std::cos(p.theta);                    // |110>
    return PureState(std::move(amps), {2, 2, 2});
}

PureState w_class(Complex a, Complex b, Complex c, Complex d) {
    const double norm2 = std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
    if (std::abs(norm2 - 1.0) > 1e-10) {
        throw std::invalid_argument("w_class: amplitudes are not normalized");
    }
    Vector amps = Vector::Zero(8);
    amps(1) = a;  // |001>
    amps(2) = b;  // |010>
    amps(4) = c;  // |100>
    amps(0) = d;  // |000>
    return PureState(std::move(amps), {2, 2, 2});
}

PureState ghz_class(const std::array<double, 5>& lambda, double phase) {
    double norm2 = 0.0;
    for (double l : lambda) {
        if (l < 0.0) {
            throw std::invalid_argument("ghz_class: lambda must be non-negative");
        }
        norm2 += l * l;
    }
    if (std::abs(norm2 - 1.0) > 1e-10) {
        throw std::invalid_argument("ghz_class: lambdas are not normalized");
    }
    Vector amps = Vector::Zero(8);
    amps(0) = lambda[0];                                             // |000>
    amps(4) = lambda[1] * Complex(std::cos(phase), std::sin(phase)); // |100>
    amps(5) = lambda[2];                                             // |101>
    amps(6) = lambda[3];                                             // |110>
    amps(7) = lambda[4];                                             // |111>
    return PureState(std::move(amps), {2, 2, 2});
}

PureState w_state() {
    const double r = 1.0 / std::sqrt(3.0);
    return w_class(r, r, r, 0.0);
}

PureState ghz_state() {
    const double r = 1.0 / std::sqrt(2.0);
    return ghz_class({r, 0.0, 0.0, 0.0, r}, 0.0);
}

PureState haar_random_pure(SeededSampler& s, int n_qubits) {
    if (n_qubits != 2 && n_qubits != 3) {
        throw std::invalid_argument("haar_random_pure: n_qubits must be 2 or 3");
    }
    auto eng = detail::engine_at(s.seed, s.counter);
    ++s.counter;
    const int dim = 1 << n_qubits;
    Vector amps(dim);
    for (int i = 0; i < dim; ++i) {
        auto [re, im] = detail::next_gaussian_pair(eng);
        amps(i) = Complex(re, im);
    }
    amps /= amps.norm();
    return PureState(std::move(amps), std::vector<int>(n_qubits, 2));
}

GenWParams sample_genw(SeededSampler& s) {
    auto eng = detail::engine_at(s.seed, s.counter);
    ++s.counter;
    // 1 - u maps [0,1) onto the half-open-from-below ranges (0, hi].
    const double theta = (kPi / 4.0) * (1.0 - detail::next_unit(eng));
    const double phi = 2.0 * kPi * (1.0 - detail::next_unit(eng));
    return GenWParams{theta, phi};
}

DensityMatrix random_density_matrix(SeededSampler& s, const std::vector<int>& dims) {
    auto eng = detail::engine_at(s.seed, s.counter);
    ++s.counter;
    long long dim = 1;
    for (int d : dims) dim *= d;
    Matrix g(dim, dim);
    for (long long i = 0; i < dim; ++i) {
        for (long long j = 0; j < dim; ++j) {
            auto [re, im] = detail::next_gaussian_pair(eng);
            g(i, j) = Complex(re, im);
        }
    }
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    // Symmetrize away the last bits of roundoff.
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix(std::move(rho), dims);
}

namespace detail {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::mt19937_64 engine_at(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t state = seed;
    std::uint64_t a = splitmix64(state);
    state ^= counter * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL;
    std::uint64_t b = splitmix64(state);
    return std::mt19937_64(a ^ b);
}

double next_unit(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

std::pair<double, double> next_gaussian_pair(std::mt19937_64& eng) {
    const double u1 = 1.0 - next_unit(eng);  // (0, 1], keeps log finite
    const double u2 = next_unit(eng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(a), r * std::sin(a)};
}

}  // namespace detail

}  // namespace qmono
