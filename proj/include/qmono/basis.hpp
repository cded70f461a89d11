#pragma once

#include <Eigen/Dense>

#include <complex>

namespace qmono {

// Rank-1 projective measurement direction on one qubit. The projectors
// P0 = |v0><v0| and P1 = I - P0 = |v1><v1| with
// |v0> = cos(t/2)|0> + e^{ip} sin(t/2)|1>.
struct MeasurementBasis {
    double t = 0.0;  // polar angle, [0, pi]
    double p = 0.0;  // azimuth, [0, 2pi)

    Eigen::Vector2cd ket0() const {
        const double c = std::cos(0.5 * t), s = std::sin(0.5 * t);
        return {std::complex<double>(c, 0.0),
                std::complex<double>(std::cos(p) * s, std::sin(p) * s)};
    }

    Eigen::Vector2cd ket1() const {
        const double c = std::cos(0.5 * t), s = std::sin(0.5 * t);
        return {std::complex<double>(-s, 0.0),
                std::complex<double>(std::cos(p) * c, std::sin(p) * c)};
    }

    Eigen::Matrix2cd projector0() const {
        const auto v = ket0();
        return v * v.adjoint();
    }

    Eigen::Matrix2cd projector1() const {
        const auto v = ket1();
        return v * v.adjoint();
    }
};

}  // namespace qmono
