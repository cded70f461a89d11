#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qmono/qmat.hpp"
#include "qmono/states.hpp"

using namespace qmono;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("generalized W amplitudes sit on |011>, |101>, |110>") {
    const PureState psi = generalized_w({kPi / 6.0, kPi / 3.0});
    REQUIRE(psi.dims == std::vector<int>{2, 2, 2});
    CHECK(psi.amps(3).real() == doctest::Approx(0.25));
    CHECK(psi.amps(5).real() == doctest::Approx(0.43301270189221924));
    CHECK(psi.amps(6).real() == doctest::Approx(0.8660254037844387));
    for (int i : {0, 1, 2, 4, 7}) CHECK(std::abs(psi.amps(i)) == 0.0);
    CHECK(psi.amps.norm() == doctest::Approx(1.0));
}

TEST_CASE("generalized W parameter ranges are half-open from below") {
    CHECK_THROWS_AS(generalized_w({0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(generalized_w({kPi / 4.0 + 1e-6, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(generalized_w({0.5, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(generalized_w({0.5, 2.0 * kPi + 1e-6}), std::invalid_argument);
    CHECK_NOTHROW(generalized_w({kPi / 4.0, 2.0 * kPi}));
}

TEST_CASE("generalized W single-party marginals pin the slot convention") {
    const double theta = 0.5, phi = 1.3;
    const DensityMatrix rho = to_density(generalized_w({theta, phi}));
    const double s2 = std::sin(theta) * std::sin(theta);

    const DensityMatrix m0 = partial_trace(rho, {0});
    CHECK(m0.mat(0, 0).real() ==
          doctest::Approx(s2 * std::cos(phi) * std::cos(phi)).epsilon(1e-12));
    const DensityMatrix m1 = partial_trace(rho, {1});
    CHECK(m1.mat(0, 0).real() ==
          doctest::Approx(s2 * std::sin(phi) * std::sin(phi)).epsilon(1e-12));

    // The third slot is the nodal one: diag(cos^2 theta, sin^2 theta).
    const DensityMatrix m2 = partial_trace(rho, {2});
    CHECK(m2.mat(0, 0).real() == doctest::Approx(1.0 - s2).epsilon(1e-12));
    CHECK(m2.mat(1, 1).real() == doctest::Approx(s2).epsilon(1e-12));
    CHECK(std::abs(m2.mat(0, 1)) < 1e-14);
}

TEST_CASE("named states") {
    const PureState w = w_state();
    for (int i : {1, 2, 4}) {
        CHECK(w.amps(i).real() == doctest::Approx(1.0 / std::sqrt(3.0)));
    }
    const PureState ghz = ghz_state();
    CHECK(ghz.amps(0).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(ghz.amps(7).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("w_class places amplitudes and validates norm") {
    const PureState psi = w_class(0.5, 0.5, 0.5, 0.5);
    CHECK(psi.amps(1).real() == doctest::Approx(0.5));  // a |001>
    CHECK(psi.amps(2).real() == doctest::Approx(0.5));  // b |010>
    CHECK(psi.amps(4).real() == doctest::Approx(0.5));  // c |100>
    CHECK(psi.amps(0).real() == doctest::Approx(0.5));  // d |000>
    CHECK_THROWS_AS(w_class(1.0, 1.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("ghz_class places amplitudes, phase on |100>") {
    const PureState psi = ghz_class({0.6, 0.8, 0.0, 0.0, 0.0}, kPi / 2.0);
    CHECK(psi.amps(0).real() == doctest::Approx(0.6));
    CHECK(psi.amps(4).imag() == doctest::Approx(0.8));
    CHECK(std::abs(psi.amps(4).real()) < 1e-15);
    CHECK_THROWS_AS(ghz_class({1.0, 1.0, 0.0, 0.0, 0.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ghz_class({-0.6, 0.8, 0.0, 0.0, 0.0}, 0.0), std::invalid_argument);
}

TEST_CASE("haar sampling is a pure function of seed and counter") {
    SeededSampler a{42, 0};
    SeededSampler b{42, 0};
    const PureState p1 = haar_random_pure(a, 3);
    const PureState p2 = haar_random_pure(b, 3);
    CHECK((p1.amps - p2.amps).norm() == 0.0);
    CHECK(a.counter == 1);

    const PureState p3 = haar_random_pure(b, 3);
    CHECK((p1.amps - p3.amps).norm() > 1e-3);

    SeededSampler c{43, 0};
    const PureState p4 = haar_random_pure(c, 3);
    CHECK((p1.amps - p4.amps).norm() > 1e-3);

    CHECK(p1.amps.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(haar_random_pure(a, 4), std::invalid_argument);
}

TEST_CASE("haar marginal purity matches the known mean") {
    // E[tr rho_A^2] = (dA + dB) / (dA dB + 1): 2/3 for a 2|4 split.
    SeededSampler s{7, 0};
    const int n = 2000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const PureState psi = haar_random_pure(s, 3);
        const DensityMatrix m = partial_trace(to_density(psi), {0});
        acc += (m.mat * m.mat).trace().real();
    }
    CHECK(acc / n == doctest::Approx(2.0 / 3.0).epsilon(0.02));
}

TEST_CASE("marginal spectra of a pure bipartite state coincide") {
    SeededSampler s{8, 0};
    for (int i = 0; i < 10; ++i) {
        const PureState psi = haar_random_pure(s, 2);
        const DensityMatrix rho = to_density(psi);
        CHECK(vn_entropy(partial_trace(rho, {0})) ==
              doctest::Approx(vn_entropy(partial_trace(rho, {1}))).epsilon(1e-10));
    }
}

TEST_CASE("sample_genw covers the half-open ranges uniformly") {
    SeededSampler s{21, 0};
    const int n = 4000;
    double mean_theta = 0.0, mean_phi = 0.0;
    for (int i = 0; i < n; ++i) {
        const GenWParams p = sample_genw(s);
        REQUIRE(p.theta > 0.0);
        REQUIRE(p.theta <= kPi / 4.0);
        REQUIRE(p.phi > 0.0);
        REQUIRE(p.phi <= 2.0 * kPi);
        mean_theta += p.theta;
        mean_phi += p.phi;
    }
    // 5 sigma of the mean of U(0, hi] is 5 * hi / sqrt(12 n).
    CHECK(std::abs(mean_theta / n - kPi / 8.0) < 5.0 * (kPi / 4.0) / std::sqrt(12.0 * n));
    CHECK(std::abs(mean_phi / n - kPi) < 5.0 * (2.0 * kPi) / std::sqrt(12.0 * n));
}

TEST_CASE("random_density_matrix yields valid states") {
    SeededSampler s{31, 0};
    for (int i = 0; i < 5; ++i) {
        const DensityMatrix rho = random_density_matrix(s, {2, 2});
        CHECK((rho.mat - rho.mat.adjoint()).norm() < 1e-12);
        CHECK(rho.mat.trace().real() == doctest::Approx(1.0));
        const Spectrum spec = eig_hermitian(rho.mat);
        for (double v : spec.values) CHECK(v > -1e-12);
    }
}
