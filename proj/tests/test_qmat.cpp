#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "qmono/qmat.hpp"
#include "qmono/states.hpp"

using namespace qmono;

namespace {

DensityMatrix diag2(double p) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = p;
    m(1, 1) = 1.0 - p;
    return DensityMatrix(std::move(m), {2});
}

}  // namespace

TEST_CASE("PureState validates dimensions and norm") {
    Vector good(4);
    good << 1.0, 0.0, 0.0, 0.0;
    CHECK_NOTHROW(PureState(good, {2, 2}));
    CHECK_THROWS_AS(PureState(good, {2, 3}), std::invalid_argument);

    Vector unnormalized(2);
    unnormalized << 1.0, 1.0;
    CHECK_THROWS_AS(PureState(unnormalized, {2}), std::invalid_argument);
}

TEST_CASE("DensityMatrix validates shape, Hermiticity and trace") {
    Matrix ok = Matrix::Identity(2, 2) / 2.0;
    CHECK_NOTHROW(DensityMatrix(ok, {2}));

    Matrix bad_trace = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(DensityMatrix(bad_trace, {2}), std::invalid_argument);

    Matrix nonherm = Matrix::Zero(2, 2);
    nonherm(0, 0) = 0.5;
    nonherm(1, 1) = 0.5;
    nonherm(0, 1) = Complex(0.3, 0.0);
    nonherm(1, 0) = Complex(0.0, 0.3);
    CHECK_THROWS_AS(DensityMatrix(nonherm, {2}), std::invalid_argument);

    CHECK_THROWS_AS(DensityMatrix(Matrix::Identity(4, 4) / 4.0, {2}), std::invalid_argument);
}

TEST_CASE("to_density builds a projector") {
    Vector v(2);
    v << Complex(1.0 / std::sqrt(2.0), 0.0), Complex(0.0, 1.0 / std::sqrt(2.0));
    const DensityMatrix rho = to_density(PureState(v, {2}));
    CHECK((rho.mat * rho.mat - rho.mat).norm() < 1e-14);
    CHECK(rho.mat.trace().real() == doctest::Approx(1.0));
}

TEST_CASE("kron agrees with the direct definition") {
    Matrix a(2, 2), b(2, 2);
    a << 1.0, 2.0, 3.0, 4.0;
    b << 0.0, Complex(0.0, 1.0), 5.0, 6.0;
    const Matrix k = kron(a, b);
    REQUIRE(k.rows() == 4);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            CHECK(std::abs(k(i, j) - a(i / 2, j / 2) * b(i % 2, j % 2)) < 1e-15);
        }
    }

    const DensityMatrix prod = kron(diag2(0.25), diag2(0.5));
    REQUIRE(prod.dims == std::vector<int>{2, 2});
    CHECK(prod.mat(0, 0).real() == doctest::Approx(0.125));
    CHECK(prod.mat(3, 3).real() == doctest::Approx(0.375));
}

TEST_CASE("partial_trace recovers factors of a product state") {
    const DensityMatrix a = diag2(0.3);
    const DensityMatrix b = diag2(0.8);
    const DensityMatrix ab = kron(a, b);

    const DensityMatrix ta = partial_trace(ab, {0});
    const DensityMatrix tb = partial_trace(ab, {1});
    CHECK((ta.mat - a.mat).norm() < 1e-12);
    CHECK((tb.mat - b.mat).norm() < 1e-12);
}

TEST_CASE("partial_trace of Bell and W states") {
    Vector bell(4);
    bell << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
    const DensityMatrix rho = to_density(PureState(bell, {2, 2}));
    const DensityMatrix m = partial_trace(rho, {0});
    CHECK((m.mat - Matrix::Identity(2, 2) / 2.0).norm() < 1e-12);

    const DensityMatrix w = to_density(w_state());
    const DensityMatrix w2 = partial_trace(w, {2});
    CHECK(w2.mat(0, 0).real() == doctest::Approx(2.0 / 3.0));
    CHECK(w2.mat(1, 1).real() == doctest::Approx(1.0 / 3.0));

    // Kept subsystems stay in original order: tracing the middle qubit of a
    // three-factor product leaves factor0 x factor2.
    const DensityMatrix triple = kron(kron(diag2(0.1), diag2(0.5)), diag2(0.9));
    const DensityMatrix kept = partial_trace(triple, {0, 2});
    CHECK((kept.mat - kron(diag2(0.1), diag2(0.9)).mat).norm() < 1e-12);
}

TEST_CASE("eig_hermitian sorts descending and returns matching vectors") {
    Matrix m(2, 2);
    m << 2.0, 1.0, 1.0, 2.0;
    const Spectrum s = eig_hermitian(m);
    REQUIRE(s.values.size() == 2);
    CHECK(s.values[0] == doctest::Approx(3.0));
    CHECK(s.values[1] == doctest::Approx(1.0));
    CHECK(s.sum() == doctest::Approx(4.0));

    Matrix vecs;
    const Spectrum s2 = eig_hermitian(m, vecs);
    for (int i = 0; i < 2; ++i) {
        CHECK((m * vecs.col(i) - s2.values[i] * vecs.col(i)).norm() < 1e-12);
    }

    Matrix nonherm(2, 2);
    nonherm << 0.0, 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(eig_hermitian(nonherm), std::invalid_argument);
}

TEST_CASE("entropies in bits") {
    CHECK(vn_entropy(diag2(0.5)) == doctest::Approx(1.0));
    CHECK(vn_entropy(diag2(1.0)) == doctest::Approx(0.0));
    CHECK(vn_entropy(diag2(0.25)) == doctest::Approx(0.8112781244591328));
    CHECK(vn_entropy(DensityMatrix(Matrix::Identity(4, 4) / 4.0, {2, 2})) ==
          doctest::Approx(2.0));

    const double p[] = {0.5, 0.5};
    CHECK(shannon_entropy(p) == doctest::Approx(1.0));
    const double bad_sum[] = {0.5, 0.6};
    CHECK_THROWS_AS(shannon_entropy(bad_sum), std::invalid_argument);
    const double negative[] = {1.2, -0.2};
    CHECK_THROWS_AS(shannon_entropy(negative), std::invalid_argument);

    CHECK(binary_entropy(0.0) == doctest::Approx(0.0));
    CHECK(binary_entropy(1.0) == doctest::Approx(0.0));
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
    CHECK(binary_entropy(0.25) == doctest::Approx(0.8112781244591328));
}

TEST_CASE("entropy is additive over tensor products") {
    SeededSampler s{11, 0};
    for (int i = 0; i < 5; ++i) {
        const DensityMatrix a = random_density_matrix(s, {2});
        const DensityMatrix b = random_density_matrix(s, {2});
        CHECK(vn_entropy(kron(a, b)) ==
              doctest::Approx(vn_entropy(a) + vn_entropy(b)).epsilon(1e-9));
    }
}

TEST_CASE("sqrtm_psd squares back and rejects negative spectra") {
    SeededSampler s{12, 0};
    const DensityMatrix rho = random_density_matrix(s, {2, 2});
    const Matrix root = sqrtm_psd(rho.mat);
    CHECK((root * root - rho.mat).norm() < 1e-10);

    Matrix neg = Matrix::Zero(2, 2);
    neg(0, 0) = 1.0;
    neg(1, 1) = -1.0;
    CHECK_THROWS_AS(sqrtm_psd(neg), std::invalid_argument);
}

TEST_CASE("2x2 closed-form eigenvalues match the solver") {
    SeededSampler s{13, 0};
    for (int i = 0; i < 10; ++i) {
        const DensityMatrix rho = random_density_matrix(s, {2});
        const auto [hi, lo] = detail::eigvals_2x2(rho.mat);
        const Spectrum ref = eig_hermitian(rho.mat);
        CHECK(hi == doctest::Approx(ref.values[0]).epsilon(1e-12));
        CHECK(lo == doctest::Approx(ref.values[1]).epsilon(1e-12));
        CHECK(detail::entropy_2x2(rho.mat) == doctest::Approx(vn_entropy(rho)).epsilon(1e-10));
    }
}
