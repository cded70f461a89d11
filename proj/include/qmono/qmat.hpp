#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace qmono {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Normalized state vector over an ordered list of subsystems.
// Subsystem 0 is the leftmost tensor factor; for qubits the basis index
// of |abc> is a*4 + b*2 + c.
struct PureState {
    Vector amps;
    std::vector<int> dims;

    PureState(Vector a, std::vector<int> d);

    int dim() const { return static_cast<int>(amps.size()); }
    int num_parties() const { return static_cast<int>(dims.size()); }
};

// Hermitian, unit-trace, positive-semidefinite matrix with the same
// subsystem bookkeeping as PureState. Hermiticity and trace are checked
// on construction; positivity is enforced where the spectrum is taken.
struct DensityMatrix {
    Matrix mat;
    std::vector<int> dims;

    DensityMatrix(Matrix m, std::vector<int> d);

    int dim() const { return static_cast<int>(mat.rows()); }
    int num_parties() const { return static_cast<int>(dims.size()); }
};

// Real eigenvalues sorted in descending order.
struct Spectrum {
    std::vector<double> values;

    double sum() const;
};

DensityMatrix to_density(const PureState& psi);

Matrix kron(const Matrix& a, const Matrix& b);
DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b);

// Trace out every subsystem not listed in `keep`; kept subsystems stay in
// their original order.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

Spectrum eig_hermitian(const Matrix& m);
Spectrum eig_hermitian(const Matrix& m, Matrix& eigenvectors);

// Entropies in bits (base-2 logs throughout).
double vn_entropy(const DensityMatrix& rho);
double shannon_entropy(std::span<const double> p);
double binary_entropy(double p);

Matrix sqrtm_psd(const Matrix& m);

namespace detail {

// Entropy of a Hermitian matrix given by value, without the DensityMatrix
// construction checks. Hot path for the basis optimizers.
double entropy_hermitian(const Matrix& m);

// Closed-form eigenvalues of a 2x2 Hermitian matrix, descending.
std::pair<double, double> eigvals_2x2(const Eigen::Matrix2cd& m);

double entropy_2x2(const Eigen::Matrix2cd& m);

bool is_hermitian(const Matrix& m, double tol);

// -sum p log2 p with negative roundoff clamped at `clamp_tol`.
double entropy_of_values(std::span<const double> vals, double clamp_tol);

}  // namespace detail

}  // namespace qmono
