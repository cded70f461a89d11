#include "qmono/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qmono {

namespace {

long long dims_product(const std::vector<int>& dims) {
    long long p = 1;
    for (int d : dims) p *= d;
    return p;
}

void check_dims(const std::vector<int>& dims, long long expected) {
    if (dims.empty()) {
        throw std::invalid_argument("subsystem dimension list is empty");
    }
    for (int d : dims) {
        if (d < 2) {
            throw std::invalid_argument("subsystem dimension must be >= 2");
        }
    }
    if (dims_product(dims) != expected) {
        throw std::invalid_argument("product of subsystem dimensions (" +
                                    std::to_string(dims_product(dims)) +
                                    ") does not match vector/matrix size (" +
                                    std::to_string(expected) + ")");
    }
}

// Mixed-radix offsets of each subsystem digit into the flat index,
// leftmost factor first.
std::vector<long long> strides_of(const std::vector<int>& dims) {
    std::vector<long long> s(dims.size(), 1);
    for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i) {
        s[i] = s[i + 1] * dims[i + 1];
    }
    return s;
}

}  // namespace

PureState::PureState(Vector a, std::vector<int> d) : amps(std::move(a)), dims(std::move(d)) {
    check_dims(dims, amps.size());
    double norm2 = amps.squaredNorm();
    if (std::abs(norm2 - 1.0) > 1e-12) {
        throw std::invalid_argument("state vector is not normalized (|norm^2 - 1| = " +
                                    std::to_string(std::abs(norm2 - 1.0)) + ")");
    }
}

DensityMatrix::DensityMatrix(Matrix m, std::vector<int> d) : mat(std::move(m)), dims(std::move(d)) {
    if (mat.rows() != mat.cols()) {
        throw std::invalid_argument("density matrix must be square");
    }
    check_dims(dims, mat.rows());
    if (!detail::is_hermitian(mat, 1e-10)) {
        throw std::invalid_argument("density matrix is not Hermitian within 1e-10");
    }
    double tr = mat.trace().real();
    if (std::abs(tr - 1.0) > 1e-10) {
        throw std::invalid_argument("density matrix trace deviates from 1 by " +
                                    std::to_string(std::abs(tr - 1.0)));
    }
}

double Spectrum::sum() const {
    return std::accumulate(values.begin(), values.end(), 0.0);
}

DensityMatrix to_density(const PureState& psi) {
    Matrix m = psi.amps * psi.amps.adjoint();
    return DensityMatrix(std::move(m), psi.dims);
}

Matrix kron(const Matrix& a, const Matrix& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols()) {
        throw std::invalid_argument("kron expects square operands");
    }
    const Eigen::Index n = a.rows(), m = b.rows();
    Matrix out(n * m, n * m);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            out.block(i * m, j * m, m, m) = a(i, j) * b;
        }
    }
    return out;
}

DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b) {
    std::vector<int> dims = a.dims;
    dims.insert(dims.end(), b.dims.begin(), b.dims.end());
    return DensityMatrix(kron(a.mat, b.mat), std::move(dims));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    const int n = rho.num_parties();
    if (keep.empty()) {
        throw std::invalid_argument("partial_trace: keep set is empty");
    }
    std::vector<int> kept = keep;
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    if (kept.front() < 0 || kept.back() >= n) {
        throw std::invalid_argument("partial_trace: subsystem index out of range");
    }

    std::vector<int> traced;
    for (int i = 0; i < n; ++i) {
        if (!std::binary_search(kept.begin(), kept.end(), i)) traced.push_back(i);
    }
    if (traced.empty()) {
        return rho;
    }

    const auto strides = strides_of(rho.dims);
    std::vector<int> kdims, tdims;
    for (int i : kept) kdims.push_back(rho.dims[i]);
    for (int i : traced) tdims.push_back(rho.dims[i]);
    const long long dk = dims_product(kdims);
    const long long dt = dims_product(tdims);

    // Flat-index contribution of every kept / traced multi-index.
    auto offsets = [&](const std::vector<int>& subs, const std::vector<int>& sdims,
                       long long count) {
        std::vector<long long> off(count, 0);
        for (long long v = 0; v < count; ++v) {
            long long rem = v;
            for (int j = static_cast<int>(subs.size()) - 1; j >= 0; --j) {
                off[v] += (rem % sdims[j]) * strides[subs[j]];
                rem /= sdims[j];
            }
        }
        return off;
    };
    const auto koff = offsets(kept, kdims, dk);
    const auto toff = offsets(traced, tdims, dt);

    Matrix out = Matrix::Zero(dk, dk);
    for (long long r = 0; r < dk; ++r) {
        for (long long c = 0; c < dk; ++c) {
            Complex acc = 0.0;
            for (long long t = 0; t < dt; ++t) {
                acc += rho.mat(koff[r] + toff[t], koff[c] + toff[t]);
            }
            out(r, c) = acc;
        }
    }
    return DensityMatrix(std::move(out), std::move(kdims));
}

Spectrum eig_hermitian(const Matrix& m) {
    if (!detail::is_hermitian(m, 1e-8)) {
        throw std::invalid_argument("eig_hermitian: matrix is not Hermitian within 1e-8");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eig_hermitian: eigensolver failed");
    }
    const auto& ev = solver.eigenvalues();
    Spectrum s;
    s.values.assign(ev.data(), ev.data() + ev.size());
    std::reverse(s.values.begin(), s.values.end());
    return s;
}

Spectrum eig_hermitian(const Matrix& m, Matrix& eigenvectors) {
    if (!detail::is_hermitian(m, 1e-8)) {
        throw std::invalid_argument("eig_hermitian: matrix is not Hermitian within 1e-8");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eig_hermitian: eigensolver failed");
    }
    const auto& ev = solver.eigenvalues();
    Spectrum s;
    s.values.assign(ev.data(), ev.data() + ev.size());
    std::reverse(s.values.begin(), s.values.end());
    eigenvectors = solver.eigenvectors().rowwise().reverse();
    return s;
}

double vn_entropy(const DensityMatrix& rho) {
    Spectrum s = eig_hermitian(rho.mat);
    return detail::entropy_of_values(s.values, 1e-8);
}

double shannon_entropy(std::span<const double> p) {
    double sum = 0.0;
    for (double v : p) {
        if (v < -1e-12) {
            throw std::invalid_argument("shannon_entropy: negative probability");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("shannon_entropy: probabilities sum to " +
                                    std::to_string(sum));
    }
    return detail::entropy_of_values(p, 1e-12);
}

double binary_entropy(double p) {
    const double q = 1.0 - p;
    double h = 0.0;
    if (p > 0.0) h -= p * std::log2(p);
    if (q > 0.0) h -= q * std::log2(q);
    return h;
}

Matrix sqrtm_psd(const Matrix& m) {
    if (!detail::is_hermitian(m, 1e-8)) {
        throw std::invalid_argument("sqrtm_psd: matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("sqrtm_psd: eigensolver failed");
    }
    Eigen::VectorXd ev = solver.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -1e-8) {
            throw std::invalid_argument("sqrtm_psd: eigenvalue " + std::to_string(ev(i)) +
                                        " below PSD tolerance");
        }
        ev(i) = std::sqrt(std::max(ev(i), 0.0));
    }
    const Matrix& v = solver.eigenvectors();
    return v * ev.asDiagonal() * v.adjoint();
}

namespace detail {

bool is_hermitian(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double entropy_of_values(std::span<const double> vals, double clamp_tol) {
    double h = 0.0;
    for (double v : vals) {
        if (v < -clamp_tol) {
            throw std::domain_error("entropy: eigenvalue " + std::to_string(v) +
                                    " below clamp tolerance");
        }
        if (v > 0.0) h -= v * std::log2(v);
    }
    return h;
}

double entropy_hermitian(const Matrix& m) {
    if (m.rows() == 2) {
        Eigen::Matrix2cd m2 = m;
        return entropy_2x2(m2);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    double h = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        double v = ev(i);
        if (v > 0.0) h -= v * std::log2(v);
    }
    return h;
}

std::pair<double, double> eigvals_2x2(const Eigen::Matrix2cd& m) {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double half = 0.5 * (a + d);
    const double rad = std::sqrt(std::max(0.25 * (a - d) * (a - d) + std::norm(m(0, 1)), 0.0));
    return {half + rad, half - rad};
}

double entropy_2x2(const Eigen::Matrix2cd& m) {
    auto [l1, l2] = eigvals_2x2(m);
    double h = 0.0;
    if (l1 > 0.0) h -= l1 * std::log2(l1);
    if (l2 > 0.0) h -= l2 * std::log2(l2);
    return h;
}

}  // namespace detail

}  // namespace qmono
