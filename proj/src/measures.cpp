#include "qmono/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace qmono {

namespace {

constexpr double kZeroBranch = 1e-14;   // branch probability treated as empty
constexpr double kNegClamp = -1e-6;     // most negative value clamped to 0

// Full-index bookkeeping for one measured slot: full = uoff[u] + s * stride_q,
// where u runs over the unmeasured subsystems in their original order and
// s is the measured qubit's basis index.
struct SlotLayout {
    std::vector<int> uoff;
    int stride_q = 0;
};

SlotLayout slot_layout(const std::vector<int>& dims, int party) {
    const int n = static_cast<int>(dims.size());
    std::vector<int> stride(n);
    int total = 1;
    for (int k = n - 1; k >= 0; --k) {
        stride[k] = total;
        total *= dims[k];
    }
    std::vector<int> udims, ustride;
    for (int k = 0; k < n; ++k) {
        if (k != party) {
            udims.push_back(dims[k]);
            ustride.push_back(stride[k]);
        }
    }
    SlotLayout layout;
    layout.stride_q = stride[party];
    layout.uoff.assign(total / dims[party], 0);
    for (size_t u = 0; u < layout.uoff.size(); ++u) {
        int rem = static_cast<int>(u), off = 0;
        for (int k = static_cast<int>(udims.size()) - 1; k >= 0; --k) {
            off += (rem % udims[k]) * ustride[k];
            rem /= udims[k];
        }
        layout.uoff[u] = off;
    }
    return layout;
}

void fill_blocks(const Matrix& mat, const SlotLayout& layout, const MeasurementBasis& basis,
                 std::array<Matrix, 2>& blocks, std::array<double, 2>& probs) {
    const std::array<Eigen::Vector2cd, 2> v = {basis.ket0(), basis.ket1()};
    const int d = static_cast<int>(layout.uoff.size());
    const int sq = layout.stride_q;
    for (int i = 0; i < 2; ++i) {
        Matrix& block = blocks[i];
        block.resize(d, d);
        for (int r = 0; r < d; ++r) {
            for (int c = 0; c < d; ++c) {
                Complex acc(0.0, 0.0);
                for (int s = 0; s < 2; ++s) {
                    const Complex left = std::conj(v[i](s));
                    for (int t = 0; t < 2; ++t) {
                        acc += left * mat(layout.uoff[r] + s * sq, layout.uoff[c] + t * sq) *
                               v[i](t);
                    }
                }
                block(r, c) = acc;
            }
        }
        probs[i] = std::max(0.0, block.trace().real());
    }
}

double block_entropy(const Matrix& block, double p) {
    if (p < kZeroBranch) return 0.0;
    if (block.rows() == 2) {
        const Eigen::Matrix2cd m = block / p;
        return detail::entropy_2x2(m);
    }
    return detail::entropy_hermitian(block / p);
}

void check_qubit_party(const DensityMatrix& rho, int party, const char* op) {
    if (party < 0 || party >= rho.num_parties()) {
        throw std::invalid_argument(std::string(op) + ": party index out of range");
    }
    if (rho.dims[party] != 2) {
        throw std::invalid_argument(std::string(op) + ": measured party is not a qubit");
    }
}

MeasureResult finalize(double value, const OptResult& opt) {
    MeasureResult out{value, opt.arg, opt.converged, opt.evals};
    if (out.value < kNegClamp) {
        out.converged = false;
    } else if (out.value < 0.0) {
        out.value = 0.0;
    }
    return out;
}

// Squared concurrence of the two-qubit marginal of a three-qubit pure state
// that keeps parties p and q and traces out party t.  The marginal equals
// sum_c chi_c chi_c^dag, where chi_c is the unnormalized pair vector attached
// to outcome c on the traced qubit, so its Wootters spectrum consists of the
// two singular values of the symmetric matrix A_{cc'} = chi_c^T (sigma_y
// otimes sigma_y) chi_{c'}; the other two values vanish identically and
// C^2 = ||A||_F^2 - 2 |det A|, with no eigensolver in the path.
double pair_concurrence_sq(const PureState& psi, int p, int q, int t) {
    std::array<Eigen::Vector4cd, 2> chi;
    chi[0].setZero();
    chi[1].setZero();
    std::array<int, 3> bits{};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            for (int c = 0; c < 2; ++c) {
                bits[p] = a;
                bits[q] = b;
                bits[t] = c;
                chi[c](2 * a + b) = psi.amps(4 * bits[0] + 2 * bits[1] + bits[2]);
            }
        }
    }
    Eigen::Matrix2cd a;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            a(r, c) = chi[r](1) * chi[c](2) + chi[r](2) * chi[c](1) -
                      chi[r](0) * chi[c](3) - chi[r](3) * chi[c](0);
        }
    }
    const double f = a.squaredNorm();
    const double d = std::abs(a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0));
    return std::max(0.0, f - 2.0 * d);
}

Matrix sigma_yy() {
    Eigen::Matrix2cd sy;
    sy << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return kron(Matrix(sy), Matrix(sy));
}

}  // namespace

namespace detail {

MeasuredBlocks measured_blocks(const DensityMatrix& rho, int party,
                               const MeasurementBasis& basis) {
    check_qubit_party(rho, party, "measured_blocks");
    MeasuredBlocks mb;
    fill_blocks(rho.mat, slot_layout(rho.dims, party), basis, mb.blocks, mb.probs);
    return mb;
}

double dephased_entropy(const MeasuredBlocks& mb) {
    return entropy_of_values(mb.probs, 1e-12) + avg_conditional_entropy(mb);
}

double avg_conditional_entropy(const MeasuredBlocks& mb) {
    double total = 0.0;
    for (int i = 0; i < 2; ++i) {
        if (mb.probs[i] >= kZeroBranch) {
            total += mb.probs[i] * block_entropy(mb.blocks[i], mb.probs[i]);
        }
    }
    return total;
}

}  // namespace detail

MeasurementOutcome measure_qubit(const DensityMatrix& rho, int party,
                                 const MeasurementBasis& basis) {
    check_qubit_party(rho, party, "measure_qubit");
    const SlotLayout layout = slot_layout(rho.dims, party);
    std::array<Matrix, 2> blocks;
    std::array<double, 2> probs;
    fill_blocks(rho.mat, layout, basis, blocks, probs);

    std::vector<int> udims;
    for (int k = 0; k < rho.num_parties(); ++k) {
        if (k != party) udims.push_back(rho.dims[k]);
    }
    const int d = static_cast<int>(layout.uoff.size());

    auto conditional = [&](int i) {
        if (probs[i] < kZeroBranch) {
            return DensityMatrix(Matrix::Identity(d, d) / d, udims);
        }
        return DensityMatrix(blocks[i] / probs[i], udims);
    };

    const std::array<Eigen::Vector2cd, 2> v = {basis.ket0(), basis.ket1()};
    Matrix deph = Matrix::Zero(rho.dim(), rho.dim());
    for (int i = 0; i < 2; ++i) {
        for (int r = 0; r < d; ++r) {
            for (int c = 0; c < d; ++c) {
                for (int s = 0; s < 2; ++s) {
                    for (int t = 0; t < 2; ++t) {
                        deph(layout.uoff[r] + s * layout.stride_q,
                             layout.uoff[c] + t * layout.stride_q) +=
                            v[i](s) * std::conj(v[i](t)) * blocks[i](r, c);
                    }
                }
            }
        }
    }

    return MeasurementOutcome{probs,
                              {conditional(0), conditional(1)},
                              DensityMatrix(std::move(deph), rho.dims)};
}

MeasureResult discord(const DensityMatrix& rho, int measured, const OptimizerConfig& cfg) {
    check_qubit_party(rho, measured, "discord");
    const double s_meas = vn_entropy(partial_trace(rho, {measured}));
    const double s_rho = vn_entropy(rho);

    const SlotLayout layout = slot_layout(rho.dims, measured);
    detail::MeasuredBlocks scratch;
    auto obj = [&rho, &layout, scratch](const MeasurementBasis& b) mutable {
        fill_blocks(rho.mat, layout, b, scratch.blocks, scratch.probs);
        return detail::avg_conditional_entropy(scratch);
    };
    const OptResult opt = minimize_over_basis(obj, cfg);
    return finalize(s_meas - s_rho + opt.value, opt);
}

MeasureResult one_way_deficit(const DensityMatrix& rho, DeficitKind kind,
                              const std::vector<int>& split_first,
                              const OptimizerConfig& cfg) {
    std::vector<bool> in_first(rho.num_parties(), false);
    for (int k : split_first) {
        if (k < 0 || k >= rho.num_parties()) {
            throw std::invalid_argument("one_way_deficit: split index out of range");
        }
        if (in_first[k]) {
            throw std::invalid_argument("one_way_deficit: split index repeated");
        }
        in_first[k] = true;
    }
    std::vector<int> second;
    for (int k = 0; k < rho.num_parties(); ++k) {
        if (!in_first[k]) second.push_back(k);
    }
    if (split_first.empty() || second.empty()) {
        throw std::invalid_argument("one_way_deficit: bipartition has an empty side");
    }
    const std::vector<int>& measured_side =
        kind == DeficitKind::forward ? split_first : second;
    if (measured_side.size() != 1) {
        throw std::invalid_argument("one_way_deficit: measured party must be a single subsystem");
    }
    const int q = measured_side.front();
    check_qubit_party(rho, q, "one_way_deficit");

    const double s_rho = vn_entropy(rho);
    const SlotLayout layout = slot_layout(rho.dims, q);
    detail::MeasuredBlocks scratch;
    auto obj = [&rho, &layout, scratch](const MeasurementBasis& b) mutable {
        fill_blocks(rho.mat, layout, b, scratch.blocks, scratch.probs);
        return detail::dephased_entropy(scratch);
    };
    const OptResult opt = minimize_over_basis(obj, cfg);
    return finalize(opt.value - s_rho, opt);
}

double concurrence(const DensityMatrix& rho) {
    if (rho.dims != std::vector<int>{2, 2}) {
        throw std::invalid_argument("concurrence: state is not two qubits");
    }
    const Matrix yy = sigma_yy();
    const Matrix tilde = yy * rho.mat.conjugate() * yy;
    const Matrix root = sqrtm_psd(rho.mat);
    Matrix m = root * tilde * root;
    m = ((m + m.adjoint()) / 2.0).eval();
    const Spectrum spec = eig_hermitian(m);
    std::array<double, 4> lam{};
    for (int i = 0; i < 4; ++i) {
        lam[i] = std::sqrt(std::max(0.0, spec.values[i]));
    }
    return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

double eof_two_qubit(const DensityMatrix& rho) {
    const double c = concurrence(rho);
    const double x = std::sqrt(std::max(0.0, 1.0 - c * c));
    return binary_entropy(0.5 * (1.0 + x));
}

double tangle_ckw(const PureState& psi, int nodal) {
    if (psi.dims != std::vector<int>{2, 2, 2}) {
        throw std::invalid_argument("tangle_ckw: state is not three qubits");
    }
    if (nodal < 0 || nodal > 2) {
        throw std::invalid_argument("tangle_ckw: nodal party out of range");
    }
    const DensityMatrix rho_n = partial_trace(to_density(psi), {nodal});
    const double det =
        (rho_n.mat(0, 0) * rho_n.mat(1, 1) - rho_n.mat(0, 1) * rho_n.mat(1, 0)).real();

    double c2_sum = 0.0;
    for (int other = 0; other < 3; ++other) {
        if (other == nodal) continue;
        const int traced = 3 - nodal - other;
        c2_sum += pair_concurrence_sq(psi, std::min(nodal, other), std::max(nodal, other),
                                      traced);
    }
    return 4.0 * det - c2_sum;
}

double kw_residual(const PureState& psi, const OptimizerConfig& cfg) {
    if (psi.dims != std::vector<int>{2, 2, 2}) {
        throw std::invalid_argument("kw_residual: state is not three qubits");
    }
    const DensityMatrix rho = to_density(psi);
    const double ef = eof_two_qubit(partial_trace(rho, {0, 1}));

    // Average entanglement entropy of the pure AB states conditioned on a
    // projective outcome at C; basis index of |abc> is 4a + 2b + c.
    auto obj = [&psi](const MeasurementBasis& b) {
        const std::array<Eigen::Vector2cd, 2> v = {b.ket0(), b.ket1()};
        double total = 0.0;
        for (int i = 0; i < 2; ++i) {
            Eigen::Vector4cd chi;
            for (int ab = 0; ab < 4; ++ab) {
                chi(ab) = std::conj(v[i](0)) * psi.amps(2 * ab) +
                          std::conj(v[i](1)) * psi.amps(2 * ab + 1);
            }
            const double p = chi.squaredNorm();
            if (p < kZeroBranch) continue;
            Eigen::Matrix2cd ra;
            for (int r = 0; r < 2; ++r) {
                for (int c = 0; c < 2; ++c) {
                    ra(r, c) = (chi(2 * r) * std::conj(chi(2 * c)) +
                                chi(2 * r + 1) * std::conj(chi(2 * c + 1))) /
                               p;
                }
            }
            total += p * detail::entropy_2x2(ra);
        }
        return total;
    };
    const OptResult opt = minimize_over_basis(obj, cfg);
    return ef - opt.value;
}

double deficit_functional(const DensityMatrix& rho, int measured,
                          const MeasurementBasis& basis) {
    const MeasurementOutcome out = measure_qubit(rho, measured, basis);
    return vn_entropy(out.dephased) - vn_entropy(rho);
}

double discord_functional(const DensityMatrix& rho, int measured,
                          const MeasurementBasis& basis) {
    const auto mb = detail::measured_blocks(rho, measured, basis);
    return vn_entropy(partial_trace(rho, {measured})) - vn_entropy(rho) +
           detail::avg_conditional_entropy(mb);
}

}  // namespace qmono
