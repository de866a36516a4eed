#include "einsel/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace einsel {

namespace {

bool is_power_of_two(Eigen::Index x) { return x > 0 && (x & (x - 1)) == 0; }

int log2_exact(Eigen::Index x) {
    int n = 0;
    while ((Eigen::Index{1} << n) < x) ++n;
    return n;
}

// Bit position of qubit q in an n-qubit amplitude index (qubit 0 = MSB).
inline int bit_position(int n, int q) { return n - 1 - q; }

// Scatter masks for a subset of qubits: entry r is the amplitude-index
// contribution of subset bit pattern r (subset order preserved, first
// subset qubit most significant).
std::vector<std::uint64_t> scatter_table(const std::vector<int>& qubits, int n) {
    const int k = static_cast<int>(qubits.size());
    std::vector<std::uint64_t> table(std::uint64_t{1} << k, 0);
    for (std::uint64_t r = 0; r < table.size(); ++r) {
        std::uint64_t idx = 0;
        for (int j = 0; j < k; ++j) {
            if ((r >> (k - 1 - j)) & 1u) {
                idx |= std::uint64_t{1} << bit_position(n, qubits[j]);
            }
        }
        table[r] = idx;
    }
    return table;
}

std::vector<int> complement_of(const std::vector<int>& keep, int n) {
    std::vector<int> comp;
    comp.reserve(n - keep.size());
    auto it = keep.begin();
    for (int q = 0; q < n; ++q) {
        if (it != keep.end() && *it == q) {
            ++it;
        } else {
            comp.push_back(q);
        }
    }
    return comp;
}

void check_keep_set(const QubitSubset& keep, int num_qubits) {
    if (keep.max_index() >= num_qubits) {
        throw std::invalid_argument("partial_trace: qubit index " +
                                    std::to_string(keep.max_index()) +
                                    " out of range for a " + std::to_string(num_qubits) +
                                    "-qubit register");
    }
}

}  // namespace

PureState::PureState(Eigen::VectorXcd amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() < 2 || !is_power_of_two(amplitudes_.size())) {
        throw std::invalid_argument("PureState: amplitude vector length must be 2^n, n >= 1");
    }
    num_qubits_ = log2_exact(amplitudes_.size());
    const double norm = amplitudes_.norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > kNormRejectThreshold) {
        throw NumericalError("PureState: input norm " + std::to_string(norm) +
                             " deviates from 1 by more than " +
                             std::to_string(kNormRejectThreshold));
    }
    amplitudes_ /= norm;
}

PureState PureState::basis_state(int num_qubits, Eigen::Index index) {
    if (num_qubits < 1) {
        throw std::invalid_argument("basis_state: need at least one qubit");
    }
    const Eigen::Index dim = Eigen::Index{1} << num_qubits;
    if (index < 0 || index >= dim) {
        throw std::invalid_argument("basis_state: index out of range");
    }
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(dim);
    amps(index) = 1.0;
    return PureState(std::move(amps));
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() < 2) {
        throw std::invalid_argument("DensityMatrix: entries must be square with dim >= 2");
    }
    const double asym = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    if (!(asym <= kHermitianTolerance)) {
        throw NumericalError("DensityMatrix: not Hermitian (max asymmetry " +
                             std::to_string(asym) + ")");
    }
    const Complex tr = entries_.trace();
    if (std::abs(tr - Complex{1.0, 0.0}) > kTraceTolerance) {
        throw NumericalError("DensityMatrix: trace deviates from 1 by " +
                             std::to_string(std::abs(tr - Complex{1.0, 0.0})));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(entries_,
                                                           Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < kEigenvalueFloor) {
        throw NumericalError("DensityMatrix: eigenvalue " + std::to_string(min_eig) +
                             " below PSD tolerance");
    }
}

QubitSubset::QubitSubset(std::vector<int> indices) : indices_(std::move(indices)) {
    if (indices_.empty()) {
        throw std::invalid_argument("QubitSubset: empty subset");
    }
    std::sort(indices_.begin(), indices_.end());
    if (indices_.front() < 0) {
        throw std::invalid_argument("QubitSubset: negative qubit index");
    }
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
        throw std::invalid_argument("QubitSubset: duplicate qubit index");
    }
}

bool QubitSubset::contains(int q) const {
    return std::binary_search(indices_.begin(), indices_.end(), q);
}

PureState tensor(const PureState& a, const PureState& b) {
    const Eigen::Index db = b.dim();
    Eigen::VectorXcd out(a.dim() * db);
    for (Eigen::Index i = 0; i < a.dim(); ++i) {
        out.segment(i * db, db) = a.coeff(i) * b.amplitudes();
    }
    return PureState(std::move(out));
}

DensityMatrix projector(const PureState& psi) {
    return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix partial_trace(const PureState& state, const QubitSubset& keep) {
    const int n = state.num_qubits();
    check_keep_set(keep, n);
    const int k = keep.size();
    if (k == n) {
        return projector(state);
    }

    const auto keep_mask = scatter_table(keep.indices(), n);
    const auto comp_mask = scatter_table(complement_of(keep.indices(), n), n);
    const Eigen::Index dk = Eigen::Index{1} << k;

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dk, dk);
    Eigen::VectorXcd branch(dk);
    for (std::uint64_t base : comp_mask) {
        for (Eigen::Index r = 0; r < dk; ++r) {
            branch(r) = state.coeff(static_cast<Eigen::Index>(base | keep_mask[r]));
        }
        rho.noalias() += branch * branch.adjoint();
    }
    return DensityMatrix(std::move(rho));
}

DensityMatrix partial_trace(const DensityMatrix& state, const QubitSubset& keep) {
    const Eigen::Index dim = state.dim();
    if (!is_power_of_two(dim)) {
        throw std::invalid_argument("partial_trace: density matrix dim must be 2^n");
    }
    const int n = log2_exact(dim);
    check_keep_set(keep, n);
    const int k = keep.size();
    if (k == n) {
        return state;
    }

    const auto keep_mask = scatter_table(keep.indices(), n);
    const auto comp_mask = scatter_table(complement_of(keep.indices(), n), n);
    const Eigen::Index dk = Eigen::Index{1} << k;

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dk, dk);
    for (std::uint64_t base : comp_mask) {
        for (Eigen::Index r = 0; r < dk; ++r) {
            const auto row = static_cast<Eigen::Index>(base | keep_mask[r]);
            for (Eigen::Index c = 0; c < dk; ++c) {
                rho(r, c) += state.coeff(row, static_cast<Eigen::Index>(base | keep_mask[c]));
            }
        }
    }
    return DensityMatrix(std::move(rho));
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw std::invalid_argument("trace_distance: dimension mismatch");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.entries() - sigma.entries(),
                                                           Eigen::EigenvaluesOnly);
    const double d = 0.5 * solver.eigenvalues().cwiseAbs().sum();
    return std::clamp(d, 0.0, 1.0);
}

double von_neumann_entropy(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.entries(),
                                                           Eigen::EigenvaluesOnly);
    double bits = 0.0;
    for (Eigen::Index i = 0; i < rho.dim(); ++i) {
        const double lambda = std::max(solver.eigenvalues()(i), 0.0);
        if (lambda > 0.0) {
            bits -= lambda * std::log2(lambda);
        }
    }
    return std::max(bits, 0.0);
}

double purity(const DensityMatrix& rho) {
    // Tr(rho^2) = ||rho||_F^2 for Hermitian rho.
    return rho.entries().squaredNorm();
}

BlochVector bloch_vector(const DensityMatrix& rho) {
    if (rho.dim() != 2) {
        throw std::invalid_argument("bloch_vector: requires a qubit density matrix");
    }
    BlochVector v;
    v.x = 2.0 * rho.coeff(0, 1).real();
    v.y = -2.0 * rho.coeff(0, 1).imag();
    v.z = rho.coeff(0, 0).real() - rho.coeff(1, 1).real();
    const double r2 = v.x * v.x + v.y * v.y + v.z * v.z;
    if (r2 > 1.0 + 1e-9) {
        throw NumericalError("bloch_vector: point outside the Bloch ball, |r|^2 = " +
                             std::to_string(r2));
    }
    return v;
}

DensityMatrix qubit_state(const BlochVector& v) {
    Eigen::MatrixXcd rho(2, 2);
    rho(0, 0) = Complex{(1.0 + v.z) / 2.0, 0.0};
    rho(1, 1) = Complex{(1.0 - v.z) / 2.0, 0.0};
    rho(0, 1) = Complex{v.x / 2.0, -v.y / 2.0};
    rho(1, 0) = Complex{v.x / 2.0, v.y / 2.0};
    return DensityMatrix(std::move(rho));
}

DensityMatrix maximally_mixed(Eigen::Index dim) {
    if (dim < 2) {
        throw std::invalid_argument("maximally_mixed: dim must be >= 2");
    }
    return DensityMatrix(Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim));
}

}  // namespace einsel
