#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "einsel/errors.hpp"

namespace einsel {

using Complex = std::complex<double>;

// Tolerances shared by the dense quantum types.
inline constexpr double kNormTolerance = 1e-10;        // guaranteed after construction
inline constexpr double kNormRejectThreshold = 1e-6;   // raw input beyond this is rejected
inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kEigenvalueFloor = -1e-9;      // eigenvalues in [floor, 0) clamp to 0

/// Normalized pure state of a register of qubits.
///
/// Amplitude indexing convention, used everywhere in this library:
/// qubit 0 is the *most significant* bit of the amplitude index, so for an
/// n-qubit register the basis index of qubit q is bit (n-1-q). The central
/// spin of the dephasing model always occupies qubit 0.
class PureState {
public:
    /// Wraps an amplitude vector of length 2^n, n >= 1. Vectors whose norm
    /// deviates from 1 by more than kNormRejectThreshold are rejected;
    /// smaller deviations are renormalized.
    explicit PureState(Eigen::VectorXcd amplitudes);

    /// |index> in the computational basis.
    static PureState basis_state(int num_qubits, Eigen::Index index);

    int num_qubits() const { return num_qubits_; }
    Eigen::Index dim() const { return amplitudes_.size(); }
    const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
    Complex coeff(Eigen::Index k) const { return amplitudes_(k); }

private:
    int num_qubits_;
    Eigen::VectorXcd amplitudes_;
};

/// Hermitian, unit-trace, positive-semidefinite matrix. All three invariants
/// are checked at construction (PSD up to kEigenvalueFloor).
class DensityMatrix {
public:
    explicit DensityMatrix(Eigen::MatrixXcd entries);

    Eigen::Index dim() const { return entries_.rows(); }
    const Eigen::MatrixXcd& entries() const { return entries_; }
    Complex coeff(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

private:
    Eigen::MatrixXcd entries_;
};

/// Point in the Bloch ball; surface = pure, interior = mixed.
struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Ordered set of distinct qubit positions within a register. Indices are
/// stored ascending; validation against a concrete register size happens at
/// the point of use.
class QubitSubset {
public:
    explicit QubitSubset(std::vector<int> indices);

    const std::vector<int>& indices() const { return indices_; }
    int size() const { return static_cast<int>(indices_.size()); }
    int max_index() const { return indices_.back(); }
    bool contains(int q) const;

private:
    std::vector<int> indices_;
};

/// Kronecker product of two registers; qubits of `a` become the most
/// significant positions of the result.
PureState tensor(const PureState& a, const PureState& b);

/// |psi><psi|.
DensityMatrix projector(const PureState& psi);

/// Reduced state of the qubits in `keep`, computed directly from the
/// amplitudes (the full 2^n x 2^n matrix is never formed).
DensityMatrix partial_trace(const PureState& state, const QubitSubset& keep);

/// Reduced state of the qubits in `keep` of a density matrix over n qubits.
DensityMatrix partial_trace(const DensityMatrix& state, const QubitSubset& keep);

/// D(rho, sigma) = 1/2 sum |eigenvalues of rho - sigma|, in [0, 1].
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// -sum lambda log2 lambda, in bits. Eigenvalues in [kEigenvalueFloor, 0)
/// are clamped to zero.
double von_neumann_entropy(const DensityMatrix& rho);

/// Tr(rho^2).
double purity(const DensityMatrix& rho);

/// (x, y, z) with x = 2 Re rho01, y = -2 Im rho01, z = rho00 - rho11,
/// so that (|0> + i|1>)/sqrt(2) maps to (0, 1, 0).
BlochVector bloch_vector(const DensityMatrix& rho);

/// Inverse of bloch_vector: rho = (I + x X + y Y + z Z) / 2.
DensityMatrix qubit_state(const BlochVector& v);

/// I/dim.
DensityMatrix maximally_mixed(Eigen::Index dim);

}  // namespace einsel
