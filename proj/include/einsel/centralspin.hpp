#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "einsel/qcore.hpp"

namespace einsel {

/// Pure-dephasing central-spin model: one central qubit coupled to N
/// environment qubits by pairwise sigma_z (x) sigma_z terms,
///
///     H = 1/2 sigma_z^(0) (x) sum_i g_i sigma_z^(i),   hbar = 1.
///
/// H is diagonal in the computational basis, so evolution is exact per-amplitude
/// phase multiplication. The central spin is register qubit 0; environment
/// spin i (i = 0..N-1) is register qubit i+1.
class CentralSpinModel {
public:
    explicit CentralSpinModel(Eigen::VectorXd couplings);

    /// Couplings drawn i.i.d. uniform on (0, 1].
    static CentralSpinModel random_uniform(int num_env, std::uint64_t seed);

    int num_env() const { return static_cast<int>(couplings_.size()); }
    int num_qubits() const { return num_env() + 1; }
    const Eigen::VectorXd& couplings() const { return couplings_; }

    /// False iff every coupling is zero (the model then dephases nothing).
    bool is_decohering() const { return couplings_.cwiseAbs().maxCoeff() > 0.0; }

private:
    Eigen::VectorXd couplings_;
};

/// Unentangled environment, one (a_i, b_i) qubit per spin with
/// a_i = <+z|e_i>, b_i = <-z|e_i>. Each pair is normalized at construction
/// under the same policy as PureState.
class ProductEnvironment {
public:
    explicit ProductEnvironment(std::vector<std::pair<Complex, Complex>> spins);

    /// Every spin (|+z> + |-z>)/sqrt(2).
    static ProductEnvironment plus_x(int num_spins);
    /// Every spin |+z>.
    static ProductEnvironment z_basis(int num_spins);

    int size() const { return static_cast<int>(spins_.size()); }
    Complex a(int i) const { return spins_[i].first; }
    Complex b(int i) const { return spins_[i].second; }

    /// Tensor product of the factors as a dense register state.
    PureState to_state() const;

private:
    std::vector<std::pair<Complex, Complex>> spins_;
};

/// Strictly ascending, finite, non-negative sample times.
class TimeGrid {
public:
    explicit TimeGrid(Eigen::VectorXd times);

    /// `steps` evenly spaced points; 0..t_max inclusive for steps >= 2,
    /// the single point {t_max} for steps == 1.
    static TimeGrid uniform(double t_max, int steps);

    Eigen::Index size() const { return times_.size(); }
    double operator[](Eigen::Index i) const { return times_(i); }
    const Eigen::VectorXd& times() const { return times_; }

private:
    Eigen::VectorXd times_;
};

/// Eigenvalue of H on z-basis product state |basis_index>:
/// E = 1/2 s0 sum_i g_i s_i with s = +1 for bit 0, -1 for bit 1.
double hamiltonian_phase(const CentralSpinModel& model, Eigen::Index basis_index);

/// All 2^(N+1) diagonal eigenvalues, indexed like amplitudes.
Eigen::VectorXd diagonal_energies(const CentralSpinModel& model);

/// exp(-i H t) |psi0>: multiplies amplitude k by exp(-i E_k t).
PureState evolve(const CentralSpinModel& model, const PureState& psi0, double t);

/// Same, with the energy table precomputed by diagonal_energies().
PureState evolve(const Eigen::VectorXd& energies, const PureState& psi0, double t);

/// Overlap r(t) = <E-(t)|E+(t)> of the two environment branch states, in
/// closed form: prod_i (|a_i|^2 exp(-i g_i t) + |b_i|^2 exp(+i g_i t)).
/// |r| <= 1 and r(0) = 1.
Complex decoherence_factor(const CentralSpinModel& model, const ProductEnvironment& env,
                           double t);

/// Reduced 2x2 state of the central spin (register qubit 0).
DensityMatrix central_state(const CentralSpinModel& model, const PureState& psi_t);

struct TrajectoryPoint {
    double t = 0.0;
    BlochVector bloch;
    double purity = 0.0;
};

/// Bloch-sphere trajectory of the central spin: evolve central (x) env to each
/// grid time, reduce to qubit 0, convert. The z component is a constant of the
/// motion; |x|, |y| scale by |r(t)|.
std::vector<TrajectoryPoint> bloch_trajectory(const CentralSpinModel& model,
                                              const PureState& central,
                                              const ProductEnvironment& env,
                                              const TimeGrid& grid);

struct DecoherenceTime {
    double time = 0.0;       // +infinity when not decohering
    bool decohering = false; // true iff |r(t)| <= epsilon was reached
};

/// Smallest search-grid t with |r(t)| <= epsilon. The default grid is 2000
/// uniform points on [0, 4 pi / gbar], gbar the mean absolute coupling;
/// pass grid_points / t_max to override. Returns an infinite sentinel with
/// decohering = false when no grid point qualifies.
DecoherenceTime decoherence_time(const CentralSpinModel& model, const ProductEnvironment& env,
                                 double epsilon, int grid_points = 2000, double t_max = 0.0);

}  // namespace einsel
