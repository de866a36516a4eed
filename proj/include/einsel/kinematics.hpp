#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "einsel/centralspin.hpp"
#include "einsel/qcore.hpp"

namespace einsel {

/// Reproducible source of Haar-distributed pure states: sample `index` is a
/// vector of i.i.d. standard complex Gaussians seeded by (seed, counter+index),
/// normalized. The same (seed, counter) always yields bit-identical states,
/// independent of evaluation order.
class HaarSampler {
public:
    HaarSampler(int num_qubits, std::uint64_t seed, std::uint64_t counter = 0);

    int num_qubits() const { return num_qubits_; }
    Eigen::Index dim() const { return Eigen::Index{1} << num_qubits_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

    /// State for absolute sample index `counter() + offset`; does not advance.
    PureState state_at(std::uint64_t offset) const;

    /// Next state in the stream; advances the counter.
    PureState sample();

private:
    int num_qubits_;
    std::uint64_t seed_;
    std::uint64_t counter_;
};

/// Bipartition of an n-qubit register into an observed subsystem (k qubits)
/// and its traced-out complement, 1 <= k < n.
class SubsystemSplit {
public:
    SubsystemSplit(QubitSubset subsystem, int total_qubits);

    const QubitSubset& subsystem() const { return subsystem_; }
    int total_qubits() const { return total_qubits_; }
    int subsystem_qubits() const { return subsystem_.size(); }
    int rest_qubits() const { return total_qubits_ - subsystem_.size(); }
    Eigen::Index subsystem_dim() const { return Eigen::Index{1} << subsystem_qubits(); }
    Eigen::Index rest_dim() const { return Eigen::Index{1} << rest_qubits(); }

private:
    QubitSubset subsystem_;
    int total_qubits_;
};

/// Monte Carlo summary of trace distances to the maximally mixed state.
struct DistanceStats {
    std::int64_t sample_count = 0;
    double mean = 0.0;
    double std_error = 0.0;  // sample standard deviation / sqrt(sample_count)
    double max = 0.0;
    double bound_value = 0.0;
};

/// Haar sample from the sampler's register (unitarily invariant distribution).
PureState sample_haar(HaarSampler& sampler);

/// Reduced state of the observed subsystem.
DensityMatrix subsystem_state(const PureState& psi, const SubsystemSplit& split);

/// Upper bound (d_sub / 2) sqrt(1 / d_rest) on the Haar-average trace distance
/// between a reduced subsystem state and the maximally mixed state.
double average_distance_bound(const SubsystemSplit& split);

/// D(reduced state, maximally mixed) for samples counter .. counter+samples-1.
std::vector<double> mc_distances(const SubsystemSplit& split, std::int64_t samples,
                                 const HaarSampler& sampler);

/// Mean / standard error / max of a distance sample, with the split's bound.
DistanceStats summarize_distances(const std::vector<double>& distances,
                                  double bound_value);

/// Monte Carlo estimate of the Haar-average trace distance between the reduced
/// subsystem state and the maximally mixed state. Deterministic in
/// (sampler seed+counter, samples, split); samples >= 2.
DistanceStats mc_average_distance(const SubsystemSplit& split, std::int64_t samples,
                                  const HaarSampler& sampler);

struct TimedDistanceStats {
    double t = 0.0;
    DistanceStats stats;
};

/// For each Haar environment sample, evolve central (x) sample under the model
/// and record the trace distance of the observed environment subsystem to
/// maximally mixed at every grid time. `split` addresses the *full* register
/// (central = qubit 0), must touch environment qubits only; the bound uses the
/// environment-internal dimensions. The t = 0 grid entry reproduces
/// mc_average_distance on the same sampler configuration.
std::vector<TimedDistanceStats> persistence_experiment(const CentralSpinModel& model,
                                                       const SubsystemSplit& split,
                                                       std::int64_t samples,
                                                       const TimeGrid& grid,
                                                       const HaarSampler& sampler,
                                                       const PureState& central);

/// Same loop over an explicit list of environment states (used for product-
/// state contrast experiments).
std::vector<TimedDistanceStats> persistence_over_states(const CentralSpinModel& model,
                                                        const SubsystemSplit& split,
                                                        const std::vector<PureState>& envs,
                                                        const TimeGrid& grid,
                                                        const PureState& central);

}  // namespace einsel
