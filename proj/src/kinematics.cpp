#include "einsel/kinematics.hpp"

#include <cmath>
#include <random>
#include <string>

namespace einsel {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) + 0x9E3779B97F4A7C15ull * index);
}

void check_split_for_sampler(const SubsystemSplit& split, const HaarSampler& sampler) {
    if (split.total_qubits() != sampler.num_qubits()) {
        throw std::invalid_argument("subsystem split does not match the sampler register (" +
                                    std::to_string(split.total_qubits()) + " vs " +
                                    std::to_string(sampler.num_qubits()) + " qubits)");
    }
}

}  // namespace

HaarSampler::HaarSampler(int num_qubits, std::uint64_t seed, std::uint64_t counter)
    : num_qubits_(num_qubits), seed_(seed), counter_(counter) {
    if (num_qubits < 1) {
        throw std::invalid_argument("HaarSampler: need at least one qubit");
    }
}

PureState HaarSampler::state_at(std::uint64_t offset) const {
    std::mt19937_64 engine(stream_seed(seed_, counter_ + offset));
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXcd amps(dim());
    for (Eigen::Index k = 0; k < amps.size(); ++k) {
        const double re = normal(engine);
        const double im = normal(engine);
        amps(k) = Complex{re, im};
    }
    amps /= amps.norm();
    return PureState(std::move(amps));
}

PureState HaarSampler::sample() {
    PureState state = state_at(0);
    ++counter_;
    return state;
}

PureState sample_haar(HaarSampler& sampler) { return sampler.sample(); }

SubsystemSplit::SubsystemSplit(QubitSubset subsystem, int total_qubits)
    : subsystem_(std::move(subsystem)), total_qubits_(total_qubits) {
    if (subsystem_.max_index() >= total_qubits_) {
        throw std::invalid_argument("SubsystemSplit: subsystem index out of range");
    }
    if (subsystem_.size() >= total_qubits_) {
        throw std::invalid_argument("SubsystemSplit: complement must be non-empty");
    }
}

DensityMatrix subsystem_state(const PureState& psi, const SubsystemSplit& split) {
    if (psi.num_qubits() != split.total_qubits()) {
        throw std::invalid_argument("subsystem_state: register size mismatch");
    }
    return partial_trace(psi, split.subsystem());
}

double average_distance_bound(const SubsystemSplit& split) {
    return 0.5 * static_cast<double>(split.subsystem_dim()) /
           std::sqrt(static_cast<double>(split.rest_dim()));
}

std::vector<double> mc_distances(const SubsystemSplit& split, std::int64_t samples,
                                 const HaarSampler& sampler) {
    check_split_for_sampler(split, sampler);
    if (samples < 2) {
        throw std::invalid_argument("mc_distances: need at least two samples");
    }
    const DensityMatrix omega = maximally_mixed(split.subsystem_dim());
    std::vector<double> distances(static_cast<std::size_t>(samples));
    for (std::int64_t s = 0; s < samples; ++s) {
        const PureState psi = sampler.state_at(static_cast<std::uint64_t>(s));
        distances[static_cast<std::size_t>(s)] =
            trace_distance(partial_trace(psi, split.subsystem()), omega);
    }
    return distances;
}

DistanceStats summarize_distances(const std::vector<double>& distances, double bound_value) {
    if (distances.empty()) {
        throw std::invalid_argument("summarize_distances: empty sample");
    }
    const auto count = static_cast<std::int64_t>(distances.size());
    double sum = 0.0;
    double max = 0.0;
    for (double d : distances) {
        sum += d;
        max = std::max(max, d);
    }
    const double mean = sum / static_cast<double>(count);
    double sq = 0.0;
    for (double d : distances) {
        sq += (d - mean) * (d - mean);
    }
    const double variance = count > 1 ? sq / static_cast<double>(count - 1) : 0.0;
    DistanceStats stats;
    stats.sample_count = count;
    stats.mean = mean;
    stats.std_error = std::sqrt(variance / static_cast<double>(count));
    stats.max = max;
    stats.bound_value = bound_value;
    return stats;
}

DistanceStats mc_average_distance(const SubsystemSplit& split, std::int64_t samples,
                                  const HaarSampler& sampler) {
    return summarize_distances(mc_distances(split, samples, sampler),
                               average_distance_bound(split));
}

std::vector<TimedDistanceStats> persistence_over_states(const CentralSpinModel& model,
                                                        const SubsystemSplit& split,
                                                        const std::vector<PureState>& envs,
                                                        const TimeGrid& grid,
                                                        const PureState& central) {
    if (split.total_qubits() != model.num_qubits()) {
        throw std::invalid_argument("persistence: split must address the full register");
    }
    if (split.subsystem().contains(0)) {
        throw std::invalid_argument(
            "persistence: the central spin (qubit 0) is not an environment subsystem");
    }
    if (central.num_qubits() != 1) {
        throw std::invalid_argument("persistence: central state must be one qubit");
    }
    if (envs.empty()) {
        throw std::invalid_argument("persistence: need at least one environment state");
    }

    // Haar-average bound for the environment-internal split: the observed
    // qubits against the remaining environment spins (central spin excluded).
    const int rest_env_qubits = model.num_env() - split.subsystem_qubits();
    const double bound_value = 0.5 * static_cast<double>(split.subsystem_dim()) /
                               std::sqrt(static_cast<double>(Eigen::Index{1} << rest_env_qubits));

    const Eigen::VectorXd energies = diagonal_energies(model);
    const DensityMatrix omega = maximally_mixed(split.subsystem_dim());

    // distances[time][sample]
    std::vector<std::vector<double>> distances(
        static_cast<std::size_t>(grid.size()),
        std::vector<double>(envs.size(), 0.0));

    for (std::size_t s = 0; s < envs.size(); ++s) {
        if (envs[s].num_qubits() != model.num_env()) {
            throw std::invalid_argument("persistence: environment register size mismatch");
        }
        const PureState psi0 = tensor(central, envs[s]);
        for (Eigen::Index j = 0; j < grid.size(); ++j) {
            const PureState psi_t = evolve(energies, psi0, grid[j]);
            distances[static_cast<std::size_t>(j)][s] =
                trace_distance(partial_trace(psi_t, split.subsystem()), omega);
        }
    }

    std::vector<TimedDistanceStats> result;
    result.reserve(static_cast<std::size_t>(grid.size()));
    for (Eigen::Index j = 0; j < grid.size(); ++j) {
        result.push_back(
            {grid[j], summarize_distances(distances[static_cast<std::size_t>(j)], bound_value)});
    }
    return result;
}

std::vector<TimedDistanceStats> persistence_experiment(const CentralSpinModel& model,
                                                       const SubsystemSplit& split,
                                                       std::int64_t samples,
                                                       const TimeGrid& grid,
                                                       const HaarSampler& sampler,
                                                       const PureState& central) {
    if (sampler.num_qubits() != model.num_env()) {
        throw std::invalid_argument("persistence: sampler must cover the environment register");
    }
    if (samples < 2) {
        throw std::invalid_argument("persistence: need at least two samples");
    }
    std::vector<PureState> envs;
    envs.reserve(static_cast<std::size_t>(samples));
    for (std::int64_t s = 0; s < samples; ++s) {
        envs.push_back(sampler.state_at(static_cast<std::uint64_t>(s)));
    }
    return persistence_over_states(model, split, envs, grid, central);
}

}  // namespace einsel
