#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "einsel/errors.hpp"

namespace einsel {

enum class ExperimentKind { kEvolve, kKinematics, kPersistence };
enum class EnvKind { kHaar, kPlusXProduct, kZProduct };

/// Parsed and validated experiment configuration. Seeds are always explicit;
/// nothing in a run depends on wall-clock entropy.
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::kEvolve;
    int num_env = 0;

    // Exactly one of the two is set: an explicit coupling list or a seed for
    // i.i.d. uniform (0, 1] couplings.
    std::optional<std::vector<double>> coupling_values;
    std::optional<std::uint64_t> coupling_seed;

    // Bloch angles of the initial central state; default |+x>.
    double central_theta = 1.5707963267948966;
    double central_phi = 0.0;

    EnvKind env_kind = EnvKind::kHaar;
    std::optional<std::uint64_t> env_seed;

    std::vector<int> subsystem_qubits;  // environment-register indices

    double t_max = 0.0;
    int steps = 1;
    std::int64_t samples = 0;
    double epsilon = 0.01;

    std::filesystem::path output_dir = ".";

    /// The recognized input keys with normalized values, sorted; echoed into
    /// summary.json so reruns are comparable.
    nlohmann::json canonical;
};

/// Validates a JSON config document. Throws ConfigError on unknown keys,
/// missing required fields, or out-of-range values.
ExperimentConfig parse_config(const nlohmann::json& input);

/// Reads and parses a config file (IoError on read failure).
ExperimentConfig load_config_file(const std::filesystem::path& path);

/// Replaces every seed in the config (couplings distribution seed and
/// environment seed, where present) and re-canonicalizes.
void apply_seed_override(ExperimentConfig& config, std::uint64_t seed);

struct RunOutput {
    nlohmann::json summary;
    std::vector<std::filesystem::path> files_written;
};

RunOutput run_evolve(const ExperimentConfig& config);
RunOutput run_kinematics(const ExperimentConfig& config);
RunOutput run_persistence(const ExperimentConfig& config);

/// Dispatches on config.experiment and writes the experiment's CSV plus
/// summary.json into config.output_dir.
RunOutput run_experiment(const ExperimentConfig& config);

/// Shortest decimal text that parses back to exactly `value`.
/// Non-finite input signals a numerical invariant violation.
std::string format_double(double value);

/// Write-temp-then-rename so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace einsel
