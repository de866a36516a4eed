#include "einsel/experiment.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "einsel/centralspin.hpp"
#include "einsel/kinematics.hpp"
#include "einsel/qcore.hpp"
#include "einsel/version.hpp"

namespace einsel {

namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "experiment", "num_env",          "couplings", "central_state", "env_spec",
    "subsystem_qubits", "time", "samples",   "epsilon",       "output_dir"};

constexpr int kMaxRegisterQubits = 24;  // 2^24 amplitudes; guards accidental OOM

[[noreturn]] void fail(const std::string& message) { throw ConfigError(message); }

double require_finite_number(const json& j, const std::string& key) {
    if (!j.is_number()) {
        fail("'" + key + "' must be a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        fail("'" + key + "' must be finite");
    }
    return v;
}

std::uint64_t require_seed(const json& j, const std::string& key) {
    if (!j.is_number_unsigned()) {
        fail("'" + key + "' must be a non-negative integer seed");
    }
    return j.get<std::uint64_t>();
}

std::int64_t require_integer(const json& j, const std::string& key) {
    if (!j.is_number_integer() && !j.is_number_unsigned()) {
        fail("'" + key + "' must be an integer");
    }
    return j.get<std::int64_t>();
}

std::string experiment_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::kEvolve: return "evolve";
        case ExperimentKind::kKinematics: return "kinematics";
        case ExperimentKind::kPersistence: return "persistence";
    }
    return "";
}

std::string env_kind_name(EnvKind kind) {
    switch (kind) {
        case EnvKind::kHaar: return "haar";
        case EnvKind::kPlusXProduct: return "plus_x_product";
        case EnvKind::kZProduct: return "z_product";
    }
    return "";
}

void parse_couplings(const json& j, ExperimentConfig& config) {
    if (j.is_array()) {
        std::vector<double> values;
        values.reserve(j.size());
        for (const auto& entry : j) {
            values.push_back(require_finite_number(entry, "couplings[]"));
        }
        if (static_cast<int>(values.size()) != config.num_env) {
            fail("'couplings' list must have num_env entries");
        }
        config.coupling_values = std::move(values);
        return;
    }
    if (j.is_object()) {
        if (!j.contains("distribution") || j.at("distribution") != "uniform") {
            fail("'couplings.distribution' must be \"uniform\"");
        }
        if (!j.contains("seed")) {
            fail("'couplings.seed' is required for distribution couplings");
        }
        for (const auto& [key, value] : j.items()) {
            (void)value;
            if (key != "distribution" && key != "seed") {
                fail("unknown key 'couplings." + key + "'");
            }
        }
        config.coupling_seed = require_seed(j.at("seed"), "couplings.seed");
        return;
    }
    fail("'couplings' must be a list of values or {distribution, seed}");
}

void parse_env_spec(const json& j, ExperimentConfig& config) {
    if (!j.is_object() || !j.contains("kind")) {
        fail("'env_spec' must be an object with a 'kind'");
    }
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "kind" && key != "seed") {
            fail("unknown key 'env_spec." + key + "'");
        }
    }
    const std::string kind = j.at("kind").is_string() ? j.at("kind").get<std::string>() : "";
    if (kind == "haar") {
        config.env_kind = EnvKind::kHaar;
    } else if (kind == "plus_x_product") {
        config.env_kind = EnvKind::kPlusXProduct;
    } else if (kind == "z_product") {
        config.env_kind = EnvKind::kZProduct;
    } else {
        fail("'env_spec.kind' must be haar, plus_x_product or z_product");
    }
    if (j.contains("seed")) {
        config.env_seed = require_seed(j.at("seed"), "env_spec.seed");
    }
    if (config.env_kind == EnvKind::kHaar && !config.env_seed) {
        fail("'env_spec.seed' is required for haar environments");
    }
}

void parse_subsystem(const json& j, ExperimentConfig& config) {
    if (!j.is_array() || j.empty()) {
        fail("'subsystem_qubits' must be a non-empty list of environment spin indices");
    }
    std::vector<int> qubits;
    for (const auto& entry : j) {
        const auto q = require_integer(entry, "subsystem_qubits[]");
        if (q < 0 || q >= config.num_env) {
            fail("'subsystem_qubits' index out of range [0, num_env)");
        }
        qubits.push_back(static_cast<int>(q));
    }
    std::set<int> unique(qubits.begin(), qubits.end());
    if (unique.size() != qubits.size()) {
        fail("'subsystem_qubits' entries must be distinct");
    }
    if (static_cast<int>(qubits.size()) >= config.num_env) {
        fail("'subsystem_qubits' must leave at least one traced-out spin");
    }
    config.subsystem_qubits = std::move(qubits);
}

void parse_time(const json& j, ExperimentConfig& config) {
    if (!j.is_object() || !j.contains("t_max") || !j.contains("steps")) {
        fail("'time' must be an object {t_max, steps}");
    }
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "t_max" && key != "steps") {
            fail("unknown key 'time." + key + "'");
        }
    }
    config.t_max = require_finite_number(j.at("t_max"), "time.t_max");
    const auto steps = require_integer(j.at("steps"), "time.steps");
    if (steps < 1) {
        fail("'time.steps' must be >= 1");
    }
    if (config.t_max < 0.0 || (steps > 1 && config.t_max <= 0.0)) {
        fail("'time.t_max' must be positive for steps > 1");
    }
    config.steps = static_cast<int>(steps);
}

// Canonical form: the recognized keys that were present, values normalized.
json canonicalize(const json& input) {
    json canonical = json::object();
    for (const auto& [key, value] : input.items()) {
        canonical[key] = value;
    }
    return canonical;
}

PureState central_from_angles(double theta, double phi) {
    Eigen::VectorXcd amps(2);
    amps(0) = Complex{std::cos(theta / 2.0), 0.0};
    amps(1) = std::polar(std::sin(theta / 2.0), phi);
    return PureState(std::move(amps));
}

CentralSpinModel model_from_config(const ExperimentConfig& config) {
    if (config.coupling_values) {
        return CentralSpinModel(Eigen::Map<const Eigen::VectorXd>(
            config.coupling_values->data(),
            static_cast<Eigen::Index>(config.coupling_values->size())));
    }
    return CentralSpinModel::random_uniform(config.num_env, *config.coupling_seed);
}

ProductEnvironment product_env_from_config(const ExperimentConfig& config) {
    return config.env_kind == EnvKind::kPlusXProduct
               ? ProductEnvironment::plus_x(config.num_env)
               : ProductEnvironment::z_basis(config.num_env);
}

class CsvBuilder {
public:
    explicit CsvBuilder(const std::vector<std::string>& header) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i > 0) out_ << ',';
            out_ << header[i];
        }
        out_ << '\n';
        columns_ = header.size();
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
    std::size_t columns_ = 0;
};

json base_summary(const ExperimentConfig& config) {
    json summary;
    summary["experiment"] = experiment_name(config.experiment);
    summary["version"] = kVersion;
    summary["config"] = config.canonical;
    return summary;
}

RunOutput finalize(const ExperimentConfig& config, json summary, const std::string& csv_name,
                   const std::string& csv_contents,
                   std::chrono::steady_clock::time_point started) {
    const auto elapsed = std::chrono::steady_clock::now() - started;
    summary["wall_time_seconds"] =
        std::chrono::duration_cast<std::chrono::duration<double>>(elapsed).count();

    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + config.output_dir.string() +
                      "': " + ec.message());
    }

    RunOutput output;
    const auto csv_path = config.output_dir / csv_name;
    write_file_atomic(csv_path, csv_contents);
    output.files_written.push_back(csv_path);

    const auto summary_path = config.output_dir / "summary.json";
    write_file_atomic(summary_path, summary.dump(2) + "\n");
    output.files_written.push_back(summary_path);

    output.summary = std::move(summary);
    return output;
}

}  // namespace

ExperimentConfig parse_config(const json& input) {
    if (!input.is_object()) {
        fail("config must be a JSON object");
    }
    for (const auto& [key, value] : input.items()) {
        (void)value;
        if (kKnownKeys.find(key) == kKnownKeys.end()) {
            fail("unknown config key '" + key + "'");
        }
    }

    ExperimentConfig config;

    if (!input.contains("experiment") || !input.at("experiment").is_string()) {
        fail("'experiment' must be one of evolve, kinematics, persistence");
    }
    const std::string kind = input.at("experiment").get<std::string>();
    if (kind == "evolve") {
        config.experiment = ExperimentKind::kEvolve;
    } else if (kind == "kinematics") {
        config.experiment = ExperimentKind::kKinematics;
    } else if (kind == "persistence") {
        config.experiment = ExperimentKind::kPersistence;
    } else {
        fail("'experiment' must be one of evolve, kinematics, persistence");
    }

    if (!input.contains("num_env")) {
        fail("'num_env' is required");
    }
    const auto num_env = require_integer(input.at("num_env"), "num_env");
    if (num_env < 1 || num_env + 1 > kMaxRegisterQubits) {
        fail("'num_env' must lie in [1, " + std::to_string(kMaxRegisterQubits - 1) + "]");
    }
    config.num_env = static_cast<int>(num_env);

    const bool needs_model = config.experiment != ExperimentKind::kKinematics;
    const bool needs_sampling = config.experiment != ExperimentKind::kEvolve;
    const bool needs_time = config.experiment != ExperimentKind::kKinematics;

    if (input.contains("couplings")) {
        parse_couplings(input.at("couplings"), config);
    } else if (needs_model) {
        fail("'couplings' is required for " + kind);
    }

    if (input.contains("central_state")) {
        const json& j = input.at("central_state");
        if (!j.is_object() || !j.contains("theta") || !j.contains("phi")) {
            fail("'central_state' must be an object {theta, phi}");
        }
        for (const auto& [key, value] : j.items()) {
            (void)value;
            if (key != "theta" && key != "phi") {
                fail("unknown key 'central_state." + key + "'");
            }
        }
        config.central_theta = require_finite_number(j.at("theta"), "central_state.theta");
        config.central_phi = require_finite_number(j.at("phi"), "central_state.phi");
    } else if (config.experiment == ExperimentKind::kEvolve) {
        fail("'central_state' is required for evolve");
    }

    if (input.contains("env_spec")) {
        parse_env_spec(input.at("env_spec"), config);
    } else {
        fail("'env_spec' is required");
    }
    if (config.experiment == ExperimentKind::kEvolve && config.env_kind == EnvKind::kHaar) {
        fail("evolve requires a product environment (plus_x_product or z_product)");
    }
    if (config.experiment == ExperimentKind::kKinematics && config.env_kind != EnvKind::kHaar) {
        fail("kinematics requires env_spec.kind = haar");
    }

    if (input.contains("subsystem_qubits")) {
        parse_subsystem(input.at("subsystem_qubits"), config);
    } else if (needs_sampling) {
        fail("'subsystem_qubits' is required for " + kind);
    }

    if (input.contains("time")) {
        parse_time(input.at("time"), config);
    } else if (needs_time) {
        fail("'time' is required for " + kind);
    }

    if (input.contains("samples")) {
        const auto samples = require_integer(input.at("samples"), "samples");
        if (samples < 2) {
            fail("'samples' must be >= 2");
        }
        config.samples = samples;
    } else if (needs_sampling) {
        fail("'samples' is required for " + kind);
    }

    if (input.contains("epsilon")) {
        config.epsilon = require_finite_number(input.at("epsilon"), "epsilon");
        if (!(config.epsilon > 0.0 && config.epsilon < 1.0)) {
            fail("'epsilon' must lie in (0, 1)");
        }
    }

    if (input.contains("output_dir")) {
        if (!input.at("output_dir").is_string()) {
            fail("'output_dir' must be a string");
        }
        config.output_dir = input.at("output_dir").get<std::string>();
    }

    config.canonical = canonicalize(input);
    return config;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file '" + path.string() + "'");
    }
    json parsed;
    try {
        parsed = json::parse(in);
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("config is not valid JSON: ") + err.what());
    }
    return parse_config(parsed);
}

void apply_seed_override(ExperimentConfig& config, std::uint64_t seed) {
    if (config.coupling_seed) {
        config.coupling_seed = seed;
        config.canonical["couplings"]["seed"] = seed;
    }
    if (config.env_seed) {
        config.env_seed = seed;
        config.canonical["env_spec"]["seed"] = seed;
    }
}

std::string format_double(double value) {
    if (!std::isfinite(value)) {
        throw NumericalError("non-finite value in output");
    }
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open '" + tmp.string() + "' for writing");
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            throw IoError("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw IoError("cannot rename '" + tmp.string() + "': " + ec.message());
    }
}

RunOutput run_evolve(const ExperimentConfig& config) {
    const auto started = std::chrono::steady_clock::now();
    const CentralSpinModel model = model_from_config(config);
    const PureState central = central_from_angles(config.central_theta, config.central_phi);
    const ProductEnvironment env = product_env_from_config(config);
    const TimeGrid grid = TimeGrid::uniform(config.t_max, config.steps);

    const auto trajectory = bloch_trajectory(model, central, env, grid);
    const DecoherenceTime td = decoherence_time(model, env, config.epsilon);

    CsvBuilder csv({"t", "bloch_x", "bloch_y", "bloch_z", "purity", "re_r", "im_r", "abs_r"});
    const double z0 = trajectory.front().bloch.z;
    double max_z_drift = 0.0;
    double final_abs_r = 0.0;
    double post_td_max_abs_r = -1.0;
    for (const auto& point : trajectory) {
        const Complex r = decoherence_factor(model, env, point.t);
        const double abs_r = std::abs(r);
        max_z_drift = std::max(max_z_drift, std::abs(point.bloch.z - z0));
        final_abs_r = abs_r;
        if (td.decohering && point.t >= td.time) {
            post_td_max_abs_r = std::max(post_td_max_abs_r, abs_r);
        }
        csv.row({format_double(point.t), format_double(point.bloch.x),
                 format_double(point.bloch.y), format_double(point.bloch.z),
                 format_double(point.purity), format_double(r.real()),
                 format_double(r.imag()), format_double(abs_r)});
    }

    json summary = base_summary(config);
    summary["decohering"] = td.decohering;
    summary["t_d"] = td.decohering ? json(td.time) : json(nullptr);
    summary["final_abs_r"] = final_abs_r;
    summary["max_z_drift"] = max_z_drift;
    summary["post_td_max_abs_r"] =
        post_td_max_abs_r >= 0.0 ? json(post_td_max_abs_r) : json(nullptr);
    return finalize(config, std::move(summary), "trajectory.csv", csv.str(), started);
}

RunOutput run_kinematics(const ExperimentConfig& config) {
    const auto started = std::chrono::steady_clock::now();
    const SubsystemSplit split(QubitSubset(config.subsystem_qubits), config.num_env);
    const HaarSampler sampler(config.num_env, *config.env_seed);

    const std::vector<double> distances = mc_distances(split, config.samples, sampler);
    const DistanceStats stats =
        summarize_distances(distances, average_distance_bound(split));

    CsvBuilder csv({"sample_index", "trace_distance"});
    for (std::size_t s = 0; s < distances.size(); ++s) {
        csv.row({std::to_string(s), format_double(distances[s])});
    }

    json summary = base_summary(config);
    summary["sample_count"] = stats.sample_count;
    summary["mean"] = stats.mean;
    summary["std_error"] = stats.std_error;
    summary["max"] = stats.max;
    summary["bound_value"] = stats.bound_value;
    summary["bound_satisfied"] = stats.mean <= stats.bound_value + 3.0 * stats.std_error;
    return finalize(config, std::move(summary), "distances.csv", csv.str(), started);
}

RunOutput run_persistence(const ExperimentConfig& config) {
    const auto started = std::chrono::steady_clock::now();
    const CentralSpinModel model = model_from_config(config);
    const PureState central = central_from_angles(config.central_theta, config.central_phi);
    const TimeGrid grid = TimeGrid::uniform(config.t_max, config.steps);

    // Config subsystem indices address the environment register; the evolved
    // register places the central spin at qubit 0, so shift by one.
    std::vector<int> full_register_qubits;
    full_register_qubits.reserve(config.subsystem_qubits.size());
    for (int q : config.subsystem_qubits) {
        full_register_qubits.push_back(q + 1);
    }
    const SubsystemSplit split(QubitSubset(full_register_qubits), model.num_qubits());

    std::vector<TimedDistanceStats> series;
    if (config.env_kind == EnvKind::kHaar) {
        const HaarSampler sampler(config.num_env, *config.env_seed);
        series = persistence_experiment(model, split, config.samples, grid, sampler, central);
    } else {
        const std::vector<PureState> envs(static_cast<std::size_t>(config.samples),
                                          product_env_from_config(config).to_state());
        series = persistence_over_states(model, split, envs, grid, central);
    }

    CsvBuilder csv({"t", "mean_distance", "std_error", "max_distance", "bound_value"});
    double max_mean = 0.0;
    bool bound_all = true;
    for (const auto& [t, stats] : series) {
        max_mean = std::max(max_mean, stats.mean);
        bound_all = bound_all && stats.mean <= stats.bound_value + 3.0 * stats.std_error;
        csv.row({format_double(t), format_double(stats.mean), format_double(stats.std_error),
                 format_double(stats.max), format_double(stats.bound_value)});
    }

    json summary = base_summary(config);
    summary["t0_mean_distance"] = series.front().stats.mean;
    summary["max_mean_distance"] = max_mean;
    summary["bound_value"] = series.front().stats.bound_value;
    summary["bound_satisfied_all_t"] = bound_all;
    return finalize(config, std::move(summary), "persistence.csv", csv.str(), started);
}

RunOutput run_experiment(const ExperimentConfig& config) {
    switch (config.experiment) {
        case ExperimentKind::kEvolve: return run_evolve(config);
        case ExperimentKind::kKinematics: return run_kinematics(config);
        case ExperimentKind::kPersistence: return run_persistence(config);
    }
    throw std::logic_error("unreachable experiment kind");
}

}  // namespace einsel
