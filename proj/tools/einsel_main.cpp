#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "einsel/experiment.hpp"
#include "einsel/version.hpp"

namespace {

// Exit codes: 0 success, 2 config invalid, 3 numerical invariant violation,
// 4 I/O failure, 1 anything else.
int emit_error(int code, const std::string& kind, const std::string& message) {
    nlohmann::json err;
    err["error"]["code"] = code;
    err["error"]["kind"] = kind;
    err["error"]["message"] = message;
    std::cerr << err.dump() << std::endl;
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Central-spin decoherence and Haar-typicality experiment runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;
    std::uint64_t seed_override = 0;
    bool has_seed_override = false;

    CLI::App* run = app.add_subcommand("run", "Execute an experiment from a config file");
    run->add_option("--config", config_path, "Path to the JSON experiment config")->required();
    run->add_option("--output-dir", output_dir, "Directory for CSV and summary outputs");
    run->add_option("--seed-override", seed_override,
                    "Replace every seed in the config with this value")
        ->each([&](const std::string&) { has_seed_override = true; });

    CLI::App* validate = app.add_subcommand("validate", "Validate a config without running");
    validate->add_option("--config", config_path, "Path to the JSON experiment config")
        ->required();

    app.add_subcommand("version", "Print the toolkit version");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("version")) {
            std::cout << einsel::kVersion << std::endl;
            return 0;
        }

        einsel::ExperimentConfig config = einsel::load_config_file(config_path);

        if (app.got_subcommand("validate")) {
            nlohmann::json report;
            report["valid"] = true;
            report["config"] = config.canonical;
            std::cout << report.dump(2) << std::endl;
            return 0;
        }

        if (has_seed_override) {
            einsel::apply_seed_override(config, seed_override);
        }
        if (!output_dir.empty()) {
            config.output_dir = output_dir;
        }

        const einsel::RunOutput output = einsel::run_experiment(config);
        std::cout << output.summary.dump(2) << std::endl;
        return 0;
    } catch (const einsel::ConfigError& err) {
        return emit_error(2, "config", err.what());
    } catch (const einsel::NumericalError& err) {
        return emit_error(3, "numerical", err.what());
    } catch (const einsel::IoError& err) {
        return emit_error(4, "io", err.what());
    } catch (const std::exception& err) {
        return emit_error(1, "internal", err.what());
    }
}
