#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tamed/cli.hpp"
#include "tamed/errors.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string output_dir;
    int workers = 0;
};

void add_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--config", args.config_path, "Run configuration file")->required();
    sub->add_option("--set", args.overrides, "Override a config value (section.key=value)");
    sub->add_option("--output", args.output_dir, "Output directory (overrides [output] dir)");
    sub->add_option("--workers", args.workers, "Worker threads (0 = hardware concurrency)");
}

tamed::RunConfig load_config(const CommonArgs& args) {
    tamed::RunConfig config = tamed::RunConfig::parse_file(args.config_path);
    for (const auto& assignment : args.overrides) config.apply_override(assignment);
    return config;
}

std::string output_dir_of(const CommonArgs& args, const tamed::RunConfig& config) {
    return args.output_dir.empty() ? config.output.dir : args.output_dir;
}

}  // namespace

namespace tamed::cli {

int run(int argc, const char* const* argv) {
    CLI::App app{"Tamed Euler schemes for SDEs with boundary-exploding drift"};
    app.require_subcommand(1);

    CommonArgs sim_args, conv_args, check_args;
    CLI::App* sim = app.add_subcommand("simulate", "Write sample trajectories as CSV");
    add_common(sim, sim_args);
    CLI::App* conv = app.add_subcommand("converge", "Coupled strong-error rate experiment");
    add_common(conv, conv_args);
    CLI::App* check = app.add_subcommand("check", "Run drift/Lyapunov assumption checks");
    add_common(check, check_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    const int verbosity = verbosity_from_env();
    try {
        if (sim->parsed()) {
            const auto config = load_config(sim_args);
            return cmd_simulate(config, output_dir_of(sim_args, config), verbosity);
        }
        if (conv->parsed()) {
            const auto config = load_config(conv_args);
            return cmd_converge(config, output_dir_of(conv_args, config), conv_args.workers,
                                verbosity);
        }
        const auto config = load_config(check_args);
        return cmd_check(config, output_dir_of(check_args, config), verbosity);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ExperimentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitExperiment;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 70;
    }
}

}  // namespace tamed::cli

int main(int argc, char** argv) { return tamed::cli::run(argc, argv); }
