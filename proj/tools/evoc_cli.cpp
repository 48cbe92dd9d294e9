// evoc: command-line front end for runs, sweeps, the fitness oracle and
// snapshot rendering.
//
// Exit codes: 0 success, 1 validation error, 2 I/O error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "evoc/experiments.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kIo = 2;

evoc::ExperimentPlan load_plan(const std::string& path, std::optional<std::uint64_t> seed,
                               const std::optional<std::string>& out_dir) {
    auto plan = evoc::load_config(path);
    if (seed) plan.base.seed = *seed;
    if (out_dir) plan.output_dir = *out_dir;
    return plan;
}

int guarded(const std::function<void()>& body) {
    try {
        body();
        return kOk;
    } catch (const evoc::IoError& e) {
        std::cerr << "evoc: " << e.what() << '\n';
        return kIo;
    } catch (const evoc::ConfigError& e) {
        std::cerr << "evoc: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::invalid_argument& e) {
        std::cerr << "evoc: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::out_of_range& e) {
        std::cerr << "evoc: " << e.what() << '\n';
        return kInvalid;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cultural evolution of body actions on a grid of inventing and imitating agents"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;

    auto* run_cmd = app.add_subcommand("run", "Run the base configuration (sweep lines are ignored)");
    run_cmd->add_option("config", config_path, "Configuration file")->required();
    run_cmd->add_option("--seed", seed, "Override the master seed");
    run_cmd->add_option("--out", out_dir, "Override output.dir");

    auto* sweep_cmd = app.add_subcommand("sweep", "Run every variant of the configured sweep grid");
    sweep_cmd->add_option("config", config_path, "Configuration file")->required();
    sweep_cmd->add_option("--seed", seed, "Override the master seed");
    sweep_cmd->add_option("--out", out_dir, "Override output.dir");

    std::string fitness_name = "F1";
    std::optional<std::string> oracle_out;
    auto* oracle_cmd = app.add_subcommand("oracle", "Enumerate all 729 actions with their fitness");
    oracle_cmd->add_option("--fitness", fitness_name, "F1 or F2")
        ->check(CLI::IsMember({"F1", "F2"}));
    oracle_cmd->add_option("--out", oracle_out, "Write CSV here instead of standard output");

    std::string snapshot_path;
    auto* render_cmd = app.add_subcommand("snapshot-render", "Show a grid snapshot as glyphs");
    render_cmd->add_option("snapshot", snapshot_path, "Snapshot file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kInvalid;
    }

    if (*run_cmd || *sweep_cmd) {
        return guarded([&] {
            auto plan = load_plan(config_path, seed, out_dir);
            if (*run_cmd) plan.sweeps.clear();
            evoc::run_plan(plan);
        });
    }
    if (*oracle_cmd) {
        return guarded([&] {
            evoc::FitnessSpec spec;
            spec.kind = fitness_name == "F2" ? evoc::FitnessKind::F2 : evoc::FitnessKind::F1;
            const std::string csv = evoc::render_landscape_csv(evoc::enumerate_landscape(spec));
            if (!oracle_out) {
                std::cout << csv;
                return;
            }
            std::ofstream out(*oracle_out, std::ios::binary);
            if (!(out << csv)) throw evoc::IoError("cannot write '" + *oracle_out + "'");
        });
    }
    return guarded([&] {
        std::ifstream in(snapshot_path);
        if (!in) throw evoc::IoError("cannot read snapshot '" + snapshot_path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        std::cout << evoc::render_snapshot_glyphs(buf.str());
    });
}
