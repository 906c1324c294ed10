// Command-line experiment runner for the two-step photon-pair purification
// protocol. Subcommands:
//   recursion  one-round closed form and threshold verdict per fidelity
//   simulate   exact and/or Monte Carlo protocol runs, one row per round
//   compare    correcting first step vs discarding baseline
#include <iostream>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "depsim/experiment.hpp"

namespace {

using depsim::cli::ExperimentConfig;

const std::set<std::string> kCommonKeys = {"f0", "sweep", "format", "out"};
const std::set<std::string> kEngineKeys = {"rounds", "engine", "trials",
                                           "seed", "eta", "threads"};

struct RawOptions {
    ExperimentConfig cfg;
    std::string engine = "both";
    std::string format = "csv";
    std::string config_path;
};

void add_common_options(CLI::App& sub, RawOptions& raw) {
    sub.add_option("--f0", raw.cfg.f0, "Initial Werner fidelity in [0, 1]");
    sub.add_option("--sweep", raw.cfg.sweep,
                   "Comma-separated list of fidelities (overrides --f0)")
        ->delimiter(',');
    sub.add_option("--format", raw.format, "Output format: csv or json")
        ->capture_default_str();
    sub.add_option("--out", raw.cfg.out, "Output file (default: stdout)");
    sub.add_option("--config", raw.config_path,
                   "JSON file with option defaults; flags override");
}

void add_engine_options(CLI::App& sub, RawOptions& raw) {
    sub.add_option("--rounds", raw.cfg.rounds, "Purification rounds after the correction step")
        ->capture_default_str();
    sub.add_option("--engine", raw.engine, "Engine: exact, mc, or both")
        ->capture_default_str();
    sub.add_option("--trials", raw.cfg.trials, "Monte Carlo trial count")
        ->capture_default_str();
    sub.add_option("--seed", raw.cfg.seed, "Master seed for Monte Carlo streams")
        ->capture_default_str();
    sub.add_option("--eta", raw.cfg.eta, "Wavelength-conversion efficiency in (0, 1]")
        ->capture_default_str();
    sub.add_option("--threads", raw.cfg.threads,
                   "Monte Carlo worker threads (never changes results)")
        ->capture_default_str();
}

// Flags the user actually supplied, by config-file key name.
std::set<std::string> given_flags(const CLI::App& sub) {
    std::set<std::string> given;
    for (const char* key : {"f0", "sweep", "rounds", "engine", "trials", "seed",
                            "eta", "format", "out", "threads"}) {
        const CLI::Option* opt = sub.get_option_no_throw(std::string("--") + key);
        if (opt != nullptr && opt->count() > 0) {
            given.insert(key);
        }
    }
    return given;
}

// Resolves string options, merges the config file, and emits the table.
template <typename TableFn>
void run_command(const CLI::App& sub, RawOptions& raw, bool engine_command, TableFn make_table) {
    raw.cfg.engine = depsim::cli::parse_engine(raw.engine);
    raw.cfg.format = depsim::cli::parse_format(raw.format);
    if (!raw.config_path.empty()) {
        std::set<std::string> allowed = kCommonKeys;
        if (engine_command) {
            allowed.insert(kEngineKeys.begin(), kEngineKeys.end());
        }
        depsim::cli::apply_config_file(raw.cfg, raw.config_path, allowed, given_flags(sub));
    }
    depsim::cli::write_output(
        depsim::cli::render(make_table(raw.cfg), raw.cfg.format), raw.cfg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-step entanglement purification simulator for photon pairs "
                 "entangled in polarization and frequency"};
    app.require_subcommand(1);

    RawOptions recursion_raw;
    CLI::App* recursion = app.add_subcommand(
        "recursion", "Evaluate the one-round fidelity map and threshold verdict");
    add_common_options(*recursion, recursion_raw);
    recursion->callback([&] {
        run_command(*recursion, recursion_raw, false, depsim::cli::recursion_table);
    });

    RawOptions simulate_raw;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Run the full protocol with the exact and/or Monte Carlo engine");
    add_common_options(*simulate, simulate_raw);
    add_engine_options(*simulate, simulate_raw);
    simulate->callback([&] {
        run_command(*simulate, simulate_raw, true, depsim::cli::simulate_table);
    });

    RawOptions compare_raw;
    CLI::App* compare = app.add_subcommand(
        "compare", "Compare the correcting first step against the discarding baseline");
    add_common_options(*compare, compare_raw);
    compare->callback([&] {
        run_command(*compare, compare_raw, false, depsim::cli::compare_table);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const depsim::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
