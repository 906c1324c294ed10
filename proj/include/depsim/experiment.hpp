// Experiment-runner layer behind the command line: configuration with
// validation, the exact/sampled engines side by side, and plot-ready
// CSV/JSON tables with a fixed column schema.
#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace depsim::cli {

// Invalid configuration; the command line maps this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Engine { Exact, Mc, Both };
enum class OutputFormat { Csv, Json };

Engine parse_engine(const std::string& s);       // throws ConfigError
OutputFormat parse_format(const std::string& s);  // throws ConfigError

struct ExperimentConfig {
    std::optional<double> f0;
    std::vector<double> sweep;  // used instead of f0 when nonempty
    int rounds = 5;
    Engine engine = Engine::Both;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    double eta = 1.0;
    OutputFormat format = OutputFormat::Csv;
    std::string out;      // output path; empty writes to stdout
    unsigned threads = 1; // Monte Carlo worker threads; never changes results
};

// Checks every domain constraint before any computation runs; throws
// ConfigError with a message naming the offending field.
void validate(const ExperimentConfig& cfg);

// Merges a JSON config file (flat object, keys mirroring the flags: f0,
// sweep, rounds, engine, trials, seed, eta, format, out, threads) into cfg.
// A key is applied only when its flag is absent from `given`, so explicit
// flags always win. Keys outside `allowed` or with the wrong type raise
// ConfigError, as does an unreadable file.
void apply_config_file(ExperimentConfig& cfg, const std::string& path,
                       const std::set<std::string>& allowed,
                       const std::set<std::string>& given);

// Same merge from an already-loaded JSON document text.
void apply_config_text(ExperimentConfig& cfg, const std::string& text,
                       const std::set<std::string>& allowed,
                       const std::set<std::string>& given);

// The fidelities a command sweeps over: `sweep` when given, else {f0}.
std::vector<double> f0_values(const ExperimentConfig& cfg);

// A rendered result table. Cells are empty (monostate), numeric, or text;
// numbers print with 12 significant digits in both formats.
struct Table {
    using Cell = std::variant<std::monostate, double, std::string>;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

// Columns: f0, p0, f_prime, verdict. One row per f0 with the one-round
// closed form and its threshold verdict (above/at/below threshold).
Table recursion_table(const ExperimentConfig& cfg);

// Columns: f0, corrected_yield, corrected_fidelity, baseline_yield,
// baseline_fidelity. Correcting scheme vs discarding baseline after step 1.
Table compare_table(const ExperimentConfig& cfg);

// Columns: f0, round, fidelity_exact, fidelity_mc, mc_stderr, pass_prob,
// cumulative_yield. One row per (f0, round). Exact columns are empty under
// --engine mc and Monte Carlo columns under --engine exact; pass_prob and
// cumulative_yield report the exact engine whenever it ran, otherwise the
// sampled rates.
Table simulate_table(const ExperimentConfig& cfg);

std::string format_number(double v);  // 12 significant digits

std::string render_csv(const Table& table);
std::string render_json(const Table& table);
std::string render(const Table& table, OutputFormat format);

// Writes to cfg.out, or to stdout when no path is set. Throws
// std::runtime_error on I/O failure.
void write_output(const std::string& content, const ExperimentConfig& cfg);

}  // namespace depsim::cli
