#include "depsim/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "depsim/montecarlo.hpp"
#include "depsim/protocol.hpp"

namespace depsim::cli {

namespace {

using Cell = Table::Cell;

Cell cell(double v) {
    if (std::isnan(v)) {
        return std::monostate{};
    }
    return v;
}

// Output hygiene: estimators can overshoot [0, 1] by rounding noise.
double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

Engine parse_engine(const std::string& s) {
    if (s == "exact") return Engine::Exact;
    if (s == "mc") return Engine::Mc;
    if (s == "both") return Engine::Both;
    throw ConfigError("engine must be one of exact, mc, both (got '" + s + "')");
}

OutputFormat parse_format(const std::string& s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw ConfigError("format must be csv or json (got '" + s + "')");
}

void validate(const ExperimentConfig& cfg) {
    if (!cfg.f0 && cfg.sweep.empty()) {
        throw ConfigError("either --f0 or --sweep is required");
    }
    for (double f : f0_values(cfg)) {
        if (!(f >= 0.0 && f <= 1.0)) {
            throw ConfigError("fidelity " + format_number(f) + " lies outside [0, 1]");
        }
    }
    if (cfg.rounds < 0) {
        throw ConfigError("rounds must be nonnegative");
    }
    if (cfg.trials == 0) {
        throw ConfigError("trials must be at least 1");
    }
    if (!(cfg.eta > 0.0 && cfg.eta <= 1.0)) {
        throw ConfigError("eta must lie in (0, 1]");
    }
    if (cfg.threads == 0) {
        throw ConfigError("threads must be at least 1");
    }
}

std::vector<double> f0_values(const ExperimentConfig& cfg) {
    if (!cfg.sweep.empty()) {
        return cfg.sweep;
    }
    if (cfg.f0) {
        return {*cfg.f0};
    }
    return {};
}

namespace {

double config_number(const nlohmann::json& v, const std::string& key) {
    if (!v.is_number()) {
        throw ConfigError("config key '" + key + "' must be a number");
    }
    return v.get<double>();
}

std::string config_string(const nlohmann::json& v, const std::string& key) {
    if (!v.is_string()) {
        throw ConfigError("config key '" + key + "' must be a string");
    }
    return v.get<std::string>();
}

template <typename T>
T config_unsigned(const nlohmann::json& v, const std::string& key) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ConfigError("config key '" + key + "' must be a nonnegative integer");
    }
    return static_cast<T>(v.get<unsigned long long>());
}

}  // namespace

void apply_config_text(ExperimentConfig& cfg, const std::string& text,
                       const std::set<std::string>& allowed,
                       const std::set<std::string>& given) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("config file must contain a JSON object");
    }
    for (const auto& [key, value] : doc.items()) {
        if (!allowed.count(key)) {
            throw ConfigError("config key '" + key + "' is not valid for this command");
        }
        if (given.count(key)) {
            continue;  // explicit flag wins
        }
        if (key == "f0") {
            cfg.f0 = config_number(value, key);
        } else if (key == "sweep") {
            if (!value.is_array()) {
                throw ConfigError("config key 'sweep' must be an array of numbers");
            }
            cfg.sweep.clear();
            for (const auto& element : value) {
                cfg.sweep.push_back(config_number(element, key));
            }
        } else if (key == "rounds") {
            if (!value.is_number_integer()) {
                throw ConfigError("config key 'rounds' must be an integer");
            }
            cfg.rounds = value.get<int>();
        } else if (key == "engine") {
            cfg.engine = parse_engine(config_string(value, key));
        } else if (key == "trials") {
            cfg.trials = config_unsigned<std::uint64_t>(value, key);
        } else if (key == "seed") {
            cfg.seed = config_unsigned<std::uint64_t>(value, key);
        } else if (key == "eta") {
            cfg.eta = config_number(value, key);
        } else if (key == "format") {
            cfg.format = parse_format(config_string(value, key));
        } else if (key == "out") {
            cfg.out = config_string(value, key);
        } else if (key == "threads") {
            cfg.threads = config_unsigned<unsigned>(value, key);
        }
    }
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path,
                       const std::set<std::string>& allowed,
                       const std::set<std::string>& given) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read config file: " + path);
    }
    std::ostringstream text;
    text << in.rdbuf();
    apply_config_text(cfg, text.str(), allowed, given);
}

Table recursion_table(const ExperimentConfig& cfg) {
    validate(cfg);
    Table table;
    table.columns = {"f0", "p0", "f_prime", "verdict"};
    for (double f : f0_values(cfg)) {
        const double p0 = (4.0 * f + 3.0) / 7.0;
        const double f_prime = fidelity_recursion(f);
        std::string verdict = "at threshold";
        if (f_prime > p0 + kAlgebraTol) {
            verdict = "above threshold";
        } else if (f_prime < p0 - kAlgebraTol) {
            verdict = "below threshold";
        }
        table.rows.push_back({f, p0, f_prime, verdict});
    }
    return table;
}

Table compare_table(const ExperimentConfig& cfg) {
    validate(cfg);
    Table table;
    table.columns = {"f0", "corrected_yield", "corrected_fidelity", "baseline_yield",
                     "baseline_fidelity"};
    for (double f : f0_values(cfg)) {
        const SchemeComparison cmp = compare_schemes(f);
        table.rows.push_back({cmp.f0, cmp.corrected_yield, clamp01(cmp.corrected_fidelity),
                              cmp.baseline_yield, clamp01(cmp.baseline_fidelity)});
    }
    return table;
}

Table simulate_table(const ExperimentConfig& cfg) {
    validate(cfg);
    const bool run_exact = cfg.engine != Engine::Mc;
    const bool run_mc = cfg.engine != Engine::Exact;

    Table table;
    table.columns = {"f0", "round", "fidelity_exact", "fidelity_mc", "mc_stderr",
                     "pass_prob", "cumulative_yield"};
    for (double f : f0_values(cfg)) {
        PurificationTrace trace;
        if (run_exact) {
            trace = iterate(f, cfg.rounds, cfg.eta);
        }
        std::vector<mc::McStatistics> stats;
        if (run_mc) {
            stats = mc::run_experiment(f, cfg.rounds, cfg.trials, mc::SeedSpec{cfg.seed},
                                       cfg.eta, cfg.threads);
        }
        for (int r = 0; r <= cfg.rounds; ++r) {
            std::vector<Cell> row(7, std::monostate{});
            row[0] = f;
            row[1] = static_cast<double>(r);
            if (run_exact) {
                const TraceRow& tr = trace.rounds[static_cast<std::size_t>(r)];
                row[2] = clamp01(tr.fidelity);
                row[5] = tr.pass_probability;
                row[6] = tr.cumulative_yield;
            }
            if (run_mc) {
                const mc::McStatistics& st = stats[static_cast<std::size_t>(r)];
                row[3] = cell(st.fidelity_estimate);
                row[4] = cell(st.standard_error);
                if (!run_exact && st.trials > 0) {
                    row[5] = static_cast<double>(st.kept) / static_cast<double>(st.trials);
                    row[6] = static_cast<double>(st.kept) / static_cast<double>(stats[0].trials);
                }
            }
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string render_csv(const Table& table) {
    std::ostringstream out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out << (i ? "," : "") << table.columns[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                out << ',';
            }
            if (const double* num = std::get_if<double>(&row[i])) {
                out << format_number(*num);
            } else if (const std::string* text = std::get_if<std::string>(&row[i])) {
                out << *text;
            }
        }
        out << '\n';
    }
    return out.str();
}

std::string render_json(const Table& table) {
    std::ostringstream out;
    out << "[\n";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out << "  {";
        const auto& row = table.rows[r];
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? ", " : "") << '"' << table.columns[i] << "\": ";
            if (const double* num = std::get_if<double>(&row[i])) {
                out << format_number(*num);
            } else if (const std::string* text = std::get_if<std::string>(&row[i])) {
                out << '"' << json_escape(*text) << '"';
            } else {
                out << "null";
            }
        }
        out << '}' << (r + 1 < table.rows.size() ? "," : "") << '\n';
    }
    out << "]\n";
    return out.str();
}

std::string render(const Table& table, OutputFormat format) {
    return format == OutputFormat::Csv ? render_csv(table) : render_json(table);
}

void write_output(const std::string& content, const ExperimentConfig& cfg) {
    if (cfg.out.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
        throw std::runtime_error("cannot open output file: " + cfg.out);
    }
    file << content;
    if (!file) {
        throw std::runtime_error("failed writing output file: " + cfg.out);
    }
}

}  // namespace depsim::cli
