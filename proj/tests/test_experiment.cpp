#include <set>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "depsim/experiment.hpp"

using namespace depsim::cli;

namespace {

ExperimentConfig base_config(double f0) {
    ExperimentConfig cfg;
    cfg.f0 = f0;
    return cfg;
}

double cell_number(const Table::Cell& cell) {
    REQUIRE(std::holds_alternative<double>(cell));
    return std::get<double>(cell);
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("config validation rejects every bad field") {
    CHECK_THROWS_AS(validate(ExperimentConfig{}), ConfigError);  // no f0, no sweep

    auto bad = base_config(1.5);
    CHECK_THROWS_AS(validate(bad), ConfigError);
    bad = base_config(-0.1);
    CHECK_THROWS_AS(validate(bad), ConfigError);

    auto cfg = base_config(0.5);
    cfg.rounds = -1;
    CHECK_THROWS_AS(validate(cfg), ConfigError);

    cfg = base_config(0.5);
    cfg.trials = 0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);

    cfg = base_config(0.5);
    cfg.eta = 0.0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg.eta = 1.2;
    CHECK_THROWS_AS(validate(cfg), ConfigError);

    cfg = base_config(0.5);
    cfg.threads = 0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);

    cfg = base_config(0.5);
    cfg.sweep = {0.2, 1.7};
    CHECK_THROWS_AS(validate(cfg), ConfigError);

    CHECK_NOTHROW(validate(base_config(0.5)));
}

TEST_CASE("engine and format parsing") {
    CHECK(parse_engine("exact") == Engine::Exact);
    CHECK(parse_engine("mc") == Engine::Mc);
    CHECK(parse_engine("both") == Engine::Both);
    CHECK_THROWS_AS(parse_engine("fast"), ConfigError);
    CHECK(parse_format("csv") == OutputFormat::Csv);
    CHECK(parse_format("json") == OutputFormat::Json);
    CHECK_THROWS_AS(parse_format("xml"), ConfigError);
}

TEST_CASE("sweep takes precedence over f0") {
    auto cfg = base_config(0.5);
    cfg.sweep = {0.2, 0.8};
    CHECK(f0_values(cfg) == std::vector<double>{0.2, 0.8});
    cfg.sweep.clear();
    CHECK(f0_values(cfg) == std::vector<double>{0.5});
}

TEST_CASE("numbers print with 12 significant digits") {
    CHECK(format_number(25.0 / 29.0) == "0.862068965517");
    CHECK(format_number(4.0 / 7.0) == "0.571428571429");
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(0.0) == "0");
}

TEST_CASE("recursion table") {
    auto cfg = base_config(0.5);
    Table t = recursion_table(cfg);
    CHECK(t.columns == std::vector<std::string>{"f0", "p0", "f_prime", "verdict"});
    REQUIRE(t.rows.size() == 1);
    CHECK(cell_number(t.rows[0][0]) == 0.5);
    CHECK(cell_number(t.rows[0][1]) == doctest::Approx(5.0 / 7.0).epsilon(1e-12));
    CHECK(cell_number(t.rows[0][2]) == doctest::Approx(25.0 / 29.0).epsilon(1e-12));
    CHECK(std::get<std::string>(t.rows[0][3]) == "above threshold");

    cfg = base_config(0.125);
    t = recursion_table(cfg);
    CHECK(std::get<std::string>(t.rows[0][3]) == "at threshold");

    cfg = base_config(0.05);
    t = recursion_table(cfg);
    CHECK(std::get<std::string>(t.rows[0][3]) == "below threshold");
}

TEST_CASE("compare table") {
    auto cfg = base_config(0.5);
    cfg.sweep = {0.2, 0.5, 0.8};
    const Table t = compare_table(cfg);
    CHECK(t.columns.size() == 5);
    REQUIRE(t.rows.size() == 3);
    for (const auto& row : t.rows) {
        CHECK(cell_number(row[1]) == 1.0);  // corrected yield
    }
    CHECK(cell_number(t.rows[1][3]) == doctest::Approx(4.0 / 7.0).epsilon(1e-12));
    CHECK(cell_number(t.rows[1][4]) == doctest::Approx(0.875).epsilon(1e-12));
}

TEST_CASE("simulate table with the exact engine") {
    auto cfg = base_config(0.2);
    cfg.rounds = 6;
    cfg.engine = Engine::Exact;
    const Table t = simulate_table(cfg);
    CHECK(t.columns == std::vector<std::string>{"f0", "round", "fidelity_exact", "fidelity_mc",
                                                "mc_stderr", "pass_prob", "cumulative_yield"});
    REQUIRE(t.rows.size() == 7);
    CHECK(cell_number(t.rows[6][2]) > 0.99);
    for (const auto& row : t.rows) {
        CHECK(std::holds_alternative<std::monostate>(row[3]));  // mc fields empty
        CHECK(std::holds_alternative<std::monostate>(row[4]));
        const double fid = cell_number(row[2]);
        CHECK(fid >= 0.0);
        CHECK(fid <= 1.0);
    }
}

TEST_CASE("simulate table with the sampled engine only") {
    auto cfg = base_config(1.0);
    cfg.rounds = 1;
    cfg.engine = Engine::Mc;
    cfg.trials = 2000;
    const Table t = simulate_table(cfg);
    REQUIRE(t.rows.size() == 2);
    for (const auto& row : t.rows) {
        CHECK(std::holds_alternative<std::monostate>(row[2]));  // exact column empty
        CHECK(cell_number(row[3]) == 1.0);
    }
    // pass_prob column carries the sampled rate
    CHECK(cell_number(t.rows[0][5]) == 1.0);
    CHECK(cell_number(t.rows[1][5]) == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("simulate table is deterministic and thread-count independent") {
    auto cfg = base_config(0.5);
    cfg.rounds = 2;
    cfg.trials = 20000;
    cfg.seed = 42;
    const std::string a = render_csv(simulate_table(cfg));
    const std::string b = render_csv(simulate_table(cfg));
    cfg.threads = 4;
    const std::string c = render_csv(simulate_table(cfg));
    CHECK(a == b);
    CHECK(a == c);
}

TEST_CASE("exact and sampled engines agree in one table") {
    auto cfg = base_config(0.5);
    cfg.rounds = 1;
    cfg.trials = 50000;
    cfg.seed = 3;
    const Table t = simulate_table(cfg);
    REQUIRE(t.rows.size() == 2);
    const double exact = cell_number(t.rows[1][2]);
    const double sampled = cell_number(t.rows[1][3]);
    const double stderr_mc = cell_number(t.rows[1][4]);
    CHECK(std::abs(exact - sampled) < 4.0 * stderr_mc);
}

TEST_CASE("CSV rendering") {
    Table t;
    t.columns = {"a", "b", "c"};
    t.rows.push_back({1.0, std::monostate{}, std::string("x")});
    CHECK(render_csv(t) == "a,b,c\n1,,x\n");
}

TEST_CASE("JSON rendering round-trips through a parser") {
    auto cfg = base_config(0.5);
    cfg.rounds = 1;
    cfg.engine = Engine::Exact;
    const std::string text = render_json(simulate_table(cfg));
    const nlohmann::json doc = nlohmann::json::parse(text);
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == 2);
    for (const auto& row : doc) {
        CHECK(row.contains("f0"));
        CHECK(row.contains("round"));
        CHECK(row["fidelity_mc"].is_null());
        CHECK(row["fidelity_exact"].is_number());
    }
    CHECK(doc[0]["f0"].get<double>() == 0.5);
    CHECK(doc[1]["round"].get<int>() == 1);
}

TEST_CASE("config files merge under explicit flags") {
    const std::set<std::string> all_keys = {"f0",     "sweep", "rounds", "engine", "trials",
                                            "seed",   "eta",   "format", "out",    "threads"};

    SUBCASE("file fills unset fields") {
        ExperimentConfig cfg;
        apply_config_text(cfg,
                          R"({"f0": 0.5, "sweep": [0.2, 0.8], "engine": "mc",
                              "trials": 5000, "seed": 77, "eta": 0.9, "rounds": 3,
                              "format": "json", "out": "res.json", "threads": 2})",
                          all_keys, {});
        CHECK(cfg.f0 == 0.5);
        CHECK(cfg.sweep == std::vector<double>{0.2, 0.8});
        CHECK(cfg.engine == Engine::Mc);
        CHECK(cfg.trials == 5000);
        CHECK(cfg.seed == 77);
        CHECK(cfg.eta == 0.9);
        CHECK(cfg.rounds == 3);
        CHECK(cfg.format == OutputFormat::Json);
        CHECK(cfg.out == "res.json");
        CHECK(cfg.threads == 2);
    }
    SUBCASE("explicit flags win over the file") {
        ExperimentConfig cfg;
        cfg.f0 = 0.8;
        cfg.trials = 123;
        apply_config_text(cfg, R"({"f0": 0.5, "trials": 5000})", all_keys, {"f0", "trials"});
        CHECK(cfg.f0 == 0.8);
        CHECK(cfg.trials == 123);
    }
    SUBCASE("keys outside the command's set are rejected") {
        ExperimentConfig cfg;
        CHECK_THROWS_AS(apply_config_text(cfg, R"({"rounds": 3})", {"f0", "sweep"}, {}),
                        ConfigError);
        CHECK_THROWS_AS(apply_config_text(cfg, R"({"bogus": 1})", all_keys, {}), ConfigError);
    }
    SUBCASE("type errors are config errors") {
        ExperimentConfig cfg;
        CHECK_THROWS_AS(apply_config_text(cfg, R"({"f0": "half"})", all_keys, {}), ConfigError);
        CHECK_THROWS_AS(apply_config_text(cfg, R"({"sweep": 0.5})", all_keys, {}), ConfigError);
        CHECK_THROWS_AS(apply_config_text(cfg, R"({"trials": -5})", all_keys, {}), ConfigError);
        CHECK_THROWS_AS(apply_config_text(cfg, R"({"engine": "warp"})", all_keys, {}),
                        ConfigError);
    }
    SUBCASE("invalid JSON and non-objects are config errors") {
        ExperimentConfig cfg;
        CHECK_THROWS_AS(apply_config_text(cfg, "{not json", all_keys, {}), ConfigError);
        CHECK_THROWS_AS(apply_config_text(cfg, "[1, 2]", all_keys, {}), ConfigError);
    }
    SUBCASE("missing file is a config error") {
        ExperimentConfig cfg;
        CHECK_THROWS_AS(apply_config_file(cfg, "/nonexistent/path.json", all_keys, {}),
                        ConfigError);
    }
}

}  // TEST_SUITE
