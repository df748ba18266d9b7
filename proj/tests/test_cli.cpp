#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fairens/csv.hpp"
#include "dot_oracle.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliRun {
    int exit_code = -1;
    std::string stdout_text;
};

CliRun run_cli(const std::string& args, const fs::path& dir) {
    fs::path out = dir / "stdout.txt";
    std::string cmd = std::string(FAIRENS_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    CliRun r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    r.stdout_text = ss.str();
    return r;
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("cli_test_" + std::to_string(std::rand()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string two_synth_config(const fs::path& dir, const std::string& extra = "") {
    fs::path cfg = dir / "config.json";
    std::string out_dir = (dir / "out").string();
    write_file(cfg, R"cfg({
  "datasets": [
    {"name": "alpha", "synthetic": {"n": 150, "rate_priv": 0.7, "rate_unpriv": 0.5, "features": 4, "seed": 5}},
    {"name": "beta", "synthetic": {"n": 160, "rate_priv": 0.8, "rate_unpriv": 0.3, "features": 4, "seed": 6}}
  ],
  "seed": 99,
  "out": ")cfg" + out_dir + R"cfg(",
  "cv": {"pipelines": ["tree", "dummy(label=1)"], "n_trials": 1, "k": 3})cfg" +
                        extra + "\n}\n");
    return cfg.string();
}

}  // namespace

TEST_CASE("encode prints a summary row per dataset") {
    TempDir dir;
    auto cfg = two_synth_config(dir.path);
    auto r = run_cli("encode --config " + cfg, dir.path);
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text.find("alpha") != std::string::npos);
    CHECK(r.stdout_text.find("baseline_di") != std::string::npos);
    CHECK(fs::exists(dir.path / "out" / "alpha.encoded.csv"));
    CHECK(fs::exists(dir.path / "out" / "alpha.meta.json"));
    // synthetic DI lands near the configured ratio
    auto meta = json::parse(read_file(dir.path / "out" / "datasets.meta.json"));
    CHECK(meta.at("alpha").at("baseline_di").get<double>() > 0.6);
    CHECK(meta.at("beta").at("baseline_di").get<double>() < 0.5);
}

TEST_CASE("missing config file exits with the configuration code") {
    TempDir dir;
    auto r = run_cli("encode --config definitely_missing.json", dir.path);
    CHECK(r.exit_code == 2);
}

TEST_CASE("config referencing a missing csv exits with the configuration code") {
    TempDir dir;
    fs::path cfg = dir.path / "bad.json";
    write_file(cfg, R"cfg({"datasets": [{"csv": "nope.csv", "recipe": "nope.json"}]})cfg");
    auto r = run_cli("encode --config " + cfg.string(), dir.path);
    CHECK(r.exit_code == 2);
}

TEST_CASE("cv writes a schema-versioned store and resumes idempotently") {
    TempDir dir;
    auto cfg = two_synth_config(dir.path);
    auto r1 = run_cli("cv --config " + cfg, dir.path);
    REQUIRE(r1.exit_code == 0);
    fs::path store = dir.path / "out" / "results.jsonl";
    REQUIRE(fs::exists(store));
    std::string first = read_file(store);
    CHECK(first.find("trialrecord/1") != std::string::npos);
    // 2 datasets x 2 pipelines x 3 records
    CHECK(std::count(first.begin(), first.end(), '\n') == 1 + 12);

    auto r2 = run_cli("cv --config " + cfg, dir.path);
    REQUIRE(r2.exit_code == 0);
    CHECK(read_file(store) == first);  // byte-identical store after resume
}

TEST_CASE("guide and loo emit deterministic artifacts from the store") {
    TempDir dir;
    auto cfg = two_synth_config(dir.path);
    REQUIRE(run_cli("cv --config " + cfg, dir.path).exit_code == 0);
    REQUIRE(run_cli("guide --config " + cfg, dir.path).exit_code == 0);
    fs::path gj = dir.path / "out" / "guidance.json";
    fs::path gd = dir.path / "out" / "guidance.dot";
    REQUIRE(fs::exists(gj));
    REQUIRE(fs::exists(gd));
    std::string json_1 = read_file(gj);
    std::string dot_1 = read_file(gd);
    auto parsed = json::parse(json_1);
    CHECK(parsed.at("quadrants").size() == 4);

    REQUIRE(run_cli("guide --config " + cfg, dir.path).exit_code == 0);
    CHECK(read_file(gj) == json_1);
    CHECK(read_file(gd) == dot_1);

    auto dot = oracle::parse_dot(dot_1);
    INFO(dot.error);
    CHECK(dot.ok);
    CHECK(dot.nodes >= 1 + 8 + 12);  // root, size/fairness branches, metric leaves

    REQUIRE(run_cli("loo --config " + cfg, dir.path).exit_code == 0);
    auto loo = json::parse(read_file(dir.path / "out" / "loo.json"));
    for (const auto& row : loo.at("rows")) {
        if (row.at("status") != "ok") continue;
        for (const auto& metric : {"di_mean", "di_std", "f1_mean"}) {
            auto num = row.at("cells").at(metric).at("num").get<int>();
            CHECK(num >= 0);
            CHECK(num <= 3);
        }
    }
}

TEST_CASE("guide without a store exits with the no-results code") {
    TempDir dir;
    auto cfg = two_synth_config(dir.path);
    auto r = run_cli("guide --config " + cfg, dir.path);
    CHECK(r.exit_code == 3);
}

TEST_CASE("auto reports pipeline, F1, and DI statistics per dataset") {
    TempDir dir;
    auto cfg = two_synth_config(dir.path, R"cfg(,
  "auto": {"max_trials": 4, "per_trial_seconds": 60, "total_seconds": 300,
           "pipelines": ["tree(max_depth=3)", "dummy(label=1)"]})cfg");
    auto r = run_cli("auto --config " + cfg, dir.path);
    REQUIRE(r.exit_code == 0);
    auto report = json::parse(read_file(dir.path / "out" / "auto_report.json"));
    REQUIRE(report.size() == 2);
    for (const auto& row : report) {
        CHECK(row.contains("pipeline"));
        CHECK(row.contains("f1_mean"));
        CHECK(row.contains("f1_std"));
        CHECK(row.contains("di_mean"));
        CHECK(row.contains("di_std"));
    }
    // deterministic rerun
    auto first = read_file(dir.path / "out" / "auto_report.json");
    REQUIRE(run_cli("auto --config " + cfg, dir.path).exit_code == 0);
    CHECK(read_file(dir.path / "out" / "auto_report.json") == first);
}

TEST_CASE("grid runs both steps and writes the filter audit") {
    TempDir dir;
    auto cfg = two_synth_config(dir.path, R"cfg(,
  "grid": {
    "templates": ["tree", "Bag(Pr(@pre, tree), @n)"],
    "bagging_sizes": [1, 3],
    "n_trials": 1, "k": 3,
    "step1": {"pre": ["Reweigh", "DIR(1)"], "in": ["PR(eta=10)"], "post": ["CEO(cost=weighted)"]}
  })cfg");
    auto r = run_cli("grid --config " + cfg, dir.path);
    REQUIRE(r.exit_code == 0);
    auto audit = json::parse(read_file(dir.path / "out" / "step1_audit.json"));
    REQUIRE(audit.contains("alpha"));
    const auto& filters = audit.at("alpha").at("pre").at("filters");
    REQUIRE(filters.size() == 4);
    CHECK(filters[0].at("filter") == "F1");
    CHECK(filters[3].at("filter") == "F4");

    // store line count: header + step1 (6 configs x 2 ds x 3) + step2 new
    // (tree deduplicates; bag template adds 2 texts x 2 ds x 3)
    std::string store = read_file(dir.path / "out" / "results.jsonl");
    CHECK(std::count(store.begin(), store.end(), '\n') == 1 + 36 + 12);
}
