// fairens command-line driver: encode datasets, run cross-validated
// experiments (explicit pipelines, the two-step grid, or the blended
// -objective search), and generate the guidance diagram with its
// leave-one-out robustness report. All runs are driven by a JSON config
// and a single master seed; JSON/JSONL artifacts are the canonical outputs,
// text renderings are views.
//
// Exit codes: 0 success, 2 configuration error, 3 no usable results.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fairens/dataset_io.hpp"
#include "fairens/fairens.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNoResults = 3;

struct DatasetEntry {
    std::string name;
    std::string csv, recipe;            // encode from raw CSV
    std::string cache_csv, cache_meta;  // or load a cache
    bool has_header = true;
    // or generate synthetically
    bool synthetic = false;
    std::size_t synth_n = 400;
    double synth_rate_priv = 0.8, synth_rate_unpriv = 0.4;
    std::size_t synth_features = 6;
    std::uint64_t synth_seed = 0;
    std::string selection_metric;  // optional per-dataset override
};

struct RunConfig {
    std::vector<DatasetEntry> datasets;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir = "out";
    std::size_t workers = 1;
    json raw;  // command-specific sections
};

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw fairens::ConfigError("cannot open config: " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw fairens::ConfigError("config is not valid JSON: " + path);

    RunConfig cfg;
    cfg.raw = j;
    if (j.contains("seed")) {
        cfg.seed = j.at("seed").get<std::uint64_t>();
        cfg.seed_set = true;
    }
    cfg.out_dir = j.value("out", "out");
    cfg.workers = j.value("workers", std::size_t(1));
    if (!j.contains("datasets") || !j.at("datasets").is_array() || j.at("datasets").empty())
        throw fairens::ConfigError("config needs a non-empty datasets array");
    for (const auto& d : j.at("datasets")) {
        DatasetEntry e;
        e.name = d.value("name", "");
        if (d.contains("synthetic")) {
            const auto& s = d.at("synthetic");
            e.synthetic = true;
            e.synth_n = s.value("n", std::size_t(400));
            e.synth_rate_priv = s.value("rate_priv", 0.8);
            e.synth_rate_unpriv = s.value("rate_unpriv", 0.4);
            e.synth_features = s.value("features", std::size_t(6));
            e.synth_seed = s.value("seed", std::uint64_t(0));
        } else if (d.contains("cache_csv")) {
            e.cache_csv = d.at("cache_csv").get<std::string>();
            e.cache_meta = d.at("cache_meta").get<std::string>();
        } else {
            e.csv = d.at("csv").get<std::string>();
            e.recipe = d.at("recipe").get<std::string>();
            e.has_header = d.value("has_header", true);
            if (!fs::exists(e.csv)) throw fairens::ConfigError("dataset CSV not found: " + e.csv);
            if (!fs::exists(e.recipe)) throw fairens::ConfigError("recipe not found: " + e.recipe);
        }
        e.selection_metric = d.value("selection_metric", "");
        cfg.datasets.push_back(std::move(e));
    }
    return cfg;
}

fairens::Dataset materialize(const DatasetEntry& e, std::uint64_t master_seed) {
    if (e.synthetic) {
        auto ds = fairens::synth_biased(
            e.synth_n, e.synth_rate_priv, e.synth_rate_unpriv, e.synth_features,
            e.synth_seed ? e.synth_seed : fairens::derive_seed(master_seed, {"synth", e.name}));
        if (!e.name.empty()) ds.name = e.name;
        return ds;
    }
    if (!e.cache_csv.empty()) {
        auto ds = fairens::load_dataset_cache(e.cache_csv, e.cache_meta);
        if (!e.name.empty()) ds.name = e.name;
        return ds;
    }
    auto recipe = fairens::load_recipe(e.recipe);
    if (!e.name.empty()) recipe.name = e.name;
    auto raw = fairens::load_csv(e.csv, e.has_header);
    return fairens::encode(raw, recipe);
}

std::vector<fairens::Dataset> materialize_all(const RunConfig& cfg) {
    std::vector<fairens::Dataset> out;
    for (const auto& e : cfg.datasets) {
        out.push_back(materialize(e, cfg.seed));
        for (const auto& w : out.back().warnings)
            std::cerr << "note: " << out.back().name << ": " << w << "\n";
    }
    return out;
}

void write_datasets_meta(const std::vector<fairens::Dataset>& datasets, const fs::path& out_dir) {
    ordered_json meta;
    for (const auto& ds : datasets) {
        auto di = ds.baseline_di();
        meta[ds.name] = {{"n_rows", ds.n_rows()},
                         {"n_cols", ds.n_cols()},
                         {"baseline_di", di.defined ? json(di.value) : json(nullptr)}};
    }
    std::ofstream out(out_dir / "datasets.meta.json");
    out << meta.dump(2) << "\n";
}

std::map<std::string, fairens::DatasetMeta> load_datasets_meta(const fs::path& out_dir) {
    std::ifstream in(out_dir / "datasets.meta.json");
    if (!in)
        throw fairens::ConfigError("missing " + (out_dir / "datasets.meta.json").string() +
                                   "; run the grid or cv command first");
    json j = json::parse(in);
    std::map<std::string, fairens::DatasetMeta> meta;
    for (auto it = j.begin(); it != j.end(); ++it) {
        fairens::DatasetMeta m;
        m.n_rows = it.value().at("n_rows").get<std::size_t>();
        m.baseline_di =
            it.value().at("baseline_di").is_null() ? 0.0 : it.value().at("baseline_di").get<double>();
        meta[it.key()] = m;
    }
    return meta;
}

fairens::GuidanceParams guidance_params(const RunConfig& cfg) {
    fairens::GuidanceParams p;
    if (cfg.raw.contains("guidance")) {
        const auto& g = cfg.raw.at("guidance");
        p.rows_threshold = g.value("rows_threshold", p.rows_threshold);
        p.di_threshold = g.value("di_threshold", p.di_threshold);
        p.top_fraction = g.value("top_fraction", p.top_fraction);
        p.top_k = g.value("top_k", p.top_k);
    }
    return p;
}

std::string di_text(const fairens::DisparateImpactValue& di) {
    return di.defined ? fairens::format_double(std::round(di.value * 1000.0) / 1000.0)
                      : std::string("undefined");
}

// ---------------------------------------------------------------------------

int cmd_encode(const RunConfig& cfg, bool importance) {
    fs::create_directories(cfg.out_dir);
    auto datasets = materialize_all(cfg);
    write_datasets_meta(datasets, cfg.out_dir);

    std::cout << "dataset                      n_cols   n_rows   baseline_di\n";
    for (std::size_t i = 0; i < datasets.size(); ++i) {
        const auto& ds = datasets[i];
        std::string favorable;
        std::vector<std::string> protected_names;
        if (!cfg.datasets[i].synthetic && !cfg.datasets[i].recipe.empty()) {
            auto recipe = fairens::load_recipe(cfg.datasets[i].recipe);
            favorable = recipe.favorable;
            for (const auto& p : recipe.protected_attrs) protected_names.push_back(p.column);
        }
        fs::path csv = fs::path(cfg.out_dir) / (ds.name + ".encoded.csv");
        fs::path meta = fs::path(cfg.out_dir) / (ds.name + ".meta.json");
        fairens::write_dataset_cache(ds, csv.string(), meta.string(), favorable, protected_names);

        std::cout << ds.name;
        for (std::size_t pad = ds.name.size(); pad < 28; ++pad) std::cout << ' ';
        std::cout << ds.n_cols() << "\t " << ds.n_rows() << "\t  " << di_text(ds.baseline_di()) << "\n";

        if (importance) {
            auto model = fairens::fit_learner(fairens::LearnerSpec::parse_name("gbt"), ds.X, ds.y);
            auto imp = dynamic_cast<const fairens::GbtModel&>(model.model()).feature_importances();
            std::vector<std::size_t> order(imp.size());
            for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
            std::sort(order.begin(), order.end(),
                      [&](std::size_t a, std::size_t b) { return imp[a] > imp[b]; });
            std::size_t best_rank = 0;
            for (std::size_t rank = 0; rank < order.size() && best_rank == 0; ++rank) {
                bool is_protected = std::find(ds.protected_columns.begin(), ds.protected_columns.end(),
                                              order[rank]) != ds.protected_columns.end();
                if (is_protected) best_rank = rank + 1;
            }
            if (best_rank)
                std::cout << "  protected attribute importance rank: " << best_rank << " ("
                          << ds.feature_names[order[best_rank - 1]] << ")\n";
            for (std::size_t rank = 0; rank < std::min<std::size_t>(5, order.size()); ++rank)
                std::cout << "  feature " << rank + 1 << ": " << ds.feature_names[order[rank]] << " ("
                          << fairens::format_double(std::round(imp[order[rank]] * 100.0) / 100.0)
                          << ")\n";
        }
    }
    return 0;
}

int cmd_cv(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    auto datasets = materialize_all(cfg);
    write_datasets_meta(datasets, cfg.out_dir);

    if (!cfg.raw.contains("cv") || !cfg.raw.at("cv").contains("pipelines"))
        throw fairens::ConfigError("cv command needs cv.pipelines in the config");
    auto pipelines = cfg.raw.at("cv").at("pipelines").get<std::vector<std::string>>();
    fairens::CvOptions opts;
    opts.n_trials = cfg.raw.at("cv").value("n_trials", std::size_t(5));
    opts.k = cfg.raw.at("cv").value("k", std::size_t(3));
    opts.workers = cfg.workers;

    fairens::ResultStore store =
        fairens::ResultStore::load((fs::path(cfg.out_dir) / "results.jsonl").string());
    store.attach((fs::path(cfg.out_dir) / "results.jsonl").string());

    std::size_t appended = 0;
    for (const auto& ds : datasets) {
        for (const auto& text : pipelines) {
            try {
                auto expr = fairens::parse_pipeline(text);
                fairens::validate_or_throw(*expr);
                std::string canonical = fairens::to_text(expr);
                fairens::CvOptions with_skip = opts;
                with_skip.skip = [&](std::size_t t, std::size_t f, std::uint64_t seed) {
                    return store.contains_key(ds.name, canonical, t, f, seed);
                };
                for (auto& r : fairens::run_cv(expr, ds, cfg.seed, with_skip)) {
                    store.append(std::move(r));
                    ++appended;
                }
            } catch (const std::exception& err) {
                std::cerr << "warning: " << ds.name << " / " << text << ": " << err.what() << "\n";
                store.append_failure({ds.name, text, err.what()});
            }
        }
    }
    std::cout << "store: " << store.path() << " (" << store.records().size() << " records, +" << appended
              << " new)\n";
    return store.records().empty() ? kExitNoResults : 0;
}

std::vector<std::string> step1_candidate_pipelines(const json& step1_cfg) {
    std::vector<std::string> pre = {"Reweigh",
                                    "DIR(0.2)",
                                    "DIR(0.4)",
                                    "DIR(0.6)",
                                    "DIR(0.8)",
                                    "DIR(1)",
                                    "LFR(k=5,Ax=0.01,Ay=1,Az=10,iters=60,restarts=1)",
                                    "LFR(k=5,Ax=0.01,Ay=10,Az=5,iters=60,restarts=1)"};
    std::vector<std::string> in = {"PR(eta=1)", "PR(eta=10)", "PR(eta=100)", "PR(eta=1000)"};
    std::vector<std::string> post = {"CEO(cost=weighted)", "CEO(cost=fpr)", "CEO(cost=fnr)"};
    if (step1_cfg.contains("pre")) pre = step1_cfg.at("pre").get<std::vector<std::string>>();
    if (step1_cfg.contains("in")) in = step1_cfg.at("in").get<std::vector<std::string>>();
    if (step1_cfg.contains("post")) post = step1_cfg.at("post").get<std::vector<std::string>>();

    std::vector<std::string> pipelines = {"tree", "dummy(label=1)"};
    for (const auto& m : pre) pipelines.push_back("Pr(" + m + ", tree)");
    for (const auto& m : in) pipelines.push_back(m);
    for (const auto& m : post) pipelines.push_back("Post(" + m + ", tree)");
    return pipelines;
}

ordered_json audit_json(const fairens::Step1Choice& choice) {
    ordered_json j;
    for (const auto& [dataset, kinds] : choice.by_dataset) {
        ordered_json dj;
        for (const auto& [role, kind] : kinds) {
            ordered_json kj;
            kj["chosen_pipeline"] = kind.chosen_pipeline;
            kj["chosen_mitigator"] = kind.chosen_mitigator;
            kj["relaxed"] = kind.relaxed;
            kj["filters"] = ordered_json::array();
            for (const auto& a : kind.audit)
                kj["filters"].push_back({{"filter", a.filter},
                                         {"survivors_before", a.survivors_before},
                                         {"survivors_after", a.survivors_after},
                                         {"relaxed", a.relaxed},
                                         {"note", a.note}});
            dj[fairens::mitigator_role_name(role)] = std::move(kj);
        }
        j[dataset] = std::move(dj);
    }
    return j;
}

int cmd_grid(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    auto datasets = materialize_all(cfg);
    write_datasets_meta(datasets, cfg.out_dir);

    json grid_cfg = cfg.raw.value("grid", json::object());
    json step1_cfg = grid_cfg.value("step1", json::object());

    fairens::GridSpec grid;
    if (grid_cfg.contains("templates"))
        grid.templates = grid_cfg.at("templates").get<std::vector<std::string>>();
    else
        grid.templates = fairens::default_grid_templates();
    if (grid_cfg.contains("bagging_sizes"))
        grid.bagging_sizes = grid_cfg.at("bagging_sizes").get<std::vector<std::size_t>>();
    if (grid_cfg.contains("boosting_sizes"))
        grid.boosting_sizes = grid_cfg.at("boosting_sizes").get<std::vector<std::size_t>>();
    grid.cv.n_trials = grid_cfg.value("n_trials", std::size_t(5));
    grid.cv.k = grid_cfg.value("k", std::size_t(3));
    grid.cv.workers = cfg.workers;

    fairens::ResultStore store =
        fairens::ResultStore::load((fs::path(cfg.out_dir) / "results.jsonl").string());
    store.attach((fs::path(cfg.out_dir) / "results.jsonl").string());

    // step 1: mitigator sweeps with a basic decision tree, then select
    auto candidates = step1_candidate_pipelines(step1_cfg);
    std::cout << "step 1: " << candidates.size() << " candidate configurations per dataset\n";
    for (const auto& ds : datasets) {
        for (const auto& text : candidates) {
            try {
                auto expr = fairens::parse_pipeline(text);
                fairens::validate_or_throw(*expr);
                std::string canonical = fairens::to_text(expr);
                fairens::CvOptions opts = grid.cv;
                opts.skip = [&](std::size_t t, std::size_t f, std::uint64_t seed) {
                    return store.contains_key(ds.name, canonical, t, f, seed);
                };
                for (auto& r : fairens::run_cv(expr, ds, cfg.seed, opts)) store.append(std::move(r));
            } catch (const std::exception& err) {
                std::cerr << "warning: " << ds.name << " / " << text << ": " << err.what() << "\n";
                store.append_failure({ds.name, text, err.what()});
            }
        }
    }

    std::string default_metric = step1_cfg.value("selection_metric", "recall");
    fairens::Step1Choice choice;
    for (std::size_t i = 0; i < datasets.size(); ++i) {
        std::string metric =
            cfg.datasets[i].selection_metric.empty() ? default_metric : cfg.datasets[i].selection_metric;
        std::vector<fairens::TrialRecord> ds_records;
        for (const auto& r : store.records())
            if (r.dataset == datasets[i].name) ds_records.push_back(r);
        auto partial = fairens::select_step1(ds_records, metric == "precision"
                                                             ? fairens::SelectionMetric::Precision
                                                             : fairens::SelectionMetric::Recall);
        for (auto& [dataset, kinds] : partial.by_dataset) choice.by_dataset[dataset] = std::move(kinds);
        for (auto& w : partial.warnings) choice.warnings.push_back(std::move(w));
    }
    {
        std::ofstream audit((fs::path(cfg.out_dir) / "step1_audit.json").string());
        audit << audit_json(choice).dump(2) << "\n";
    }
    for (const auto& [dataset, kinds] : choice.by_dataset)
        for (const auto& [role, kind] : kinds)
            std::cout << "step 1: " << dataset << " " << fairens::mitigator_role_name(role) << " -> "
                      << kind.chosen_mitigator << (kind.relaxed ? " (relaxed)" : "") << "\n";
    for (const auto& w : choice.warnings) std::cerr << "warning: " << w << "\n";

    // step 2: the ensemble-mitigator cross product
    std::size_t before = store.records().size();
    fairens::run_grid(datasets, grid, choice, cfg.seed, store);
    std::cout << "step 2: store now holds " << store.records().size() << " records (+"
              << store.records().size() - before << ")\n";
    for (const auto& f : store.failures())
        std::cerr << "warning: " << f.dataset << " / " << f.pipeline << ": " << f.error << "\n";
    return store.records().empty() ? kExitNoResults : 0;
}

int cmd_auto(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    auto datasets = materialize_all(cfg);
    write_datasets_meta(datasets, cfg.out_dir);

    json auto_cfg = cfg.raw.value("auto", json::object());
    fairens::SearchBudget budget;
    budget.max_trials = auto_cfg.value("max_trials", std::size_t(40));
    budget.per_trial_seconds = auto_cfg.value("per_trial_seconds", 60.0);
    budget.total_seconds = auto_cfg.value("total_seconds", 1200.0);
    budget.adaptive = auto_cfg.value("adaptive", false);
    budget.master_seed = cfg.seed;
    fairens::SearchSpace space;
    if (auto_cfg.contains("pipelines"))
        space.explicit_pipelines = auto_cfg.at("pipelines").get<std::vector<std::string>>();

    ordered_json report = ordered_json::array();
    std::size_t succeeded = 0;
    for (const auto& ds : datasets) {
        try {
            auto refs = fairens::make_scorer_refs(ds, fairens::derive_seed(cfg.seed, {"refs", ds.name}));
            auto result = fairens::auto_search(ds, space, budget, refs);

            // recommendation row: raw DI / F1 mean and std over a fresh CV
            fairens::CvOptions opts;
            opts.n_trials = 1;
            opts.k = 3;
            auto records = fairens::run_cv(result.best_pipeline, ds,
                                           fairens::derive_seed(cfg.seed, {"auto-report"}), opts);
            std::vector<double> f1, di;
            for (const auto& r : records) {
                f1.push_back(r.metrics.f1);
                if (r.metrics.di.defined) di.push_back(r.metrics.di.value);
            }
            auto mean_std = [](const std::vector<double>& v) {
                double m = 0.0, s = 0.0;
                for (double x : v) m += x;
                if (!v.empty()) m /= double(v.size());
                for (double x : v) s += (x - m) * (x - m);
                if (!v.empty()) s = std::sqrt(s / double(v.size()));
                return std::make_pair(m, s);
            };
            auto [f1_mean, f1_std] = mean_std(f1);
            auto [di_mean, di_std] = mean_std(di);
            report.push_back({{"dataset", ds.name},
                              {"pipeline", result.best_pipeline},
                              {"blended_score", result.best_score},
                              {"f1_mean", f1_mean},
                              {"f1_std", f1_std},
                              {"di_mean", di_mean},
                              {"di_std", di_std},
                              {"trials", result.trials.size()},
                              {"completed", result.completed}});
            std::cout << ds.name << ": " << result.best_pipeline << "  blended="
                      << fairens::format_double(std::round(result.best_score * 1000.0) / 1000.0)
                      << "  f1=" << fairens::format_double(std::round(f1_mean * 100.0) / 100.0) << " ("
                      << fairens::format_double(std::round(f1_std * 100.0) / 100.0) << ")"
                      << "  di=" << fairens::format_double(std::round(di_mean * 100.0) / 100.0) << " ("
                      << fairens::format_double(std::round(di_std * 100.0) / 100.0) << ")\n";
            ++succeeded;
        } catch (const std::exception& err) {
            std::cerr << "warning: " << ds.name << ": " << err.what() << "\n";
            report.push_back({{"dataset", ds.name}, {"error", err.what()}});
        }
    }
    std::ofstream out((fs::path(cfg.out_dir) / "auto_report.json").string());
    out << report.dump(2) << "\n";
    return succeeded == 0 ? kExitNoResults : 0;
}

// the constant-classifier rows exist to anchor the step-1 precision filter;
// they are not candidate configurations for the diagram
std::vector<fairens::TrialRecord> recommendable_records(const fairens::ResultStore& store) {
    std::vector<fairens::TrialRecord> out;
    for (const auto& r : store.records())
        if (r.pipeline.rfind("dummy", 0) != 0) out.push_back(r);
    return out;
}

int cmd_guide(const RunConfig& cfg, const std::string& format) {
    fs::path out_dir(cfg.out_dir);
    auto store = fairens::ResultStore::load((out_dir / "results.jsonl").string());
    if (store.records().empty()) {
        std::cerr << "error: empty result store at " << (out_dir / "results.jsonl") << "\n";
        return kExitNoResults;
    }
    auto meta = load_datasets_meta(out_dir);
    auto diagram = fairens::generate_diagram(recommendable_records(store), meta, guidance_params(cfg));

    auto j = fairens::diagram_to_json(diagram);
    auto dot = fairens::diagram_to_dot(diagram);
    {
        std::ofstream jf((out_dir / "guidance.json").string());
        jf << j.dump(2) << "\n";
        std::ofstream df((out_dir / "guidance.dot").string());
        df << dot;
    }
    if (format == "json") {
        std::cout << j.dump(2) << "\n";
    } else if (format == "dot") {
        std::cout << dot;
    } else {
        for (const auto& q : diagram.quadrants) {
            std::cout << q.quadrant.name() << " (datasets:";
            for (const auto& d : q.datasets) std::cout << " " << d;
            std::cout << ")\n";
            for (const auto& metric : fairens::diagram_metrics()) {
                const auto& cell = q.cells.at(metric);
                std::cout << "  " << metric << ": ";
                if (cell.status != "ok") {
                    std::cout << cell.status << "\n";
                    continue;
                }
                for (std::size_t i = 0; i < cell.entries.size(); ++i)
                    std::cout << (i ? " | " : "") << cell.entries[i].pipeline;
                std::cout << "\n";
            }
        }
    }
    std::cout << "wrote " << (out_dir / "guidance.json") << " and " << (out_dir / "guidance.dot") << "\n";
    return 0;
}

int cmd_loo(const RunConfig& cfg, const std::string& format) {
    fs::path out_dir(cfg.out_dir);
    auto store = fairens::ResultStore::load((out_dir / "results.jsonl").string());
    if (store.records().empty()) {
        std::cerr << "error: empty result store at " << (out_dir / "results.jsonl") << "\n";
        return kExitNoResults;
    }
    auto meta = load_datasets_meta(out_dir);
    auto report = fairens::leave_one_out(recommendable_records(store), meta, guidance_params(cfg));
    auto j = fairens::loo_to_json(report);
    {
        std::ofstream jf((out_dir / "loo.json").string());
        jf << j.dump(2) << "\n";
    }
    if (format == "json") std::cout << j.dump(2) << "\n";
    else std::cout << fairens::loo_to_text(report);
    std::cout << "wrote " << (out_dir / "loo.json") << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fairness-aware ensemble toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::uint64_t> seed_flag;
    std::optional<std::size_t> workers_flag;
    std::string out_flag;
    std::string format = "text";
    bool importance = false;

    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--seed", seed_flag, "master seed (overrides the config)");
    app.add_option("--workers", workers_flag, "worker threads (overrides the config)");
    app.add_option("--out", out_flag, "output directory (overrides the config)");
    app.add_option("--format", format, "report format: json, dot, or text")
        ->check(CLI::IsMember({"json", "dot", "text"}));

    auto* encode = app.add_subcommand("encode", "encode datasets and report summary rows");
    encode->add_flag("--importance", importance, "report gradient-boosted feature importances");
    auto* cv = app.add_subcommand("cv", "cross-validate explicit pipelines");
    auto* grid = app.add_subcommand("grid", "two-step mitigator/ensemble grid search");
    auto* auto_cmd = app.add_subcommand("auto", "blended-objective automated search");
    auto* guide = app.add_subcommand("guide", "generate the guidance diagram");
    auto* loo = app.add_subcommand("loo", "leave-one-out robustness of the diagram");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = load_config(config_path);
        if (seed_flag) {
            cfg.seed = *seed_flag;
            cfg.seed_set = true;
        }
        if (!cfg.seed_set) {
            cfg.seed = std::random_device{}();
            std::cout << "note: --seed omitted; chose " << cfg.seed << "\n";
        }
        if (workers_flag) cfg.workers = *workers_flag;
        if (!out_flag.empty()) cfg.out_dir = out_flag;

        if (encode->parsed()) return cmd_encode(cfg, importance);
        if (cv->parsed()) return cmd_cv(cfg);
        if (grid->parsed()) return cmd_grid(cfg);
        if (auto_cmd->parsed()) return cmd_auto(cfg);
        if (guide->parsed()) return cmd_guide(cfg, format);
        if (loo->parsed()) return cmd_loo(cfg, format);
        return kExitConfig;
    } catch (const fairens::ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitConfig;
    }
}
