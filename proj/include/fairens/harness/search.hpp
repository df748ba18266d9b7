#pragma once

#include <chrono>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "fairens/harness/cv.hpp"
#include "fairens/metrics.hpp"
#include "fairens/pipeline.hpp"

namespace fairens {

/// Blended-objective reference points for one dataset: baseline symmetric
/// DI of the labels, the constant-favorable F1, and the cross-validated F1
/// of the default gradient-boosted reference model.
inline ScorerRefs make_scorer_refs(const Dataset& ds, std::uint64_t seed, std::size_t k = 3) {
    double min_di = symmetric_di(ds.baseline_di());
    double min_f1 = ScorerRefs::trivial_f1(ds.y);

    auto plan = stratified_kfold(ds, k, derive_seed(seed, {"scorer-refs"}));
    double f1_sum = 0.0;
    ExprPtr gbt = parse_pipeline("gbt");
    for (std::size_t f = 0; f < k; ++f) {
        auto train = plan.train_rows(f);
        auto test = plan.test_rows(f);
        auto trained = fit_pipeline(gbt, ds, train, derive_seed(seed, {"refs-fold", std::to_string(f)}));
        auto pred = trained.predict(ds.X.take_rows(test));
        f1_sum += classification_metrics(take(ds.y, test), pred).f1;
    }
    return ScorerRefs(min_di, min_f1, f1_sum / double(k));
}

struct SearchBudget {
    std::size_t max_trials = 50;
    double per_trial_seconds = 60.0;   // desk-scale default
    double total_seconds = 1200.0;     // desk-scale default
    std::uint64_t master_seed = 0;
    bool adaptive = false;             // sequential model-based proposals after a random warmup
};

/// Either an explicit list of configurations or the full validated grammar
/// space with hyperparameter ranges.
struct SearchSpace {
    std::vector<std::string> explicit_pipelines;

    std::vector<std::string> learners{"tree", "gbt", "knn", "logreg"};
    std::vector<std::size_t> bag_sizes{1, 5, 10, 25, 50, 100};
    std::vector<std::size_t> boost_sizes{1, 10, 50, 100, 500};
    std::vector<std::size_t> lfr_k{5, 10, 20};
    std::vector<double> lfr_ay{1, 10, 50};
    std::vector<double> lfr_az{5, 10};
    std::vector<double> pr_eta{1, 10, 100, 1000};
};

struct SearchTrial {
    std::string pipeline;
    double score = 0.0;
    bool completed = false;
    std::string status;  // ok | timeout | error: ...
    double seconds = 0.0;
};

struct SearchResult {
    std::string best_pipeline;
    double best_score = 0.0;
    std::vector<SearchTrial> trials;
    std::size_t completed = 0;
};

namespace detail {

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
    return v[rng.uniform_int(v.size())];
}

inline std::string sample_mitigator(Rng& rng, const SearchSpace& space, MitigatorRole role) {
    switch (role) {
        case MitigatorRole::Pre: {
            switch (rng.uniform_int(3)) {
                case 0: return "Reweigh";
                case 1: return "DIR(" + format_double(std::round(rng.uniform() * 100.0) / 100.0) + ")";
                default:
                    return "LFR(k=" + std::to_string(pick(rng, space.lfr_k)) +
                           ",Ax=0.01,Ay=" + format_double(pick(rng, space.lfr_ay)) +
                           ",Az=" + format_double(pick(rng, space.lfr_az)) + ",iters=60,restarts=1)";
            }
        }
        case MitigatorRole::In: return "PR(eta=" + format_double(pick(rng, space.pr_eta)) + ")";
        case MitigatorRole::Post: {
            const char* costs[] = {"weighted", "fpr", "fnr"};
            return std::string("CEO(cost=") + costs[rng.uniform_int(3)] + ")";
        }
    }
    throw ConfigError("unknown mitigator role");
}

inline std::string sample_learner(Rng& rng, const SearchSpace& space) {
    std::string kind = pick(rng, space.learners);
    if (kind == "tree") {
        std::size_t depth = std::size_t(rng.uniform_int(3)) * 3;  // 0, 3, 6
        return depth ? "tree(max_depth=" + std::to_string(depth) + ")" : "tree";
    }
    if (kind == "gbt") {
        const std::size_t rounds[] = {10, 25, 50};
        return "gbt(rounds=" + std::to_string(rounds[rng.uniform_int(3)]) + ")";
    }
    if (kind == "knn") {
        const std::size_t ks[] = {3, 5, 9};
        return "knn(k=" + std::to_string(ks[rng.uniform_int(3)]) + ")";
    }
    return kind;
}

/// One draw from the full grammar space; feasible by construction.
inline std::string sample_pipeline(Rng& rng, const SearchSpace& space) {
    if (!space.explicit_pipelines.empty()) return pick(rng, space.explicit_pipelines);

    std::size_t ensemble = rng.uniform_int(5);  // none, bag, boost, vote, stack
    std::size_t mit = rng.uniform_int(4);       // none, pre, in, post
    bool ensemble_level = ensemble != 0 && rng.uniform() < 0.5;
    std::string learner = sample_learner(rng, space);

    auto base_of = [&](bool mitigated_base) -> std::string {
        if (!mitigated_base || mit == 0) return learner;
        if (mit == 1) return "Pr(" + sample_mitigator(rng, space, MitigatorRole::Pre) + ", " + learner + ")";
        if (mit == 2) return sample_mitigator(rng, space, MitigatorRole::In);
        return "Post(" + sample_mitigator(rng, space, MitigatorRole::Post) + ", " + learner + ")";
    };
    auto wrap_ensemble_level = [&](const std::string& inner) -> std::string {
        if (mit == 1) return "Pr(" + sample_mitigator(rng, space, MitigatorRole::Pre) + ", " + inner + ")";
        if (mit == 3) return "Post(" + sample_mitigator(rng, space, MitigatorRole::Post) + ", " + inner + ")";
        return inner;  // in-estimator cannot wrap an ensemble
    };

    switch (ensemble) {
        case 0: return base_of(true);
        case 1: {
            std::string text = "Bag(" + base_of(!ensemble_level) + ", " +
                               std::to_string(pick(rng, space.bag_sizes)) + ")";
            return ensemble_level ? wrap_ensemble_level(text) : text;
        }
        case 2: {
            std::string text = "Boost(" + base_of(!ensemble_level) + ", " +
                               std::to_string(pick(rng, space.boost_sizes)) + ")";
            return ensemble_level ? wrap_ensemble_level(text) : text;
        }
        case 3: {
            std::string members;
            for (int i = 0; i < 4; ++i) members += (i ? ", " : "") + base_of(!ensemble_level);
            bool post_members = !ensemble_level && mit == 3;
            bool soft = !post_members && rng.uniform() < 0.5;
            std::string text = "Vote([" + members + "], " + (soft ? "soft" : "hard") + ")";
            return ensemble_level ? wrap_ensemble_level(text) : text;
        }
        default: {
            std::string members;
            for (int i = 0; i < 4; ++i) members += (i ? ", " : "") + base_of(!ensemble_level);
            bool passthrough = rng.uniform() < 0.5;
            std::string final_est = "gbt";
            if (ensemble_level && mit != 0) {
                // mitigate the final estimator instead of wrapping the stack
                passthrough = true;
                if (mit == 1)
                    final_est = "Pr(" + sample_mitigator(rng, space, MitigatorRole::Pre) + ", gbt)";
                else if (mit == 2) final_est = sample_mitigator(rng, space, MitigatorRole::In);
                else final_est = "Post(" + sample_mitigator(rng, space, MitigatorRole::Post) + ", gbt)";
            }
            return "Stack([" + members + "], " + final_est +
                   ", passthrough=" + (passthrough ? "true" : "false") + ")";
        }
    }
}

// fixed-width featurization of a pipeline for the surrogate model
inline std::vector<double> featurize(const PipelineExpr& e) {
    std::vector<double> f(20, 0.0);
    std::function<void(const PipelineExpr&, bool)> walk = [&](const PipelineExpr& node, bool top) {
        using T = PipelineExpr::Type;
        switch (node.type) {
            case T::Learner: f[std::size_t(node.learner.kind)] += 0.25; break;
            case T::Pre:
                f[5] = 1.0;
                f[6 + std::size_t(node.mitigator.kind)] = 1.0;
                if (node.mitigator.kind == MitigatorKind::Dir) f[10] = node.mitigator.dir_level;
                if (node.mitigator.kind == MitigatorKind::Lfr) f[11] = double(node.mitigator.lfr.k) / 20.0;
                break;
            case T::InEst: f[12] = 1.0; f[13] = std::log10(std::max(1.0, node.mitigator.pr.eta)) / 3.0; break;
            case T::Post: f[14] = 1.0; f[15] = double(std::size_t(node.mitigator.ceo_cost)) / 2.0; break;
            case T::Bag: f[16] = std::log10(double(node.n) + 1.0) / 3.0; break;
            case T::Boost: f[17] = std::log10(double(node.n) + 1.0) / 3.0; break;
            case T::Vote: f[18] = node.soft_vote ? 1.0 : 0.5; break;
            case T::Stack: f[19] = node.passthrough ? 1.0 : 0.5; break;
        }
        for (const auto& c : node.children) walk(*c, false);
        if (node.stack_final) walk(*node.stack_final, false);
        (void)top;
    };
    walk(e, true);
    return f;
}

// kernel-weighted mean/std surrogate with an expected-improvement score
inline double expected_improvement(const std::vector<double>& x,
                                   const std::vector<std::pair<std::vector<double>, double>>& observed,
                                   double best) {
    double wsum = 0.0, mean = 0.0;
    for (const auto& [xi, yi] : observed) {
        double d2 = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) d2 += (x[j] - xi[j]) * (x[j] - xi[j]);
        double w = std::exp(-d2 / 0.5);
        wsum += w;
        mean += w * yi;
    }
    if (wsum < 1e-12) return 1e6;  // unexplored region
    mean /= wsum;
    double var = 0.0;
    for (const auto& [xi, yi] : observed) {
        double d2 = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) d2 += (x[j] - xi[j]) * (x[j] - xi[j]);
        double w = std::exp(-d2 / 0.5);
        var += w * (yi - mean) * (yi - mean);
    }
    var = var / wsum + 1.0 / (1.0 + wsum);  // exploration term for sparse regions
    double sd = std::sqrt(var);
    if (sd < 1e-12) return std::max(0.0, mean - best);
    double z = (mean - best) / sd;
    double phi = std::exp(-0.5 * z * z) / 2.5066282746310002;
    double bigphi = 0.5 * std::erfc(-z / 1.4142135623730951);
    return (mean - best) * bigphi + sd * phi;
}

}  // namespace detail

/// Blended-objective search over the configuration space: a seeded random
/// baseline, optionally switching to sequential model-based proposals
/// (kernel surrogate + expected improvement) after a short warmup. Each
/// trial is 3-fold CV scored by the mean blended objective; per-trial and
/// total budgets are enforced between fold fits.
inline SearchResult auto_search(const Dataset& ds, const SearchSpace& space, const SearchBudget& budget,
                                const ScorerRefs& refs, const FitOptions& fit_opts = {}) {
    auto t_start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    };

    SearchResult result;
    result.best_score = -std::numeric_limits<double>::infinity();
    Rng rng(derive_seed(budget.master_seed, {"auto", ds.name}));
    std::map<std::string, double> cache;
    std::vector<std::pair<std::vector<double>, double>> observed;

    auto plan = stratified_kfold(ds, 3, derive_seed(budget.master_seed, {"auto-folds", ds.name}));

    auto evaluate = [&](const std::string& text, SearchTrial& trial) {
        auto t_trial = std::chrono::steady_clock::now();
        auto trial_elapsed = [&] {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_trial).count();
        };
        ExprPtr expr = parse_pipeline(text);
        validate_or_throw(*expr);
        double sum = 0.0;
        for (std::size_t f = 0; f < 3; ++f) {
            if (trial_elapsed() > budget.per_trial_seconds) {
                trial.status = "timeout";
                return false;
            }
            auto train = plan.train_rows(f);
            auto test = plan.test_rows(f);
            auto trained = fit_pipeline(expr, ds, train,
                                        trial_seed(budget.master_seed, ds.name, text, 0, f), fit_opts);
            auto pred = trained.predict(ds.X.take_rows(test), take(ds.g, test));
            std::vector<int> y_test = take(ds.y, test);
            std::vector<int> g_test = take(ds.g, test);
            sum += blended_score(pred, y_test, g_test, refs);
        }
        trial.score = sum / 3.0;
        trial.completed = true;
        trial.status = "ok";
        trial.seconds = trial_elapsed();
        return true;
    };

    for (std::size_t t = 0; t < budget.max_trials; ++t) {
        if (elapsed() > budget.total_seconds) break;

        std::string text;
        if (budget.adaptive && observed.size() >= 5) {
            double best_ei = -1.0;
            for (int c = 0; c < 20; ++c) {
                std::string candidate = detail::sample_pipeline(rng, space);
                auto feats = detail::featurize(*parse_pipeline(candidate));
                double ei = detail::expected_improvement(feats, observed, result.best_score);
                if (ei > best_ei) {
                    best_ei = ei;
                    text = candidate;
                }
            }
        } else {
            text = detail::sample_pipeline(rng, space);
        }

        SearchTrial trial;
        trial.pipeline = text;
        auto cached = cache.find(text);
        if (cached != cache.end()) {
            trial.score = cached->second;
            trial.completed = true;
            trial.status = "cached";
        } else {
            try {
                if (!evaluate(text, trial)) {
                    result.trials.push_back(std::move(trial));
                    continue;  // timeout scored as failure, search continues
                }
            } catch (const std::exception& err) {
                trial.status = std::string("error: ") + err.what();
                result.trials.push_back(std::move(trial));
                continue;
            }
            cache[text] = trial.score;
            observed.emplace_back(detail::featurize(*parse_pipeline(text)), trial.score);
        }
        ++result.completed;
        if (trial.score > result.best_score) {
            result.best_score = trial.score;
            result.best_pipeline = text;
        }
        result.trials.push_back(std::move(trial));
    }

    if (result.completed == 0)
        throw DataError("auto search exhausted its budget with zero completed trials");
    return result;
}

}  // namespace fairens
