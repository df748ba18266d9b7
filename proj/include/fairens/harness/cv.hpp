#pragma once

#include <atomic>
#include <functional>
#include <mutex>
#include <thread>

#include "fairens/dataset.hpp"
#include "fairens/harness/store.hpp"
#include "fairens/pipeline.hpp"

#ifdef __linux__
#include <sys/resource.h>
#endif

namespace fairens {

/// Run fn(0..n_tasks) over a small worker pool. Task outputs must land in
/// pre-sized slots so results are identical for any worker count.
inline void parallel_for(std::size_t n_tasks, std::size_t workers,
                         const std::function<void(std::size_t)>& fn) {
    workers = std::max<std::size_t>(1, std::min(workers, n_tasks));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n_tasks; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto body = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= n_tasks) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

namespace detail {

inline std::optional<double> peak_memory_mb() {
#ifdef __linux__
    rusage usage{};
    if (getrusage(RUSAGE_SELF, &usage) == 0) return double(usage.ru_maxrss) / 1024.0;
#endif
    return std::nullopt;
}

}  // namespace detail

struct CvOptions {
    std::size_t n_trials = 5;
    std::size_t k = 3;
    std::size_t workers = 1;
    FitOptions fit;
    // resume hook: skip (trial, fold) cells that already exist in a store
    std::function<bool(std::size_t trial, std::size_t fold, std::uint64_t seed)> skip;
};

inline std::uint64_t trial_seed(std::uint64_t master_seed, const std::string& dataset,
                                const std::string& pipeline, std::size_t trial, std::size_t fold) {
    return derive_seed(master_seed,
                       {dataset, pipeline, std::to_string(trial), std::to_string(fold)});
}

/// n_trials x k cross-validated evaluations of one pipeline. Fold plans
/// depend on (dataset, trial) but not on the pipeline, so different
/// configurations are compared on identical splits. Deterministic for a
/// fixed master seed regardless of worker count.
inline std::vector<TrialRecord> run_cv(const ExprPtr& expr, const Dataset& ds,
                                       std::uint64_t master_seed, const CvOptions& opts = {}) {
    validate_or_throw(*expr);
    std::string text = to_text(expr);

    struct Task {
        std::size_t trial, fold;
        std::uint64_t seed;
        std::shared_ptr<FoldPlan> plan;
    };
    std::vector<Task> tasks;
    for (std::size_t t = 0; t < opts.n_trials; ++t) {
        auto plan = std::make_shared<FoldPlan>(
            stratified_kfold(ds, opts.k, derive_seed(master_seed, {ds.name, "trial", std::to_string(t)})));
        for (std::size_t f = 0; f < opts.k; ++f) {
            std::uint64_t seed = trial_seed(master_seed, ds.name, text, t, f);
            if (opts.skip && opts.skip(t, f, seed)) continue;
            tasks.push_back({t, f, seed, plan});
        }
    }

    std::vector<TrialRecord> out(tasks.size());
    parallel_for(tasks.size(), opts.workers, [&](std::size_t i) {
        const Task& task = tasks[i];
        auto train = task.plan->train_rows(task.fold);
        auto test = task.plan->test_rows(task.fold);

        auto mem_before = detail::peak_memory_mb();
        TrainedPipeline trained = fit_pipeline(expr, ds, train, task.seed, opts.fit);
        auto mem_after = detail::peak_memory_mb();

        Matrix X_test = ds.X.take_rows(test);
        std::vector<int> y_test = take(ds.y, test);
        std::vector<int> g_test = take(ds.g, test);
        auto pred = trained.predict(X_test, g_test);

        TrialRecord r;
        r.dataset = ds.name;
        r.pipeline = text;
        r.trial = task.trial;
        r.fold = task.fold;
        r.seed = task.seed;
        r.metrics = MetricReport::evaluate(y_test, pred, g_test);
        r.metrics.fit_seconds = trained.fit_seconds;
        if (mem_before && mem_after) r.memory_mb = std::max(0.0, *mem_after - *mem_before);
        out[i] = std::move(r);
    });
    return out;
}

inline std::vector<TrialRecord> run_cv(const std::string& pipeline_text, const Dataset& ds,
                                       std::uint64_t master_seed, const CvOptions& opts = {}) {
    return run_cv(parse_pipeline(pipeline_text), ds, master_seed, opts);
}

}  // namespace fairens
