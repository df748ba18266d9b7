#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "fairens/harness/store.hpp"

namespace fairens {

enum class MetricId { Di, Spd, F1, Precision, Recall };

inline std::string metric_id_name(MetricId m) {
    switch (m) {
        case MetricId::Di: return "di";
        case MetricId::Spd: return "spd";
        case MetricId::F1: return "f1";
        case MetricId::Precision: return "precision";
        case MetricId::Recall: return "recall";
    }
    return "?";
}

/// Map a metric value into the region around optimal fairness: DI by the
/// reciprocal when above 1 (UNDEFINED to 0, the worst case), SPD by the
/// absolute value, the F1 family unchanged.
inline double fold_metric(const TrialRecord& r, MetricId id) {
    switch (id) {
        case MetricId::Di: return symmetric_di(r.metrics.di);
        case MetricId::Spd: return r.metrics.spd ? std::abs(*r.metrics.spd) : 1.0;
        case MetricId::F1: return r.metrics.f1;
        case MetricId::Precision: return r.metrics.precision;
        case MetricId::Recall: return r.metrics.recall;
    }
    throw DataError("unknown metric id");
}

// larger folded values are better for everything except |SPD|
inline bool higher_is_better(MetricId id) { return id != MetricId::Spd; }

/// Per-pipeline mean and population standard deviation of a folded metric.
struct FoldedStats {
    std::string pipeline;
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t n = 0;
};

inline std::vector<FoldedStats> folded_stats(const std::vector<const TrialRecord*>& dataset_records,
                                             MetricId metric) {
    std::map<std::string, std::vector<double>> per_pipeline;
    for (const auto* r : dataset_records) per_pipeline[r->pipeline].push_back(fold_metric(*r, metric));
    std::vector<FoldedStats> out;
    for (const auto& [pipeline, values] : per_pipeline) {
        FoldedStats s;
        s.pipeline = pipeline;
        s.n = values.size();
        for (double v : values) s.mean += v;
        s.mean /= double(values.size());
        for (double v : values) s.stddev += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(s.stddev / double(values.size()));
        out.push_back(std::move(s));
    }
    return out;  // map iteration: sorted by pipeline text
}

/// Min-max scale with orientation: 1 = best outcome. Degenerate spans (all
/// values equal) map everything to 0.5.
inline std::vector<double> minmax_scale(const std::vector<double>& values, bool higher_better,
                                        bool* degenerate = nullptr) {
    double lo = *std::min_element(values.begin(), values.end());
    double hi = *std::max_element(values.begin(), values.end());
    std::vector<double> out(values.size());
    if (hi - lo <= 0.0) {
        std::fill(out.begin(), out.end(), 0.5);
        if (degenerate) *degenerate = true;
        return out;
    }
    if (degenerate) *degenerate = false;
    for (std::size_t i = 0; i < values.size(); ++i)
        out[i] = higher_better ? (values[i] - lo) / (hi - lo) : (hi - values[i]) / (hi - lo);
    return out;
}

/// Per-dataset min-max standardized mean and standard deviation of a folded
/// metric, scaled separately. Scaled mean 1 is the best outcome; scaled
/// standard deviation 0 is the most stable.
struct StandardizedResult {
    std::string dataset;
    std::string pipeline;
    MetricId metric = MetricId::Di;
    double scaled_mean = 0.0;
    double scaled_std = 0.0;
};

struct StandardizeOutput {
    std::vector<StandardizedResult> results;
    std::vector<std::string> warnings;
};

inline StandardizeOutput standardize(const std::vector<TrialRecord>& records, MetricId metric) {
    StandardizeOutput out;
    std::map<std::string, std::vector<const TrialRecord*>> by_dataset;
    for (const auto& r : records) by_dataset[r.dataset].push_back(&r);

    for (const auto& [dataset, rows] : by_dataset) {
        auto stats = folded_stats(rows, metric);
        std::vector<double> means, stds;
        for (const auto& s : stats) {
            means.push_back(s.mean);
            stds.push_back(s.stddev);
        }
        bool degenerate_mean = false, degenerate_std = false;
        auto scaled_means = minmax_scale(means, higher_is_better(metric), &degenerate_mean);
        // volatility keeps the raw orientation: scaled 0 = most stable
        auto scaled_stds = minmax_scale(stds, true, &degenerate_std);
        if (degenerate_mean)
            out.warnings.push_back(dataset + ": all " + metric_id_name(metric) +
                                   " means identical; scaled to 0.5");
        for (std::size_t i = 0; i < stats.size(); ++i)
            out.results.push_back({dataset, stats[i].pipeline, metric, scaled_means[i], scaled_stds[i]});
    }
    return out;
}

}  // namespace fairens
