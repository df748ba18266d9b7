#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fairens/guidance/standardize.hpp"

namespace fairens {

/// Dataset bucket by size and baseline fairness.
struct Quadrant {
    bool large = false;
    bool fair = false;
    double rows_threshold = 8000;
    double di_threshold = 0.45;

    std::string size_name() const { return large ? "large" : "small"; }
    std::string fairness_name() const { return fair ? "fair" : "unfair"; }
    std::string name() const { return size_name() + "-" + fairness_name(); }
    std::size_t index() const { return (large ? 2 : 0) + (fair ? 0 : 1); }

    bool operator==(const Quadrant& o) const { return large == o.large && fair == o.fair; }
};

/// large iff n_rows >= rows_threshold; fair iff the folded baseline DI is at
/// least di_threshold.
inline Quadrant assign_quadrant(std::size_t n_rows, double folded_baseline_di,
                                double rows_threshold = 8000, double di_threshold = 0.45) {
    Quadrant q;
    q.rows_threshold = rows_threshold;
    q.di_threshold = di_threshold;
    q.large = double(n_rows) >= rows_threshold;
    q.fair = folded_baseline_di >= di_threshold;
    return q;
}

struct DatasetMeta {
    std::size_t n_rows = 0;
    double baseline_di = 1.0;  // raw; folded before the threshold comparison
};

struct GuidanceParams {
    double rows_threshold = 8000;
    double di_threshold = 0.45;
    double top_fraction = 1.0 / 3.0;  // survivor cut, by rank with ties kept
    std::size_t top_k = 3;
};

// the three reported target metrics
inline const std::vector<std::string>& diagram_metrics() {
    static const std::vector<std::string> m{"di_mean", "di_std", "f1_mean"};
    return m;
}

struct DiagramEntry {
    std::string pipeline;
    double value = 0.0;
};

struct DiagramCell {
    std::string status;  // ok | no data | no survivors
    std::vector<DiagramEntry> entries;
};

struct GuidanceDiagram {
    GuidanceParams params;
    struct QuadrantReport {
        Quadrant quadrant;
        std::vector<std::string> datasets;
        std::map<std::string, DiagramCell> cells;  // metric name -> cell
    };
    std::vector<QuadrantReport> quadrants;  // fixed order: small-fair, small-unfair, large-fair, large-unfair

    const QuadrantReport& quadrant(const Quadrant& q) const { return quadrants[q.index()]; }
};

namespace detail {

// pipelines in the top fraction of a dataset's scaled values, by rank with
// ties kept
inline std::set<std::string> top_fraction_set(const std::vector<StandardizedResult>& rows,
                                              double fraction) {
    if (rows.empty()) return {};
    std::vector<std::pair<double, std::string>> ranked;
    for (const auto& r : rows) ranked.emplace_back(r.scaled_mean, r.pipeline);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.first > b.first || (a.first == b.first && a.second < b.second);
    });
    std::size_t cutoff = std::size_t(std::ceil(fraction * double(ranked.size())));
    cutoff = std::max<std::size_t>(1, std::min(cutoff, ranked.size()));
    double cut_value = ranked[cutoff - 1].first;
    std::set<std::string> keep;
    for (const auto& [value, pipeline] : ranked)
        if (value >= cut_value) keep.insert(pipeline);
    return keep;
}

}  // namespace detail

/// The five generation steps: group by dataset; keep pipelines in the top
/// fraction of BOTH standardized DI outcome and standardized F1 outcome
/// within their dataset; place datasets into quadrants; average each
/// standardized metric per (quadrant, pipeline); report the top three per
/// quadrant and metric (volatility ascending, outcomes descending, ties by
/// pipeline text).
inline GuidanceDiagram generate_diagram(const std::vector<TrialRecord>& records,
                                        const std::map<std::string, DatasetMeta>& meta,
                                        const GuidanceParams& params = {}) {
    GuidanceDiagram diagram;
    diagram.params = params;
    diagram.quadrants.resize(4);
    for (bool large : {false, true})
        for (bool fair : {true, false}) {
            Quadrant q = {large, fair, params.rows_threshold, params.di_threshold};
            diagram.quadrants[q.index()].quadrant = q;
        }

    auto di_std = standardize(records, MetricId::Di);
    auto f1_std = standardize(records, MetricId::F1);

    // reshape: dataset -> pipeline -> scaled values
    struct Scaled {
        double di_mean = 0, di_vol = 0, f1_mean = 0;
        bool have_di = false, have_f1 = false;
    };
    std::map<std::string, std::map<std::string, Scaled>> scaled;
    for (const auto& r : di_std.results) {
        auto& s = scaled[r.dataset][r.pipeline];
        s.di_mean = r.scaled_mean;
        s.di_vol = r.scaled_std;
        s.have_di = true;
    }
    for (const auto& r : f1_std.results) {
        auto& s = scaled[r.dataset][r.pipeline];
        s.f1_mean = r.scaled_mean;
        s.have_f1 = true;
    }

    // survivors per dataset: top fraction of both DI and F1 outcomes
    std::map<std::string, std::set<std::string>> survivors;
    {
        std::map<std::string, std::vector<StandardizedResult>> di_rows, f1_rows;
        for (const auto& r : di_std.results) di_rows[r.dataset].push_back(r);
        for (const auto& r : f1_std.results) f1_rows[r.dataset].push_back(r);
        for (const auto& [dataset, rows] : di_rows) {
            auto top_di = detail::top_fraction_set(rows, params.top_fraction);
            auto top_f1 = detail::top_fraction_set(f1_rows[dataset], params.top_fraction);
            std::set<std::string> both;
            std::set_intersection(top_di.begin(), top_di.end(), top_f1.begin(), top_f1.end(),
                                  std::inserter(both, both.begin()));
            survivors[dataset] = std::move(both);
        }
    }

    // quadrant assignment and per-(quadrant, pipeline) averages
    struct Accum {
        double di_mean = 0, di_vol = 0, f1_mean = 0;
        std::size_t n = 0;
    };
    std::vector<std::map<std::string, Accum>> per_quadrant(4);
    for (const auto& [dataset, pipelines] : scaled) {
        auto m = meta.find(dataset);
        if (m == meta.end()) continue;  // no metadata, cannot place the dataset
        Quadrant q = assign_quadrant(m->second.n_rows, symmetric_di(m->second.baseline_di),
                                     params.rows_threshold, params.di_threshold);
        diagram.quadrants[q.index()].datasets.push_back(dataset);
        for (const auto& [pipeline, s] : pipelines) {
            if (!survivors[dataset].count(pipeline)) continue;
            auto& acc = per_quadrant[q.index()][pipeline];
            acc.di_mean += s.di_mean;
            acc.di_vol += s.di_vol;
            acc.f1_mean += s.f1_mean;
            ++acc.n;
        }
    }

    for (auto& qr : diagram.quadrants) {
        const auto& acc = per_quadrant[qr.quadrant.index()];
        std::sort(qr.datasets.begin(), qr.datasets.end());
        for (const auto& metric : diagram_metrics()) {
            DiagramCell cell;
            if (qr.datasets.empty()) {
                cell.status = "no data";
            } else if (acc.empty()) {
                cell.status = "no survivors";
            } else {
                cell.status = "ok";
                std::vector<DiagramEntry> entries;
                for (const auto& [pipeline, a] : acc) {
                    double v = metric == "di_mean" ? a.di_mean / double(a.n)
                               : metric == "di_std" ? a.di_vol / double(a.n)
                                                    : a.f1_mean / double(a.n);
                    entries.push_back({pipeline, v});
                }
                bool ascending = metric == "di_std";  // volatility: most stable first
                std::sort(entries.begin(), entries.end(), [&](const DiagramEntry& a, const DiagramEntry& b) {
                    if (a.value != b.value) return ascending ? a.value < b.value : a.value > b.value;
                    return a.pipeline < b.pipeline;
                });
                if (entries.size() > diagram.params.top_k) entries.resize(diagram.params.top_k);
                cell.entries = std::move(entries);
            }
            qr.cells[metric] = std::move(cell);
        }
    }
    return diagram;
}

// ---------------------------------------------------------------------------
// leave-one-out robustness

struct LooCell {
    std::size_t config_differences = 0;
    std::optional<double> metric_difference;  // raw, unstandardized
    std::string note;
};

struct LooRow {
    std::string dataset;
    std::string quadrant;
    std::string status;  // ok | quadrant emptied
    std::map<std::string, LooCell> cells;
};

struct LooReport {
    GuidanceParams params;
    std::vector<LooRow> rows;
};

namespace detail {

// raw (unstandardized, folded) quadrant-average of a target metric for one
// pipeline, always evaluated on the full record set
inline std::optional<double> raw_quadrant_metric(const std::vector<TrialRecord>& records,
                                                 const std::vector<std::string>& quadrant_datasets,
                                                 const std::string& pipeline, const std::string& metric) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& dataset : quadrant_datasets) {
        std::vector<const TrialRecord*> rows;
        for (const auto& r : records)
            if (r.dataset == dataset && r.pipeline == pipeline) rows.push_back(&r);
        if (rows.empty()) continue;
        auto stats = folded_stats(rows, metric == "f1_mean" ? MetricId::F1 : MetricId::Di);
        sum += metric == "di_std" ? stats.front().stddev : stats.front().mean;
        ++n;
    }
    if (n == 0) return std::nullopt;
    return sum / double(n);
}

}  // namespace detail

/// Re-generate the diagram once per omitted dataset and report, for that
/// dataset's quadrant and each target metric, how many of the top-3
/// recommendations changed and the raw metric difference between the two
/// rank-1 recommendations (both evaluated on the full record set).
inline LooReport leave_one_out(const std::vector<TrialRecord>& records,
                               const std::map<std::string, DatasetMeta>& meta,
                               const GuidanceParams& params = {}) {
    LooReport report;
    report.params = params;
    GuidanceDiagram full = generate_diagram(records, meta, params);

    for (const auto& [omitted, m] : meta) {
        Quadrant q = assign_quadrant(m.n_rows, symmetric_di(m.baseline_di), params.rows_threshold,
                                     params.di_threshold);
        LooRow row;
        row.dataset = omitted;
        row.quadrant = q.name();

        const auto& full_quadrant = full.quadrant(q);
        if (full_quadrant.datasets.size() < 2) {
            row.status = "quadrant emptied";
            report.rows.push_back(std::move(row));
            continue;
        }
        row.status = "ok";

        std::vector<TrialRecord> reduced;
        for (const auto& r : records)
            if (r.dataset != omitted) reduced.push_back(r);
        std::map<std::string, DatasetMeta> reduced_meta = meta;
        reduced_meta.erase(omitted);
        GuidanceDiagram loo = generate_diagram(reduced, reduced_meta, params);

        for (const auto& metric : diagram_metrics()) {
            const DiagramCell& full_cell = full_quadrant.cells.at(metric);
            const DiagramCell& loo_cell = loo.quadrant(q).cells.at(metric);
            LooCell out;

            std::set<std::string> full_set, loo_set;
            for (const auto& e : full_cell.entries) full_set.insert(e.pipeline);
            for (const auto& e : loo_cell.entries) loo_set.insert(e.pipeline);
            for (const auto& p : full_set) out.config_differences += loo_set.count(p) ? 0 : 1;

            if (!full_cell.entries.empty() && !loo_cell.entries.empty()) {
                auto full_value = detail::raw_quadrant_metric(records, full_quadrant.datasets,
                                                              full_cell.entries.front().pipeline, metric);
                auto loo_value = detail::raw_quadrant_metric(records, full_quadrant.datasets,
                                                             loo_cell.entries.front().pipeline, metric);
                if (full_value && loo_value) out.metric_difference = *full_value - *loo_value;
            } else {
                out.note = full_cell.entries.empty() ? "full cell empty" : "leave-one-out cell empty";
            }
            row.cells[metric] = std::move(out);
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace fairens
