#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fairens/harness/store.hpp"
#include "fairens/pipeline/expr.hpp"

namespace fairens {

enum class MitigatorRole { Pre, In, Post };

inline std::string mitigator_role_name(MitigatorRole r) {
    switch (r) {
        case MitigatorRole::Pre: return "pre";
        case MitigatorRole::In: return "in";
        case MitigatorRole::Post: return "post";
    }
    return "?";
}

enum class SelectionMetric { Precision, Recall };

/// Per-candidate means over all trials and folds of one dataset.
struct Step1Candidate {
    std::string pipeline;
    std::string mitigator;
    MitigatorRole role = MitigatorRole::Pre;
    double mean_di = 0.0;  // over records with defined DI
    bool has_di = false;
    double mean_f1 = 0.0;
    double mean_precision = 0.0;
    double mean_recall = 0.0;
};

struct FilterAudit {
    std::string filter;                  // F1..F4
    std::size_t survivors_before = 0;
    std::size_t survivors_after = 0;
    bool relaxed = false;                // filter emptied the set and was skipped
    std::string note;
};

/// Outcome for one (dataset, mitigator kind).
struct Step1Kind {
    std::string chosen_pipeline;
    std::string chosen_mitigator;
    bool relaxed = false;
    std::vector<FilterAudit> audit;
};

struct Step1Choice {
    std::map<std::string, std::map<MitigatorRole, Step1Kind>> by_dataset;
    std::vector<std::string> warnings;

    const Step1Kind* find(const std::string& dataset, MitigatorRole role) const {
        auto d = by_dataset.find(dataset);
        if (d == by_dataset.end()) return nullptr;
        auto k = d->second.find(role);
        return k == d->second.end() ? nullptr : &k->second;
    }
};

namespace detail {

inline std::optional<std::pair<MitigatorRole, std::string>> candidate_role(const std::string& pipeline_text) {
    ExprPtr e;
    try {
        e = parse_pipeline(pipeline_text);
    } catch (const ParseError&) {
        return std::nullopt;
    }
    using T = PipelineExpr::Type;
    switch (e->type) {
        case T::Pre: return std::make_pair(MitigatorRole::Pre, e->mitigator.text());
        case T::InEst:
            return e->children.empty() ? std::make_pair(MitigatorRole::In, e->mitigator.text())
                                       : std::optional<std::pair<MitigatorRole, std::string>>{};
        case T::Post: return std::make_pair(MitigatorRole::Post, e->mitigator.text());
        default: return std::nullopt;
    }
}

struct Step1Aggregate {
    std::map<std::string, std::map<std::string, std::vector<const TrialRecord*>>> by_dataset_pipeline;
};

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / double(v.size());
}

inline double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    if (v.empty()) return 0.0;
    return v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
}

}  // namespace detail

/// The four-step "best mitigator" selection, per dataset and mitigator kind:
///   F1 mean DI within [0.8, 1.25];
///   F2 mean precision above the constant-favorable baseline on the same
///      folds (the dummy(label=1) rows in the same record set);
///   F3 mean F1 above max(average, median) of all the kind's mean F1s;
///   F4 argmax precision or recall (tie: lexicographic pipeline text).
/// A filter that would empty the survivor set is skipped and the choice is
/// flagged relaxed.
inline Step1Choice select_step1(const std::vector<TrialRecord>& records, SelectionMetric metric) {
    Step1Choice out;

    // aggregate per (dataset, pipeline)
    std::map<std::string, std::map<std::string, std::vector<const TrialRecord*>>> grouped;
    for (const auto& r : records) grouped[r.dataset][r.pipeline].push_back(&r);

    for (const auto& [dataset, pipelines] : grouped) {
        // constant-favorable baseline for F2
        std::optional<double> baseline_precision;
        {
            auto it = pipelines.find("dummy(label=1)");
            if (it != pipelines.end()) {
                std::vector<double> p;
                for (auto* r : it->second) p.push_back(r->metrics.precision);
                baseline_precision = detail::mean_of(p);
            }
        }

        std::map<MitigatorRole, std::vector<Step1Candidate>> by_role;
        for (const auto& [pipeline, rows] : pipelines) {
            auto role = detail::candidate_role(pipeline);
            if (!role) continue;
            Step1Candidate c;
            c.pipeline = pipeline;
            c.role = role->first;
            c.mitigator = role->second;
            std::vector<double> di, f1, prec, rec;
            for (auto* r : rows) {
                if (r->metrics.di.defined) di.push_back(r->metrics.di.value);
                f1.push_back(r->metrics.f1);
                prec.push_back(r->metrics.precision);
                rec.push_back(r->metrics.recall);
            }
            c.has_di = !di.empty();
            c.mean_di = detail::mean_of(di);
            c.mean_f1 = detail::mean_of(f1);
            c.mean_precision = detail::mean_of(prec);
            c.mean_recall = detail::mean_of(rec);
            by_role[role->first].push_back(std::move(c));
        }

        for (auto role : {MitigatorRole::Pre, MitigatorRole::In, MitigatorRole::Post}) {
            auto it = by_role.find(role);
            if (it == by_role.end() || it->second.empty()) {
                out.warnings.push_back(dataset + ": no " + mitigator_role_name(role) +
                                       "-estimator candidates in the record set");
                continue;
            }
            auto& candidates = it->second;
            std::sort(candidates.begin(), candidates.end(),
                      [](const Step1Candidate& a, const Step1Candidate& b) { return a.pipeline < b.pipeline; });

            Step1Kind kind;
            std::vector<const Step1Candidate*> survivors;
            for (const auto& c : candidates) survivors.push_back(&c);

            auto apply_filter = [&](const std::string& name, auto&& keep, const std::string& note) {
                FilterAudit audit;
                audit.filter = name;
                audit.survivors_before = survivors.size();
                audit.note = note;
                std::vector<const Step1Candidate*> next;
                for (auto* c : survivors)
                    if (keep(*c)) next.push_back(c);
                if (next.empty()) {
                    audit.relaxed = true;
                    kind.relaxed = true;
                    audit.survivors_after = survivors.size();
                } else {
                    survivors = std::move(next);
                    audit.survivors_after = survivors.size();
                }
                kind.audit.push_back(std::move(audit));
            };

            apply_filter(
                "F1", [](const Step1Candidate& c) { return c.has_di && c.mean_di >= 0.8 && c.mean_di <= 1.25; },
                "mean DI within [0.8, 1.25]");

            if (baseline_precision) {
                double base = *baseline_precision;
                apply_filter(
                    "F2", [base](const Step1Candidate& c) { return c.mean_precision > base; },
                    "mean precision above constant-favorable baseline " + format_double(base));
            } else {
                FilterAudit audit;
                audit.filter = "F2";
                audit.survivors_before = audit.survivors_after = survivors.size();
                audit.relaxed = true;
                audit.note = "no dummy(label=1) baseline rows in the record set; filter skipped";
                kind.relaxed = true;
                kind.audit.push_back(std::move(audit));
            }

            {
                // population: every candidate of this kind, before filtering
                std::vector<double> all_f1;
                for (const auto& c : candidates) all_f1.push_back(c.mean_f1);
                double bar = std::max(detail::mean_of(all_f1), detail::median_of(all_f1));
                apply_filter(
                    "F3", [bar](const Step1Candidate& c) { return c.mean_f1 > bar; },
                    "mean F1 above max(average, median) = " + format_double(bar) +
                        " of all the kind's mean F1 scores");
            }

            const Step1Candidate* best = survivors.front();
            for (auto* c : survivors) {
                double cv = metric == SelectionMetric::Precision ? c->mean_precision : c->mean_recall;
                double bv = metric == SelectionMetric::Precision ? best->mean_precision : best->mean_recall;
                if (cv > bv) best = c;
            }
            FilterAudit f4;
            f4.filter = "F4";
            f4.survivors_before = survivors.size();
            f4.survivors_after = 1;
            f4.note = std::string("argmax ") +
                      (metric == SelectionMetric::Precision ? "precision" : "recall") + " -> " +
                      best->pipeline;
            kind.audit.push_back(std::move(f4));

            kind.chosen_pipeline = best->pipeline;
            kind.chosen_mitigator = best->mitigator;
            out.by_dataset[dataset][role] = std::move(kind);
        }
    }
    return out;
}

}  // namespace fairens
