#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairens/core.hpp"

namespace fairens {

// ---------------------------------------------------------------------------
// group fairness metrics

/// Favorable-outcome rates per group plus the underlying 2x2 counts.
struct GroupRates {
    double rate_privileged = 0.0;
    double rate_unprivileged = 0.0;
    // counts[group][prediction], group 0 = unprivileged, 1 = privileged
    std::size_t counts[2][2] = {{0, 0}, {0, 0}};

    std::size_t n_privileged() const { return counts[1][0] + counts[1][1]; }
    std::size_t n_unprivileged() const { return counts[0][0] + counts[0][1]; }
};

inline GroupRates group_rates(std::span<const int> pred, std::span<const int> group) {
    if (pred.size() != group.size() || pred.empty())
        throw DataError("group_rates: prediction and group vectors must be non-empty and equal length");
    GroupRates r;
    for (std::size_t i = 0; i < pred.size(); ++i) ++r.counts[group[i] ? 1 : 0][pred[i] ? 1 : 0];
    if (r.n_privileged() > 0) r.rate_privileged = double(r.counts[1][1]) / double(r.n_privileged());
    if (r.n_unprivileged() > 0) r.rate_unprivileged = double(r.counts[0][1]) / double(r.n_unprivileged());
    return r;
}

/// Ratio of favorable rates, unprivileged over privileged. UNDEFINED when a
/// group is absent or only the unprivileged group receives favorable
/// outcomes; 0/0 is defined as 1 (both groups treated identically).
struct DisparateImpactValue {
    double value = 0.0;
    bool defined = false;
    std::string diagnostic;

    static DisparateImpactValue of(double v) { return {v, true, {}}; }
    static DisparateImpactValue undefined(std::string why) { return {0.0, false, std::move(why)}; }
};

inline DisparateImpactValue disparate_impact(const GroupRates& r) {
    if (r.n_privileged() == 0) return DisparateImpactValue::undefined("no privileged rows");
    if (r.n_unprivileged() == 0) return DisparateImpactValue::undefined("no unprivileged rows");
    if (r.rate_privileged == 0.0) {
        if (r.rate_unprivileged == 0.0) return DisparateImpactValue::of(1.0);
        return DisparateImpactValue::undefined("privileged favorable rate is 0");
    }
    return DisparateImpactValue::of(r.rate_unprivileged / r.rate_privileged);
}

inline DisparateImpactValue disparate_impact(std::span<const int> pred, std::span<const int> group) {
    return disparate_impact(group_rates(pred, group));
}

/// rate(unprivileged) - rate(privileged); nullopt when a group is absent.
inline std::optional<double> statistical_parity_difference(std::span<const int> pred,
                                                           std::span<const int> group) {
    auto r = group_rates(pred, group);
    if (r.n_privileged() == 0 || r.n_unprivileged() == 0) return std::nullopt;
    return r.rate_unprivileged - r.rate_privileged;
}

/// Fold DI into [0, 1]: the reciprocal when above 1, 0 for UNDEFINED.
inline double symmetric_di(const DisparateImpactValue& di) {
    if (!di.defined) return 0.0;
    if (di.value <= 0.0) return 0.0;
    return di.value <= 1.0 ? di.value : 1.0 / di.value;
}

inline double symmetric_di(double di) { return symmetric_di(DisparateImpactValue::of(di)); }

// ---------------------------------------------------------------------------
// predictive metrics

struct PredictiveReport {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
};

/// Standard binary metrics with favorable = positive class. Precision is 0
/// when nothing is predicted positive; f1 is 0 when precision + recall = 0.
inline PredictiveReport classification_metrics(std::span<const int> y, std::span<const int> pred) {
    if (y.size() != pred.size() || y.empty())
        throw DataError("classification_metrics: label and prediction vectors must be non-empty and equal length");
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (pred[i] && y[i]) ++tp;
        else if (pred[i] && !y[i]) ++fp;
        else if (!pred[i] && y[i]) ++fn;
        else ++tn;
    }
    PredictiveReport m;
    m.precision = (tp + fp) > 0 ? double(tp) / double(tp + fp) : 0.0;
    m.recall = (tp + fn) > 0 ? double(tp) / double(tp + fn) : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    m.accuracy = double(tp + tn) / double(y.size());
    return m;
}

// ---------------------------------------------------------------------------
// blended search objective

/// Per-dataset reference points for the blended objective: the baseline
/// symmetric DI of the true labels, the F1 of the constant-favorable
/// classifier, and the F1 of a cross-validated gradient-boosted reference.
struct ScorerRefs {
    double min_di = 0.0;
    static constexpr double max_di = 1.0;
    double min_f1 = 0.0;
    double max_f1 = 1.0;
    static constexpr double amplify_below = 0.66;
    static constexpr double blend_weight = 0.5;

    ScorerRefs(double min_di_, double min_f1_, double max_f1_)
        : min_di(min_di_), min_f1(min_f1_), max_f1(max_f1_) {
        if (min_di > 1.0) throw DataError("scorer refs: baseline symmetric DI above 1");
        if (min_f1 > max_f1)
            throw DataError("scorer refs: reference model F1 (" + format_double(max_f1) +
                            ") below trivial F1 (" + format_double(min_f1) + ")");
    }

    /// F1 of the always-favorable predictor, from the base rate alone.
    static double trivial_f1(std::span<const int> y) {
        std::size_t pos = 0;
        for (int v : y) pos += v ? 1 : 0;
        double p = y.empty() ? 0.0 : double(pos) / double(y.size());
        return p > 0.0 ? 2.0 * p / (1.0 + p) : 0.0;
    }
};

/// Scale symmetric DI and F1 into reference units, amplify either when it
/// falls below 0.66 (v -> 2v - 0.66), and average. Unclamped.
inline double blended_score(double sym_di, double f1, const ScorerRefs& refs) {
    if (refs.max_f1 == refs.min_f1) throw DataError("degenerate scorer refs: max_f1 == min_f1");
    double di = refs.min_di < 1.0 ? (sym_di - refs.min_di) / (ScorerRefs::max_di - refs.min_di) : sym_di;
    double f = (f1 - refs.min_f1) / (refs.max_f1 - refs.min_f1);
    if (di < ScorerRefs::amplify_below) di -= ScorerRefs::amplify_below - di;
    if (f < ScorerRefs::amplify_below) f -= ScorerRefs::amplify_below - f;
    return ScorerRefs::blend_weight * (di + f);
}

inline double blended_score(std::span<const int> pred, std::span<const int> y, std::span<const int> group,
                            const ScorerRefs& refs) {
    double sym = symmetric_di(disparate_impact(pred, group));
    double f1 = classification_metrics(y, pred).f1;
    return blended_score(sym, f1, refs);
}

// ---------------------------------------------------------------------------
// one evaluated configuration's flat metric report

struct MetricReport {
    DisparateImpactValue di;
    std::optional<double> spd;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
    double fit_seconds = 0.0;

    static MetricReport evaluate(std::span<const int> y, std::span<const int> pred,
                                 std::span<const int> group) {
        MetricReport r;
        r.di = disparate_impact(pred, group);
        r.spd = statistical_parity_difference(pred, group);
        auto m = classification_metrics(y, pred);
        r.precision = m.precision;
        r.recall = m.recall;
        r.f1 = m.f1;
        r.accuracy = m.accuracy;
        return r;
    }
};

}  // namespace fairens
