#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "fairens/core.hpp"

namespace fairens {

enum class CeoCost { Weighted, Fpr, Fnr };

inline std::string ceo_cost_name(CeoCost c) {
    switch (c) {
        case CeoCost::Weighted: return "weighted";
        case CeoCost::Fpr: return "fpr";
        case CeoCost::Fnr: return "fnr";
    }
    throw ConfigError("unknown ceo cost");
}

inline CeoCost ceo_cost_from_name(const std::string& s) {
    if (s == "weighted") return CeoCost::Weighted;
    if (s == "fpr") return CeoCost::Fpr;
    if (s == "fnr") return CeoCost::Fnr;
    throw ConfigError("unknown ceo cost constraint: " + s);
}

/// Pleiss-style calibrated equalized odds. The group with the lower
/// calibrated cost has its scores mixed toward its own base rate by a rate
/// alpha, found on a 0.01 grid so post-mixing costs match the other group's.
/// At most one of the two mixing rates is nonzero.
struct CeoModel {
    double alpha_priv = 0.0;
    double alpha_unpriv = 0.0;
    double base_rate[2] = {0.0, 0.0};  // [group]
    CeoCost cost = CeoCost::Weighted;
    std::vector<std::string> warnings;

    double alpha(int group) const { return group ? alpha_priv : alpha_unpriv; }
};

namespace detail {

// generalized cost of scores restricted to one group; empty components
// (a group without positives or negatives) contribute 0
inline double ceo_group_cost(std::span<const double> scores, std::span<const int> y,
                             std::span<const int> g, int group, CeoCost cost) {
    double fp = 0.0, n_neg = 0.0, fn = 0.0, n_pos = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if ((g[i] ? 1 : 0) != group) continue;
        if (y[i]) {
            fn += 1.0 - scores[i];
            n_pos += 1.0;
        } else {
            fp += scores[i];
            n_neg += 1.0;
        }
    }
    double gfpr = n_neg > 0.0 ? fp / n_neg : 0.0;
    double gfnr = n_pos > 0.0 ? fn / n_pos : 0.0;
    double total = n_pos + n_neg;
    double br = total > 0.0 ? n_pos / total : 0.0;
    switch (cost) {
        case CeoCost::Fpr: return gfpr;
        case CeoCost::Fnr: return gfnr;
        case CeoCost::Weighted: return br * gfnr + (1.0 - br) * gfpr;
    }
    return 0.0;
}

}  // namespace detail

inline CeoModel ceo_fit(std::span<const double> scores, std::span<const int> y, std::span<const int> g,
                        CeoCost cost) {
    if (scores.size() != y.size() || scores.size() != g.size() || scores.empty())
        throw DataError("ceo fit: length mismatch");
    for (double s : scores)
        if (s < 0.0 || s > 1.0) throw DataError("ceo fit: scores must lie in [0,1]");
    std::size_t n_grp[2] = {0, 0};
    for (int v : g) ++n_grp[v ? 1 : 0];
    if (n_grp[0] == 0 || n_grp[1] == 0) throw DataError("ceo fit: a group has zero rows");

    CeoModel m;
    m.cost = cost;
    for (int grp = 0; grp < 2; ++grp) {
        double pos = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i)
            if ((g[i] ? 1 : 0) == grp && y[i]) pos += 1.0;
        m.base_rate[grp] = pos / double(n_grp[grp]);
    }

    double cost_of[2] = {detail::ceo_group_cost(scores, y, g, 0, cost),
                         detail::ceo_group_cost(scores, y, g, 1, cost)};
    int low = cost_of[0] <= cost_of[1] ? 0 : 1;
    int high = 1 - low;
    // equal within the grid tolerance: identity. 0.01 covers the residual a
    // half grid step can leave (cost slopes are bounded by 1), which makes
    // refitting on already-mixed scores a no-op.
    if (std::abs(cost_of[0] - cost_of[1]) <= 0.01) return m;

    // grid search over the mixing rate for the lower-cost group
    std::vector<double> mixed(scores.begin(), scores.end());
    double best_alpha = 0.0;
    double best_gap = std::abs(cost_of[low] - cost_of[high]);
    for (int step = 1; step <= 100; ++step) {
        double alpha = double(step) / 100.0;
        for (std::size_t i = 0; i < scores.size(); ++i)
            if ((g[i] ? 1 : 0) == low) mixed[i] = (1.0 - alpha) * scores[i] + alpha * m.base_rate[low];
        double gap = std::abs(detail::ceo_group_cost(mixed, y, g, low, cost) - cost_of[high]);
        if (gap < best_gap) {
            best_gap = gap;
            best_alpha = alpha;
        }
    }
    (low ? m.alpha_priv : m.alpha_unpriv) = best_alpha;
    return m;
}

/// Mix the degraded group's scores toward its base rate. Convexity keeps
/// outputs in [0,1]; labels downstream threshold at 0.5.
inline std::vector<double> ceo_apply(const CeoModel& m, std::span<const double> scores,
                                     std::span<const int> g) {
    if (scores.size() != g.size()) throw DataError("ceo apply: length mismatch");
    std::vector<double> out(scores.begin(), scores.end());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double a = m.alpha(g[i]);
        if (a > 0.0) out[i] = (1.0 - a) * out[i] + a * m.base_rate[g[i] ? 1 : 0];
    }
    return out;
}

inline std::vector<int> ceo_labels(std::span<const double> adjusted) {
    std::vector<int> out(adjusted.size());
    for (std::size_t i = 0; i < adjusted.size(); ++i) out[i] = adjusted[i] > 0.5 ? 1 : 0;
    return out;
}

}  // namespace fairens
