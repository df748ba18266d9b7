#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fairens/core.hpp"
#include "fairens/csv.hpp"
#include "fairens/metrics.hpp"

namespace fairens {

// ---------------------------------------------------------------------------
// recipe

/// Declarative rule deciding whether a raw cell value marks the privileged
/// group: membership in a value set, or a numeric lower bound. When
/// unprivileged_values is non-empty, rows matching neither set are dropped
/// (two-cohort studies such as COMPAS).
struct ProtectedSpec {
    std::string column;
    std::vector<std::string> privileged_values;
    std::optional<double> privileged_min;
    std::vector<std::string> unprivileged_values;
};

/// A derived 0/1 column computed from value membership before encoding
/// (e.g. sex from a combined status column).
struct DeriveSpec {
    std::string name;
    std::string from;
    std::vector<std::string> one_values;
};

struct DatasetRecipe {
    std::string name;
    std::string target;
    std::string favorable;
    std::vector<ProtectedSpec> protected_attrs;  // multiple entries are ANDed into one group vector
    std::set<std::string> categorical;
    std::set<std::string> numeric;
    std::set<std::string> drop;
    std::vector<DeriveSpec> derive;
    bool scale_numeric = false;

    void check() const {
        if (target.empty()) throw ConfigError("recipe: target column required");
        if (drop.count(target)) throw ConfigError("recipe: target column is in the drop set");
        if (protected_attrs.empty()) throw ConfigError("recipe: at least one protected attribute required");
        for (const auto& c : categorical)
            if (numeric.count(c)) throw ConfigError("recipe: column both categorical and numeric: " + c);
    }
};

// ---------------------------------------------------------------------------
// encoded dataset

/// Fully numeric dataset: features X (protected attributes stay in as
/// features), favorable/unfavorable labels y, and the privileged-group
/// vector g carried separately for mitigators and fairness metrics.
struct Dataset {
    std::string name;
    Matrix X;
    std::vector<std::string> feature_names;
    std::vector<int> y;  // 1 = favorable
    std::vector<int> g;  // 1 = privileged
    std::vector<std::size_t> numeric_columns;  // candidates for scaling / quantile repair
    std::vector<std::size_t> protected_columns;  // feature columns sourced from protected attributes
    bool scale_numeric = false;  // refit min-max on the training slice inside CV
    std::size_t dropped_rows = 0;
    std::vector<std::string> warnings;

    std::size_t n_rows() const { return X.rows(); }
    std::size_t n_cols() const { return X.cols(); }

    DisparateImpactValue baseline_di() const { return disparate_impact(y, g); }

    void check() {
        if (y.size() != n_rows() || g.size() != n_rows())
            throw DataError("dataset " + name + ": label/group length mismatch");
        if (!X.all_finite()) throw DataError("dataset " + name + ": non-finite feature value");
        std::set<std::string> seen(feature_names.begin(), feature_names.end());
        if (seen.size() != feature_names.size())
            throw DataError("dataset " + name + ": duplicate feature names");
        if (n_rows() >= 4) {
            auto both = [](const std::vector<int>& v) {
                bool zero = false, one = false;
                for (int x : v) (x ? one : zero) = true;
                return zero && one;
            };
            if (!both(y)) warnings.push_back("only one label value present");
            if (!both(g)) warnings.push_back("only one group value present");
        }
    }

    Dataset slice(std::span<const std::size_t> rows, std::string slice_name = {}) const {
        Dataset out;
        out.name = slice_name.empty() ? name : std::move(slice_name);
        out.X = X.take_rows(rows);
        out.feature_names = feature_names;
        out.y = take(y, rows);
        out.g = take(g, rows);
        out.numeric_columns = numeric_columns;
        out.scale_numeric = scale_numeric;
        return out;
    }
};

namespace detail {

inline std::optional<double> parse_number(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return std::nullopt;
    std::size_t e = s.find_last_not_of(" \t") + 1;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data() + b, s.data() + e, v);
    if (ec != std::errc() || ptr != s.data() + e) return std::nullopt;
    return v;
}

inline bool is_missing(const std::string& s) {
    return s.empty() || s == "?" || s == "NA" || s == "nan" || s == "NaN";
}

// 1 privileged / 0 unprivileged / -1 drop row
inline int classify_protected(const ProtectedSpec& p, const std::string& cell) {
    if (is_missing(cell)) return -1;
    if (p.privileged_min) {
        auto v = parse_number(cell);
        if (!v) return -1;
        return *v >= *p.privileged_min ? 1 : 0;
    }
    for (const auto& pv : p.privileged_values)
        if (cell == pv) return 1;
    if (!p.unprivileged_values.empty()) {
        for (const auto& uv : p.unprivileged_values)
            if (cell == uv) return 0;
        return -1;
    }
    return 0;
}

}  // namespace detail

/// Encode a raw table per the recipe: derived binary columns first, then
/// one-hot categoricals (first-seen value order, missing as its own value),
/// median-imputed numerics, labels from the favorable literal, and the group
/// vector from the protected predicates (ANDed when several are listed).
/// Rows with a missing/unparseable target or protected value are dropped.
inline Dataset encode(const RawTable& raw_in, const DatasetRecipe& recipe) {
    recipe.check();
    RawTable raw = raw_in;

    for (const auto& d : recipe.derive) {
        std::size_t src = raw.column_index(d.from);
        raw.columns.push_back(d.name);
        for (auto& row : raw.cells) {
            bool one = std::find(d.one_values.begin(), d.one_values.end(), row[src]) != d.one_values.end();
            row.push_back(one ? "1" : "0");
        }
    }

    std::size_t target_col = raw.column_index(recipe.target);
    std::vector<std::size_t> prot_cols;
    for (const auto& p : recipe.protected_attrs) prot_cols.push_back(raw.column_index(p.column));

    Dataset ds;
    ds.name = recipe.name.empty() ? "dataset" : recipe.name;
    ds.scale_numeric = recipe.scale_numeric;

    // row filter: target and protected values must be usable
    std::vector<std::size_t> keep;
    std::vector<int> groups;
    for (std::size_t r = 0; r < raw.n_rows(); ++r) {
        if (detail::is_missing(raw.cells[r][target_col])) continue;
        int gv = 1;
        for (std::size_t k = 0; k < prot_cols.size(); ++k) {
            int c = detail::classify_protected(recipe.protected_attrs[k], raw.cells[r][prot_cols[k]]);
            if (c < 0) {
                gv = -1;
                break;
            }
            gv = gv && c;
        }
        if (gv < 0) continue;
        keep.push_back(r);
        groups.push_back(gv);
    }
    ds.dropped_rows = raw.n_rows() - keep.size();
    if (ds.dropped_rows > 0)
        ds.warnings.push_back("dropped " + std::to_string(ds.dropped_rows) +
                              " rows with missing target or protected value");
    if (keep.empty()) throw DataError("encode: no usable rows");

    ds.g = std::move(groups);
    if (std::find(ds.g.begin(), ds.g.end(), 1) == ds.g.end())
        throw DataError("encode: privileged predicate matches no rows");

    ds.y.reserve(keep.size());
    for (auto r : keep) ds.y.push_back(raw.cells[r][target_col] == recipe.favorable ? 1 : 0);
    if (std::find(ds.y.begin(), ds.y.end(), 1) == ds.y.end() ||
        std::find(ds.y.begin(), ds.y.end(), 0) == ds.y.end())
        throw DataError("encode: degenerate target (single class after encoding)");

    // feature columns, in raw order
    struct ColPlan {
        std::size_t src;
        bool categorical;
        std::vector<std::string> values;  // one-hot levels, first-seen order
    };
    std::vector<ColPlan> plan;
    for (std::size_t j = 0; j < raw.n_cols(); ++j) {
        const std::string& cname = raw.columns[j];
        if (j == target_col || recipe.drop.count(cname)) continue;
        bool cat = recipe.categorical.count(cname) > 0;
        if (!cat && !recipe.numeric.count(cname)) {
            // unlisted columns: numeric when every present cell parses, else categorical
            cat = false;
            for (auto r : keep) {
                const auto& cell = raw.cells[r][j];
                if (!detail::is_missing(cell) && !detail::parse_number(cell)) {
                    cat = true;
                    break;
                }
            }
        }
        ColPlan p{j, cat, {}};
        if (cat) {
            for (auto r : keep) {
                std::string v = detail::is_missing(raw.cells[r][j]) ? "missing" : raw.cells[r][j];
                if (std::find(p.values.begin(), p.values.end(), v) == p.values.end()) p.values.push_back(v);
            }
        }
        plan.push_back(std::move(p));
    }

    std::size_t n_cols = 0;
    for (const auto& p : plan) n_cols += p.categorical ? p.values.size() : 1;
    ds.X = Matrix(keep.size(), n_cols);

    auto is_protected = [&](const std::string& cname) {
        for (const auto& p : recipe.protected_attrs)
            if (p.column == cname) return true;
        for (const auto& d : recipe.derive) {
            if (d.name != cname) continue;
            for (const auto& p : recipe.protected_attrs)
                if (p.column == d.from) return true;
        }
        return false;
    };

    std::size_t out_col = 0;
    for (const auto& p : plan) {
        const std::string& cname = raw.columns[p.src];
        if (is_protected(cname)) {
            std::size_t width = p.categorical ? p.values.size() : 1;
            for (std::size_t w = 0; w < width; ++w) ds.protected_columns.push_back(out_col + w);
        }
        if (p.categorical) {
            for (std::size_t v = 0; v < p.values.size(); ++v) ds.feature_names.push_back(cname + "_" + p.values[v]);
            for (std::size_t i = 0; i < keep.size(); ++i) {
                std::string cell = detail::is_missing(raw.cells[keep[i]][p.src]) ? "missing"
                                                                                 : raw.cells[keep[i]][p.src];
                auto it = std::find(p.values.begin(), p.values.end(), cell);
                ds.X.at(i, out_col + std::size_t(it - p.values.begin())) = 1.0;
            }
            out_col += p.values.size();
        } else {
            ds.feature_names.push_back(cname);
            ds.numeric_columns.push_back(out_col);
            std::vector<double> present;
            std::vector<std::size_t> missing_rows;
            for (std::size_t i = 0; i < keep.size(); ++i) {
                auto v = detail::parse_number(raw.cells[keep[i]][p.src]);
                if (v) {
                    ds.X.at(i, out_col) = *v;
                    present.push_back(*v);
                } else {
                    missing_rows.push_back(i);
                }
            }
            double median = 0.0;
            if (!present.empty()) {
                std::sort(present.begin(), present.end());
                median = present.size() % 2 ? present[present.size() / 2]
                                            : 0.5 * (present[present.size() / 2 - 1] + present[present.size() / 2]);
            }
            for (auto i : missing_rows) ds.X.at(i, out_col) = median;
            if (!missing_rows.empty())
                ds.warnings.push_back("column " + cname + ": imputed " + std::to_string(missing_rows.size()) +
                                      " missing values with median " + format_double(median));
            ++out_col;
        }
    }

    if (recipe.scale_numeric && !ds.numeric_columns.empty()) {
        std::vector<std::size_t> all_rows(ds.n_rows());
        for (std::size_t i = 0; i < all_rows.size(); ++i) all_rows[i] = i;
        MinMaxScaler::fit(ds.X, all_rows, ds.numeric_columns).apply(ds.X);
    }

    ds.check();
    return ds;
}

// ---------------------------------------------------------------------------
// stratified cross-validation folds

/// Fold assignments stratified jointly by (label, group): per stratum the
/// fold counts differ by at most one.
struct FoldPlan {
    std::size_t k = 0;
    std::vector<std::size_t> assignments;      // row -> fold
    std::vector<std::pair<int, int>> strata;   // row -> (label, group)
    std::uint64_t seed = 0;

    std::vector<std::size_t> test_rows(std::size_t fold) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < assignments.size(); ++i)
            if (assignments[i] == fold) out.push_back(i);
        return out;
    }

    std::vector<std::size_t> train_rows(std::size_t fold) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < assignments.size(); ++i)
            if (assignments[i] != fold) out.push_back(i);
        return out;
    }
};

/// Greedy balanced dealing: within each (label, group) stratum rows go to
/// the fold with the fewest of that stratum (total count, then index, as
/// tie-breaks), so per-stratum fold counts differ by at most one and no
/// fold is left empty while k <= n.
inline std::vector<std::size_t> stratified_assignments(std::span<const int> y, std::span<const int> g,
                                                       std::size_t k, std::uint64_t seed) {
    if (k < 2) throw DataError("stratified split: k must be at least 2");
    if (k > y.size()) throw DataError("stratified split: k exceeds row count");

    std::map<std::pair<int, int>, std::vector<std::size_t>> strata;
    for (std::size_t i = 0; i < y.size(); ++i) strata[{y[i], g[i]}].push_back(i);

    std::vector<std::size_t> assignments(y.size(), 0);
    Rng rng(derive_seed(seed, {"kfold", std::to_string(k)}));
    std::vector<std::size_t> total(k, 0);
    for (auto& [key, rows] : strata) {
        rng.shuffle(rows);
        std::vector<std::size_t> per_fold(k, 0);
        for (auto row : rows) {
            std::size_t best = 0;
            for (std::size_t f = 1; f < k; ++f) {
                if (per_fold[f] < per_fold[best] ||
                    (per_fold[f] == per_fold[best] && total[f] < total[best]))
                    best = f;
            }
            assignments[row] = best;
            ++per_fold[best];
            ++total[best];
        }
    }
    return assignments;
}

inline FoldPlan stratified_kfold(const Dataset& ds, std::size_t k, std::uint64_t seed) {
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignments = stratified_assignments(ds.y, ds.g, k, derive_seed(seed, {ds.name}));
    plan.strata.resize(ds.n_rows());
    for (std::size_t i = 0; i < ds.n_rows(); ++i) plan.strata[i] = {ds.y[i], ds.g[i]};
    return plan;
}

/// Stratified train/holdout split; the holdout takes ceil(frac * m) of each
/// stratum except that singleton strata stay in the training part.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_holdout(
    std::span<const int> y, std::span<const int> g, double holdout_frac, std::uint64_t seed) {
    std::map<std::pair<int, int>, std::vector<std::size_t>> strata;
    for (std::size_t i = 0; i < y.size(); ++i) strata[{y[i], g[i]}].push_back(i);
    Rng rng(derive_seed(seed, {"holdout"}));
    std::vector<std::size_t> train, holdout;
    for (auto& [key, rows] : strata) {
        rng.shuffle(rows);
        std::size_t take = rows.size() >= 2
                               ? std::min(rows.size() - 1,
                                          std::size_t(std::ceil(holdout_frac * double(rows.size()))))
                               : 0;
        for (std::size_t i = 0; i < rows.size(); ++i) (i < take ? holdout : train).push_back(rows[i]);
    }
    std::sort(train.begin(), train.end());
    std::sort(holdout.begin(), holdout.end());
    return {std::move(train), std::move(holdout)};
}

// ---------------------------------------------------------------------------
// synthetic biased fixtures

/// Synthetic binary dataset with an even privileged/unprivileged split and
/// exact per-group favorable counts, so the baseline DI equals
/// rate_unpriv/rate_priv up to rounding. Features mix label signal, group
/// signal, and noise.
inline Dataset synth_biased(std::size_t n, double favorable_rate_priv, double favorable_rate_unpriv,
                            std::size_t n_features, std::uint64_t seed) {
    if (n < 8) throw DataError("synth_biased: need at least 8 rows");
    if (favorable_rate_priv < 0 || favorable_rate_priv > 1 || favorable_rate_unpriv < 0 ||
        favorable_rate_unpriv > 1)
        throw DataError("synth_biased: rates must lie in [0,1]");
    if (n_features == 0) throw DataError("synth_biased: need at least one feature");

    Dataset ds;
    ds.name = "synth(n=" + std::to_string(n) + ",pf=" + format_double(favorable_rate_priv) +
              ",uf=" + format_double(favorable_rate_unpriv) + ",d=" + std::to_string(n_features) +
              ",seed=" + std::to_string(seed) + ")";

    Rng rng(derive_seed(seed, {"synth", std::to_string(n)}));
    std::size_t n_priv = n / 2;

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);

    ds.y.assign(n, 0);
    ds.g.assign(n, 0);
    // first n_priv slots of the shuffled order are privileged; exact favorable
    // counts per group pin the baseline rates
    auto fill_group = [&](std::size_t begin, std::size_t count, int gv, double rate) {
        std::size_t n_fav = static_cast<std::size_t>(std::lround(rate * double(count)));
        std::vector<std::size_t> members(order.begin() + begin, order.begin() + begin + count);
        rng.shuffle(members);
        for (std::size_t i = 0; i < count; ++i) {
            ds.g[members[i]] = gv;
            ds.y[members[i]] = i < n_fav ? 1 : 0;
        }
    };
    fill_group(0, n_priv, 1, favorable_rate_priv);
    fill_group(n_priv, n - n_priv, 0, favorable_rate_unpriv);

    ds.X = Matrix(n, n_features);
    for (std::size_t j = 0; j < n_features; ++j) {
        ds.feature_names.push_back("x" + std::to_string(j));
        ds.numeric_columns.push_back(j);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n_features; ++j) {
            double v;
            switch (j % 3) {
                case 0: v = 2.0 * ds.y[i] - 1.0 + 0.8 * rng.normal(); break;  // label signal
                case 1: v = 0.8 * ds.g[i] - 0.4 + 0.7 * rng.normal(); break;  // group signal
                default: v = rng.normal(); break;                             // noise
            }
            ds.X.at(i, j) = v;
        }
    }

    ds.check();
    return ds;
}

}  // namespace fairens
