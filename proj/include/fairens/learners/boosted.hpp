#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "fairens/learners/model.hpp"

namespace fairens {

struct GbtParams {
    std::size_t n_rounds = 50;
    double learning_rate = 0.1;
    std::size_t max_depth = 3;
};

/// Gradient boosting for binary log-loss. Each round fits a variance-split
/// regression tree to the residuals y - p and assigns leaf values by a few
/// Newton iterations on the leaf's log-loss (clamped for pure leaves). Split
/// ties break like the classification tree: lowest feature, lowest
/// threshold. Per-feature split gains accumulate into importances.
class GbtModel final : public ModelBase {
  public:
    struct Node {
        bool leaf = true;
        std::size_t feature = 0;
        double threshold = 0.0;
        double value = 0.0;
        std::int32_t left = -1, right = -1;
    };
    struct Tree {
        std::vector<Node> nodes;
    };

    static GbtModel fit(const Matrix& X, std::span<const int> y, std::span<const double> weights,
                        const GbtParams& params) {
        if (y.size() != X.rows()) throw DataError("gbt fit: label length mismatch");
        GbtModel m;
        m.params_ = params;
        m.n_features_ = X.cols();
        m.importance_.assign(X.cols(), 0.0);
        std::vector<double> w = detail::normalize_weights(weights, X.rows());
        auto weight_of = [&](std::size_t r) { return w.empty() ? 1.0 : w[r]; };

        double wpos = 0.0, wtot = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            wtot += weight_of(i);
            if (y[i]) wpos += weight_of(i);
        }
        m.f0_ = detail::clamped_log_odds(wpos / wtot);
        bool single_class = wpos == 0.0 || wpos == wtot;

        std::vector<double> f(X.rows(), m.f0_);
        if (!single_class) {
            for (std::size_t round = 0; round < params.n_rounds; ++round) {
                std::vector<double> residual(X.rows());
                for (std::size_t i = 0; i < X.rows(); ++i)
                    residual[i] = (y[i] ? 1.0 : 0.0) - detail::sigmoid(f[i]);
                Tree tree;
                std::vector<std::size_t> rows(X.rows());
                for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
                m.build(tree, X, residual, w, rows, 1);
                // Newton leaf values over the rows that landed in each leaf
                std::vector<std::vector<std::size_t>> leaf_rows(tree.nodes.size());
                for (std::size_t i = 0; i < X.rows(); ++i) leaf_rows[m.leaf_index(tree, X.row(i))].push_back(i);
                for (std::size_t li = 0; li < tree.nodes.size(); ++li) {
                    if (!tree.nodes[li].leaf || leaf_rows[li].empty()) continue;
                    double gamma = 0.0;
                    for (int step = 0; step < 4; ++step) {
                        double num = 0.0, den = 0.0;
                        for (auto r : leaf_rows[li]) {
                            double p = detail::sigmoid(f[r] + gamma);
                            num += weight_of(r) * ((y[r] ? 1.0 : 0.0) - p);
                            den += weight_of(r) * p * (1.0 - p);
                        }
                        if (den < 1e-12) {
                            gamma = num > 0.0 ? 10.0 : -10.0;
                            break;
                        }
                        gamma = std::clamp(gamma + num / den, -10.0, 10.0);
                    }
                    tree.nodes[li].value = gamma;
                }
                for (std::size_t i = 0; i < X.rows(); ++i)
                    f[i] += params.learning_rate * tree.nodes[m.leaf_index(tree, X.row(i))].value;
                m.trees_.push_back(std::move(tree));
            }
        }
        return m;
    }

    std::string kind() const override { return "gbt"; }
    bool supports_weights() const override { return true; }
    std::size_t n_features() const override { return n_features_; }

    Matrix predict_proba(const Matrix& X) const override {
        check_width(X);
        Matrix out(X.rows(), 2);
        for (std::size_t i = 0; i < X.rows(); ++i) {
            double p = detail::sigmoid(decision(X.row(i)));
            out.at(i, 0) = 1.0 - p;
            out.at(i, 1) = p;
        }
        return out;
    }

    std::vector<int> predict(const Matrix& X) const override {
        check_width(X);
        std::vector<int> out(X.rows());
        for (std::size_t i = 0; i < X.rows(); ++i) out[i] = decision(X.row(i)) > 0.0 ? 1 : 0;
        return out;
    }

    /// Normalized total split gain per feature; zeros when no splits happened.
    std::vector<double> feature_importances() const {
        double total = 0.0;
        for (double v : importance_) total += v;
        std::vector<double> out = importance_;
        if (total > 0.0)
            for (double& v : out) v /= total;
        return out;
    }

    nlohmann::json params_json() const override {
        nlohmann::json trees = nlohmann::json::array();
        for (const auto& t : trees_) {
            nlohmann::json nodes = nlohmann::json::array();
            for (const auto& n : t.nodes)
                nodes.push_back({{"leaf", n.leaf},
                                 {"feature", n.feature},
                                 {"threshold", n.threshold},
                                 {"value", n.value},
                                 {"left", n.left},
                                 {"right", n.right}});
            trees.push_back(std::move(nodes));
        }
        return {{"f0", f0_}, {"lr", params_.learning_rate}, {"n_features", n_features_}, {"trees", trees}};
    }

    static GbtModel from_json(const nlohmann::json& j) {
        GbtModel m;
        m.f0_ = j.at("f0").get<double>();
        m.params_.learning_rate = j.at("lr").get<double>();
        m.n_features_ = j.at("n_features").get<std::size_t>();
        m.importance_.assign(m.n_features_, 0.0);
        for (const auto& tj : j.at("trees")) {
            Tree t;
            for (const auto& nj : tj) {
                Node n;
                n.leaf = nj.at("leaf").get<bool>();
                n.feature = nj.at("feature").get<std::size_t>();
                n.threshold = nj.at("threshold").get<double>();
                n.value = nj.at("value").get<double>();
                n.left = nj.at("left").get<std::int32_t>();
                n.right = nj.at("right").get<std::int32_t>();
                t.nodes.push_back(n);
            }
            m.trees_.push_back(std::move(t));
        }
        return m;
    }

  private:
    double decision(std::span<const double> x) const {
        double f = f0_;
        for (const auto& t : trees_) f += params_.learning_rate * t.nodes[leaf_index(t, x)].value;
        return f;
    }

    std::size_t leaf_index(const Tree& t, std::span<const double> x) const {
        std::size_t at = 0;
        while (!t.nodes[at].leaf)
            at = x[t.nodes[at].feature] <= t.nodes[at].threshold ? std::size_t(t.nodes[at].left)
                                                                 : std::size_t(t.nodes[at].right);
        return at;
    }

    std::int32_t build(Tree& tree, const Matrix& X, const std::vector<double>& target,
                       const std::vector<double>& w, std::vector<std::size_t>& rows, std::size_t depth) {
        Node node;
        if (depth <= params_.max_depth && rows.size() >= 2) {
            auto split = best_split(X, target, w, rows);
            if (split.valid && split.gain > 1e-12) {
                importance_[split.feature] += split.gain;
                node.leaf = false;
                node.feature = split.feature;
                node.threshold = split.threshold;
                std::vector<std::size_t> left, right;
                for (auto r : rows) (X.at(r, split.feature) <= split.threshold ? left : right).push_back(r);
                rows.clear();
                rows.shrink_to_fit();
                std::int32_t self = alloc(tree, node);
                std::int32_t l = build(tree, X, target, w, left, depth + 1);
                std::int32_t r = build(tree, X, target, w, right, depth + 1);
                tree.nodes[self].left = l;
                tree.nodes[self].right = r;
                return self;
            }
        }
        return alloc(tree, node);
    }

    struct Split {
        bool valid = false;
        std::size_t feature = 0;
        double threshold = 0.0;
        double gain = 0.0;
    };

    // variance-reduction split: maximize S_L^2/W_L + S_R^2/W_R
    Split best_split(const Matrix& X, const std::vector<double>& target, const std::vector<double>& w,
                     const std::vector<std::size_t>& rows) const {
        auto weight_of = [&](std::size_t r) { return w.empty() ? 1.0 : w[r]; };
        Split best;
        double tot_s = 0.0, tot_w = 0.0;
        for (auto r : rows) {
            tot_s += weight_of(r) * target[r];
            tot_w += weight_of(r);
        }
        double parent_score = tot_w > 0.0 ? tot_s * tot_s / tot_w : 0.0;
        std::vector<std::pair<double, std::size_t>> vals(rows.size());
        for (std::size_t f = 0; f < X.cols(); ++f) {
            for (std::size_t i = 0; i < rows.size(); ++i) vals[i] = {X.at(rows[i], f), rows[i]};
            std::sort(vals.begin(), vals.end());
            double ls = 0.0, lw = 0.0;
            for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
                std::size_t r = vals[i].second;
                ls += weight_of(r) * target[r];
                lw += weight_of(r);
                if (vals[i].first == vals[i + 1].first) continue;
                double rs = tot_s - ls, rw = tot_w - lw;
                if (lw <= 0.0 || rw <= 0.0) continue;
                double gain = ls * ls / lw + rs * rs / rw - parent_score;
                if (!best.valid || gain > best.gain) {
                    best.valid = true;
                    best.feature = f;
                    best.threshold = vals[i].first + 0.5 * (vals[i + 1].first - vals[i].first);
                    best.gain = gain;
                }
            }
        }
        return best;
    }

    static std::int32_t alloc(Tree& t, const Node& n) {
        t.nodes.push_back(n);
        return std::int32_t(t.nodes.size() - 1);
    }

    double f0_ = 0.0;
    std::size_t n_features_ = 0;
    std::vector<Tree> trees_;
    std::vector<double> importance_;
    GbtParams params_;
};

}  // namespace fairens
