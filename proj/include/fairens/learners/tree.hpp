#pragma once

#include <algorithm>
#include <vector>

#include "fairens/learners/model.hpp"

namespace fairens {

struct TreeParams {
    std::size_t max_depth = 0;  // 0 = unbounded
    std::size_t min_leaf = 1;
};

/// CART with weighted Gini impurity. Tie-breaking is pinned: among
/// equal-impurity splits the lowest feature index wins, then the lowest
/// threshold. Zero-gain splits are taken while a node is impure and
/// separable, so conflict-free training data is always fit exactly at
/// unbounded depth.
class DecisionTreeModel final : public ModelBase {
  public:
    struct Node {
        bool leaf = true;
        std::size_t feature = 0;
        double threshold = 0.0;
        double p1 = 0.0;  // weighted favorable fraction at the node
        std::int32_t left = -1, right = -1;
    };

    static DecisionTreeModel fit(const Matrix& X, std::span<const int> y, std::span<const double> weights,
                                 const TreeParams& params) {
        if (y.size() != X.rows()) throw DataError("tree fit: label length mismatch");
        DecisionTreeModel m;
        m.n_features_ = X.cols();
        m.params_ = params;
        std::vector<double> w = detail::normalize_weights(weights, X.rows());
        std::vector<std::size_t> rows(X.rows());
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
        m.build(X, y, w, rows, 1);
        return m;
    }

    std::string kind() const override { return "tree"; }
    bool supports_weights() const override { return true; }
    std::size_t n_features() const override { return n_features_; }

    Matrix predict_proba(const Matrix& X) const override {
        check_width(X);
        Matrix out(X.rows(), 2);
        for (std::size_t i = 0; i < X.rows(); ++i) {
            double p1 = leaf_p1(X.row(i));
            out.at(i, 0) = 1.0 - p1;
            out.at(i, 1) = p1;
        }
        return out;
    }

    nlohmann::json params_json() const override {
        nlohmann::json nodes = nlohmann::json::array();
        for (const auto& n : nodes_)
            nodes.push_back({{"leaf", n.leaf},
                             {"feature", n.feature},
                             {"threshold", n.threshold},
                             {"p1", n.p1},
                             {"left", n.left},
                             {"right", n.right}});
        return {{"nodes", nodes}, {"n_features", n_features_}};
    }

    static DecisionTreeModel from_json(const nlohmann::json& j) {
        DecisionTreeModel m;
        m.n_features_ = j.at("n_features").get<std::size_t>();
        for (const auto& nj : j.at("nodes")) {
            Node n;
            n.leaf = nj.at("leaf").get<bool>();
            n.feature = nj.at("feature").get<std::size_t>();
            n.threshold = nj.at("threshold").get<double>();
            n.p1 = nj.at("p1").get<double>();
            n.left = nj.at("left").get<std::int32_t>();
            n.right = nj.at("right").get<std::int32_t>();
            m.nodes_.push_back(n);
        }
        return m;
    }

    const std::vector<Node>& nodes() const { return nodes_; }

  private:
    double leaf_p1(std::span<const double> x) const {
        std::size_t at = 0;
        while (!nodes_[at].leaf) at = x[nodes_[at].feature] <= nodes_[at].threshold
                                          ? std::size_t(nodes_[at].left)
                                          : std::size_t(nodes_[at].right);
        return nodes_[at].p1;
    }

    std::int32_t build(const Matrix& X, std::span<const int> y, const std::vector<double>& w,
                       std::vector<std::size_t>& rows, std::size_t depth) {
        auto weight_of = [&](std::size_t r) { return w.empty() ? 1.0 : w[r]; };
        double w1 = 0.0, wt = 0.0;
        for (auto r : rows) {
            wt += weight_of(r);
            if (y[r]) w1 += weight_of(r);
        }

        Node node;
        node.p1 = wt > 0.0 ? w1 / wt : 0.0;

        bool pure = w1 == 0.0 || w1 == wt;
        bool depth_ok = params_.max_depth == 0 || depth <= params_.max_depth;
        if (!pure && depth_ok && rows.size() >= 2 * params_.min_leaf) {
            auto split = best_split(X, y, w, rows);
            if (split.valid) {
                node.leaf = false;
                node.feature = split.feature;
                node.threshold = split.threshold;
                std::vector<std::size_t> left, right;
                for (auto r : rows) (X.at(r, split.feature) <= split.threshold ? left : right).push_back(r);
                rows.clear();
                rows.shrink_to_fit();
                std::int32_t self = alloc(node);
                std::int32_t l = build(X, y, w, left, depth + 1);
                std::int32_t r = build(X, y, w, right, depth + 1);
                nodes_[self].left = l;
                nodes_[self].right = r;
                return self;
            }
        }
        return alloc(node);
    }

    struct Split {
        bool valid = false;
        std::size_t feature = 0;
        double threshold = 0.0;
        double impurity = 0.0;
    };

    Split best_split(const Matrix& X, std::span<const int> y, const std::vector<double>& w,
                     const std::vector<std::size_t>& rows) const {
        auto weight_of = [&](std::size_t r) { return w.empty() ? 1.0 : w[r]; };
        Split best;
        std::vector<std::pair<double, std::size_t>> vals(rows.size());
        for (std::size_t f = 0; f < X.cols(); ++f) {
            for (std::size_t i = 0; i < rows.size(); ++i) vals[i] = {X.at(rows[i], f), rows[i]};
            std::sort(vals.begin(), vals.end());
            double totw = 0.0, tot1 = 0.0;
            for (auto [v, r] : vals) {
                totw += weight_of(r);
                tot1 += y[r] ? weight_of(r) : 0.0;
            }
            double lw = 0.0, l1 = 0.0;
            std::size_t nl = 0;
            for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
                lw += weight_of(vals[i].second);
                l1 += y[vals[i].second] ? weight_of(vals[i].second) : 0.0;
                ++nl;
                if (vals[i].first == vals[i + 1].first) continue;
                if (nl < params_.min_leaf || vals.size() - nl < params_.min_leaf) continue;
                double rw = totw - lw, r1 = tot1 - l1;
                double gini_l = lw > 0.0 ? 2.0 * (l1 / lw) * (1.0 - l1 / lw) : 0.0;
                double gini_r = rw > 0.0 ? 2.0 * (r1 / rw) * (1.0 - r1 / rw) : 0.0;
                double imp = lw * gini_l + rw * gini_r;
                if (!best.valid || imp < best.impurity) {
                    best.valid = true;
                    best.feature = f;
                    best.threshold = vals[i].first + 0.5 * (vals[i + 1].first - vals[i].first);
                    best.impurity = imp;
                }
            }
        }
        return best;
    }

    std::int32_t alloc(const Node& n) {
        nodes_.push_back(n);
        return std::int32_t(nodes_.size() - 1);
    }

    std::vector<Node> nodes_;
    std::size_t n_features_ = 0;
    TreeParams params_;
};

}  // namespace fairens
