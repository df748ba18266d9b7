#pragma once

#include <algorithm>
#include <vector>

#include "fairens/learners/model.hpp"

namespace fairens {

struct KnnParams {
    std::size_t k = 5;
};

/// k-nearest-neighbors with Euclidean distance. Distance ties break on the
/// lower training-row index; probabilities are the (weighted) vote fractions
/// among the k neighbors.
class KnnModel final : public ModelBase {
  public:
    static KnnModel fit(const Matrix& X, std::span<const int> y, std::span<const double> weights,
                        const KnnParams& params) {
        if (y.size() != X.rows()) throw DataError("knn fit: label length mismatch");
        if (params.k < 1) throw DataError("knn fit: k must be positive");
        KnnModel m;
        m.k_ = std::min(params.k, X.rows());
        m.X_ = X;
        m.y_.assign(y.begin(), y.end());
        m.w_ = detail::normalize_weights(weights, X.rows());
        return m;
    }

    std::string kind() const override { return "knn"; }
    bool supports_weights() const override { return true; }
    std::size_t n_features() const override { return X_.cols(); }

    Matrix predict_proba(const Matrix& X) const override {
        check_width(X);
        Matrix out(X.rows(), 2);
        std::vector<std::pair<double, std::size_t>> dist(X_.rows());
        for (std::size_t i = 0; i < X.rows(); ++i) {
            auto q = X.row(i);
            for (std::size_t t = 0; t < X_.rows(); ++t) {
                auto r = X_.row(t);
                double d2 = 0.0;
                for (std::size_t j = 0; j < q.size(); ++j) {
                    double diff = q[j] - r[j];
                    d2 += diff * diff;
                }
                dist[t] = {d2, t};
            }
            std::partial_sort(dist.begin(), dist.begin() + std::ptrdiff_t(k_), dist.end());
            double v1 = 0.0, vt = 0.0;
            for (std::size_t t = 0; t < k_; ++t) {
                std::size_t r = dist[t].second;
                double w = w_.empty() ? 1.0 : w_[r];
                vt += w;
                if (y_[r]) v1 += w;
            }
            double p1 = vt > 0.0 ? v1 / vt : 0.0;
            out.at(i, 0) = 1.0 - p1;
            out.at(i, 1) = p1;
        }
        return out;
    }

    nlohmann::json params_json() const override {
        return {{"k", k_},
                {"X", X_.raw()},
                {"rows", X_.rows()},
                {"cols", X_.cols()},
                {"y", y_},
                {"weights", w_}};
    }

    static KnnModel from_json(const nlohmann::json& j) {
        KnnModel m;
        m.k_ = j.at("k").get<std::size_t>();
        m.X_ = Matrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
        m.X_.raw() = j.at("X").get<std::vector<double>>();
        m.y_ = j.at("y").get<std::vector<int>>();
        m.w_ = j.at("weights").get<std::vector<double>>();
        return m;
    }

  private:
    std::size_t k_ = 5;
    Matrix X_;
    std::vector<int> y_;
    std::vector<double> w_;
};

}  // namespace fairens
