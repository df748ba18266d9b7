#pragma once

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairens/core.hpp"

namespace fairens {

/// Immutable fitted estimator. predict defaults to the argmax of
/// predict_proba with ties resolved to the unfavorable class, which keeps
/// predict and predict_proba consistent by construction.
class ModelBase {
  public:
    virtual ~ModelBase() = default;

    virtual std::string kind() const = 0;
    virtual bool supports_proba() const { return true; }
    virtual bool supports_weights() const = 0;
    virtual std::size_t n_features() const = 0;

    virtual Matrix predict_proba(const Matrix& X) const = 0;

    virtual std::vector<int> predict(const Matrix& X) const {
        Matrix p = predict_proba(X);
        std::vector<int> out(p.rows());
        for (std::size_t i = 0; i < p.rows(); ++i) out[i] = p.at(i, 1) > p.at(i, 0) ? 1 : 0;
        return out;
    }

    virtual nlohmann::json params_json() const = 0;

    void check_width(const Matrix& X) const {
        if (X.cols() != n_features())
            throw DataError(kind() + ": predict width " + std::to_string(X.cols()) +
                            " does not match training width " + std::to_string(n_features()));
    }
};

struct TrainingMeta {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::uint64_t seed = 0;
    double fit_seconds = 0.0;
    std::vector<std::string> warnings;
};

namespace detail {

// Shared weight plumbing: normalizes to mean 1 so weight scaling cannot move
// an optimum; exactly-uniform weights collapse to the unweighted code path.
inline std::vector<double> normalize_weights(std::span<const double> weights, std::size_t n) {
    if (weights.empty()) return {};
    if (weights.size() != n) throw DataError("weights length does not match row count");
    double total = 0.0;
    bool uniform = true;
    for (double w : weights) {
        if (w < 0.0) throw DataError("negative sample weight");
        total += w;
        uniform = uniform && w == weights[0];
    }
    if (total <= 0.0) throw DataError("zero total sample weight");
    if (uniform) return {};
    std::vector<double> out(weights.begin(), weights.end());
    double scale = double(n) / total;
    for (double& w : out) w *= scale;
    return out;
}

inline double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

inline double clamped_log_odds(double p) {
    p = std::min(1.0 - 1e-9, std::max(1e-9, p));
    return std::log(p / (1.0 - p));
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace detail

}  // namespace fairens
