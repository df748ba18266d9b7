#pragma once

#include <cmath>
#include <vector>

#include "fairens/learners/model.hpp"

namespace fairens {

struct LogisticParams {
    double l2 = 1e-4;
    double learning_rate = 0.5;  // initial step for the backtracking search
    std::size_t max_iters = 500;
};

namespace detail {

// Mean weighted negative log-likelihood plus 0.5*l2*||coef||^2 (intercept
// unpenalized). theta layout: [intercept, coef...].
inline double logistic_loss_grad(const Matrix& X, std::span<const int> y, const std::vector<double>& w,
                                 double l2, std::span<const double> theta, std::span<double> grad) {
    std::size_t n = X.rows(), d = X.cols();
    std::fill(grad.begin(), grad.end(), 0.0);
    double loss = 0.0, total_w = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double wi = w.empty() ? 1.0 : w[i];
        total_w += wi;
        double z = theta[0];
        auto xi = X.row(i);
        for (std::size_t j = 0; j < d; ++j) z += theta[j + 1] * xi[j];
        double p = sigmoid(z);
        double pc = std::min(1.0 - 1e-12, std::max(1e-12, p));
        loss -= wi * (y[i] ? std::log(pc) : std::log(1.0 - pc));
        double r = wi * (p - (y[i] ? 1.0 : 0.0));
        grad[0] += r;
        for (std::size_t j = 0; j < d; ++j) grad[j + 1] += r * xi[j];
    }
    loss /= total_w;
    for (auto& gv : grad) gv /= total_w;
    for (std::size_t j = 1; j <= d; ++j) {
        loss += 0.5 * l2 * theta[j] * theta[j];
        grad[j] += l2 * theta[j];
    }
    return loss;
}

}  // namespace detail

/// Weighted logistic regression trained by backtracking gradient descent.
/// The intercept starts at the log-odds of the weighted base rate, so zero
/// iterations yields the weighted-majority constant predictor.
class LogisticModel final : public ModelBase {
  public:
    static LogisticModel fit(const Matrix& X, std::span<const int> y, std::span<const double> weights,
                             const LogisticParams& params) {
        if (y.size() != X.rows()) throw DataError("logistic fit: label length mismatch");
        LogisticModel m;
        m.params_ = params;
        std::vector<double> w = detail::normalize_weights(weights, X.rows());

        double wpos = 0.0, wtot = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            double wi = w.empty() ? 1.0 : w[i];
            wtot += wi;
            if (y[i]) wpos += wi;
        }
        std::vector<double> theta(X.cols() + 1, 0.0);
        theta[0] = detail::clamped_log_odds(wpos / wtot);

        if (params.max_iters > 0) {
            GdProblem prob{[&](std::span<const double> t, std::span<double> g) {
                return detail::logistic_loss_grad(X, y, w, params.l2, t, g);
            }};
            auto res = gradient_descent(prob, theta, params.learning_rate, params.max_iters);
            theta = std::move(res.x);
        }
        m.theta_ = std::move(theta);
        return m;
    }

    std::string kind() const override { return "logreg"; }
    bool supports_weights() const override { return true; }
    std::size_t n_features() const override { return theta_.size() - 1; }

    Matrix predict_proba(const Matrix& X) const override {
        check_width(X);
        Matrix out(X.rows(), 2);
        for (std::size_t i = 0; i < X.rows(); ++i) {
            double z = theta_[0];
            auto xi = X.row(i);
            for (std::size_t j = 0; j < xi.size(); ++j) z += theta_[j + 1] * xi[j];
            double p = detail::sigmoid(z);
            out.at(i, 0) = 1.0 - p;
            out.at(i, 1) = p;
        }
        return out;
    }

    nlohmann::json params_json() const override { return {{"theta", theta_}}; }

    static LogisticModel from_json(const nlohmann::json& j) {
        LogisticModel m;
        m.theta_ = j.at("theta").get<std::vector<double>>();
        return m;
    }

    const std::vector<double>& coefficients() const { return theta_; }

  private:
    std::vector<double> theta_;
    LogisticParams params_;
};

}  // namespace fairens
