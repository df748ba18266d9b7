#pragma once

#include <cmath>
#include <vector>

#include "fairens/core.hpp"
#include "fairens/learners/logistic.hpp"
#include "fairens/learners/model.hpp"

namespace fairens {

struct PrejudiceParams {
    double eta = 1.0;  // fairness penalty strength
    double l2 = 1e-4;
    std::size_t max_iters = 500;
};

namespace detail {

// Smoothed plug-in mutual information between the model's soft outcome and
// the group, from the expected 2x2 table: cell(outcome a, group b) sums the
// predicted probabilities, plus 0.5 Laplace smoothing per cell. The soft
// counts keep the penalty differentiable.
inline double prejudice_index(const Matrix& X, std::span<const int> g, std::span<const double> theta,
                              std::span<double> grad_accum, double eta) {
    const std::size_t n = X.rows(), d = X.cols();
    double c[2][2] = {{0.5, 0.5}, {0.5, 0.5}};  // [outcome][group]
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) {
        double z = theta[0];
        auto xi = X.row(i);
        for (std::size_t j = 0; j < d; ++j) z += theta[j + 1] * xi[j];
        p[i] = sigmoid(z);
        c[1][g[i] ? 1 : 0] += p[i];
        c[0][g[i] ? 1 : 0] += 1.0 - p[i];
    }
    double total = double(n) + 2.0;
    double mi = 0.0;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            double pab = c[a][b] / total;
            double pa = (c[a][0] + c[a][1]) / total;
            double pb = (c[0][b] + c[1][b]) / total;
            mi += pab * std::log(pab / (pa * pb));
        }
    }
    if (!grad_accum.empty()) {
        // dMI/dc[a][b] = (log(p_ab/(p_a p_b)) - 1)/total; the -1 cancels in
        // the (outcome 1) - (outcome 0) difference below
        double coef[2];
        for (int b = 0; b < 2; ++b) {
            double p1b = c[1][b] / total, p0b = c[0][b] / total;
            double p1 = (c[1][0] + c[1][1]) / total, p0 = (c[0][0] + c[0][1]) / total;
            coef[b] = (std::log(p1b / p1) - std::log(p0b / p0)) / total;
        }
        for (std::size_t i = 0; i < n; ++i) {
            double s = eta * coef[g[i] ? 1 : 0] * p[i] * (1.0 - p[i]);
            grad_accum[0] += s;
            auto xi = X.row(i);
            for (std::size_t j = 0; j < d; ++j) grad_accum[j + 1] += s * xi[j];
        }
    }
    return mi;
}

inline double prejudice_loss_grad(const Matrix& X, std::span<const int> y, std::span<const int> g,
                                  const std::vector<double>& w, const PrejudiceParams& params,
                                  std::span<const double> theta, std::span<double> grad) {
    double loss = logistic_loss_grad(X, y, w, params.l2, theta, grad);
    double mi = prejudice_index(X, g, theta, grad, params.eta);
    return loss + params.eta * mi;
}

}  // namespace detail

/// Kamishima-style prejudice remover: regularized logistic regression whose
/// objective adds eta times the prejudice index. eta = 0 reduces exactly to
/// the plain logistic objective. The group vector is needed at fit time
/// only; prediction is ordinary logistic scoring.
class PrejudiceRemoverModel final : public ModelBase {
  public:
    static PrejudiceRemoverModel fit(const Matrix& X, std::span<const int> y, std::span<const int> g,
                                     const PrejudiceParams& params, std::uint64_t seed,
                                     std::span<const double> weights = {}) {
        if (params.eta < 0.0) throw DataError("prejudice remover: eta must be nonnegative");
        if (y.size() != X.rows() || g.size() != X.rows())
            throw DataError("prejudice remover: length mismatch");
        PrejudiceRemoverModel m;
        m.params_ = params;
        m.seed_ = seed;
        std::vector<double> w = detail::normalize_weights(weights, X.rows());

        double wpos = 0.0, wtot = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            double wi = w.empty() ? 1.0 : w[i];
            wtot += wi;
            if (y[i]) wpos += wi;
        }
        std::vector<double> theta(X.cols() + 1, 0.0);
        theta[0] = detail::clamped_log_odds(wpos / wtot);

        GdProblem prob{[&](std::span<const double> t, std::span<double> grad) {
            return detail::prejudice_loss_grad(X, y, g, w, params, t, grad);
        }};
        auto res = gradient_descent(prob, std::move(theta), 0.5, params.max_iters);
        m.theta_ = std::move(res.x);
        return m;
    }

    std::string kind() const override { return "pr"; }
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

    nlohmann::json params_json() const override {
        return {{"theta", theta_}, {"eta", params_.eta}, {"l2", params_.l2}};
    }

    static PrejudiceRemoverModel from_json(const nlohmann::json& j) {
        PrejudiceRemoverModel m;
        m.theta_ = j.at("theta").get<std::vector<double>>();
        m.params_.eta = j.at("eta").get<double>();
        m.params_.l2 = j.at("l2").get<double>();
        return m;
    }

    const std::vector<double>& coefficients() const { return theta_; }

  private:
    std::vector<double> theta_;
    PrejudiceParams params_;
    std::uint64_t seed_ = 0;
};

}  // namespace fairens
