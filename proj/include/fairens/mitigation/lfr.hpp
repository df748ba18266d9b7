#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "fairens/core.hpp"
#include "fairens/learners/model.hpp"

namespace fairens {

struct LfrParams {
    std::size_t k = 5;           // prototypes
    double ax = 0.01;            // reconstruction loss coefficient
    double ay = 1.0;             // prediction loss coefficient
    double az = 10.0;            // group parity loss coefficient
    std::size_t max_iters = 200;
    std::size_t restarts = 3;
};

/// Learned fair representations (Zemel-style): k prototypes in feature
/// space with label weights, memberships softmax(-squared distance).
/// Objective ax*L_reconstruction + ay*L_prediction + az*L_parity, fit by
/// restarted gradient descent with backtracking line search, so the
/// objective is non-increasing over accepted steps. The transform emits the
/// k membership probabilities per row.
class LfrModel {
  public:
    static LfrModel fit(const Matrix& X, std::span<const int> y, std::span<const int> g,
                        const LfrParams& params, std::uint64_t seed) {
        if (params.k < 2) throw DataError("lfr: need at least 2 prototypes");
        if (params.ax < 0 || params.ay < 0 || params.az < 0)
            throw DataError("lfr: loss coefficients must be nonnegative");
        if (y.size() != X.rows() || g.size() != X.rows()) throw DataError("lfr: length mismatch");

        LfrModel best;
        best.params_ = params;
        best.d_ = X.cols();
        double best_loss = std::numeric_limits<double>::infinity();
        for (std::size_t restart = 0; restart < std::max<std::size_t>(1, params.restarts); ++restart) {
            Rng rng(derive_seed(seed, {"lfr", std::to_string(restart)}));
            std::vector<double> theta = init_theta(X, params.k, rng);
            GdProblem prob{[&](std::span<const double> t, std::span<double> grad) {
                return loss_grad(X, y, g, params, t, grad);
            }};
            auto res = gradient_descent(prob, std::move(theta), 0.05, params.max_iters, 1e-7);
            if (res.loss < best_loss) {
                best_loss = res.loss;
                best.theta_ = std::move(res.x);
                best.converged_ = res.converged;
                best.final_loss_ = res.loss;
                best.trace_ = std::move(res.trace);
            }
        }
        return best;
    }

    /// n x k membership probabilities (each row sums to 1).
    Matrix transform(const Matrix& X) const {
        if (X.cols() != d_) throw DataError("lfr transform: width mismatch");
        Matrix M(X.rows(), params_.k);
        memberships(X, theta_, params_.k, M);
        return M;
    }

    bool converged() const { return converged_; }
    double final_loss() const { return final_loss_; }
    const std::vector<double>& loss_trace() const { return trace_; }
    std::size_t n_prototypes() const { return params_.k; }
    std::size_t input_width() const { return d_; }

    // objective + analytic gradient over flat theta = [V (k*d), a (k)];
    // prototype label weights are sigmoid(a). Exposed for the
    // finite-difference cross-check in tests.
    static double loss_grad(const Matrix& X, std::span<const int> y, std::span<const int> g,
                            const LfrParams& params, std::span<const double> theta,
                            std::span<double> grad) {
        const std::size_t n = X.rows(), d = X.cols(), k = params.k;
        std::fill(grad.begin(), grad.end(), 0.0);
        auto V = [&](std::size_t j, std::size_t c) { return theta[j * d + c]; };
        auto gV = [&](std::size_t j, std::size_t c) -> double& { return grad[j * d + c]; };

        Matrix M(n, k);
        memberships(X, theta, k, M);

        std::vector<double> w(k);
        for (std::size_t j = 0; j < k; ++j) w[j] = detail::sigmoid(theta[k * d + j]);

        // group mean memberships for the parity term
        std::vector<double> mean_pos(k, 0.0), mean_neg(k, 0.0);
        double n_pos = 0.0, n_neg = 0.0;
        for (std::size_t i = 0; i < n; ++i) (g[i] ? n_pos : n_neg) += 1.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < k; ++j) (g[i] ? mean_pos[j] : mean_neg[j]) += M.at(i, j);
        for (std::size_t j = 0; j < k; ++j) {
            if (n_pos > 0) mean_pos[j] /= n_pos;
            if (n_neg > 0) mean_neg[j] /= n_neg;
        }

        double loss_x = 0.0, loss_y = 0.0, loss_z = 0.0;
        for (std::size_t j = 0; j < k; ++j) loss_z += std::abs(mean_pos[j] - mean_neg[j]);

        // dL/dM, then chain through the softmax into dL/dV and direct terms
        Matrix dM(n, k);
        std::vector<double> xhat(d);
        std::vector<double> dya(k, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            auto xi = X.row(i);
            std::fill(xhat.begin(), xhat.end(), 0.0);
            double yhat = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                double m = M.at(i, j);
                yhat += m * w[j];
                for (std::size_t c = 0; c < d; ++c) xhat[c] += m * V(j, c);
            }
            double rec = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                double diff = xhat[c] - xi[c];
                rec += diff * diff;
            }
            loss_x += rec / double(n);
            double yc = std::clamp(yhat, 1e-9, 1.0 - 1e-9);
            loss_y -= (y[i] ? std::log(yc) : std::log(1.0 - yc)) / double(n);
            double dLdyhat = (y[i] ? -1.0 / yc : 1.0 / (1.0 - yc)) / double(n);

            for (std::size_t j = 0; j < k; ++j) {
                double dm = 0.0;
                // reconstruction path through M
                double dot = 0.0;
                for (std::size_t c = 0; c < d; ++c) dot += (xhat[c] - xi[c]) * V(j, c);
                dm += params.ax * 2.0 * dot / double(n);
                // prediction path
                dm += params.ay * dLdyhat * w[j];
                // parity path
                double sgn = mean_pos[j] > mean_neg[j] ? 1.0 : (mean_pos[j] < mean_neg[j] ? -1.0 : 0.0);
                dm += params.az * sgn * (g[i] ? 1.0 / n_pos : -1.0 / n_neg);
                dM.at(i, j) = dm;
                // direct reconstruction path into V_j
                for (std::size_t c = 0; c < d; ++c)
                    gV(j, c) += params.ax * 2.0 * (xhat[c] - xi[c]) * M.at(i, j) / double(n);
                // label weight path
                dya[j] += params.ay * dLdyhat * M.at(i, j);
            }
            // softmax chain: dL/dD_il = -M_il (dL/dM_il - sum_j dL/dM_ij M_ij)
            double inner = 0.0;
            for (std::size_t j = 0; j < k; ++j) inner += dM.at(i, j) * M.at(i, j);
            for (std::size_t l = 0; l < k; ++l) {
                double dD = -M.at(i, l) * (dM.at(i, l) - inner);
                for (std::size_t c = 0; c < d; ++c) gV(l, c) += dD * 2.0 * (V(l, c) - xi[c]);
            }
        }
        for (std::size_t j = 0; j < k; ++j) {
            double s = w[j];
            grad[k * d + j] = dya[j] * s * (1.0 - s);
        }
        return params.ax * loss_x + params.ay * loss_y + params.az * loss_z;
    }

  private:
    static void memberships(const Matrix& X, std::span<const double> theta, std::size_t k, Matrix& M) {
        const std::size_t d = X.cols();
        std::vector<double> negd(k);
        for (std::size_t i = 0; i < X.rows(); ++i) {
            auto xi = X.row(i);
            double hi = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < k; ++j) {
                double d2 = 0.0;
                for (std::size_t c = 0; c < d; ++c) {
                    double diff = xi[c] - theta[j * d + c];
                    d2 += diff * diff;
                }
                negd[j] = -d2;
                hi = std::max(hi, negd[j]);
            }
            double total = 0.0;
            for (std::size_t j = 0; j < k; ++j) total += std::exp(negd[j] - hi);
            for (std::size_t j = 0; j < k; ++j) M.at(i, j) = std::exp(negd[j] - hi) / total;
        }
    }

    static std::vector<double> init_theta(const Matrix& X, std::size_t k, Rng& rng) {
        std::vector<double> theta(k * X.cols() + k, 0.0);
        std::vector<std::size_t> rows(X.rows());
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
        rng.shuffle(rows);
        for (std::size_t j = 0; j < k; ++j) {
            auto src = X.row(rows[j % X.rows()]);
            for (std::size_t c = 0; c < X.cols(); ++c)
                theta[j * X.cols() + c] = src[c] + 0.01 * rng.normal();
        }
        return theta;
    }

    LfrParams params_;
    std::size_t d_ = 0;
    std::vector<double> theta_;
    bool converged_ = false;
    double final_loss_ = 0.0;
    std::vector<double> trace_;
};

}  // namespace fairens
