#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "fairens/core.hpp"

namespace fairens {

/// Feldman-style disparate impact remover. Per numeric feature it stores the
/// per-group empirical quantile functions from the fit data; repairing maps
/// a value through its own group's CDF into the median (midpoint, for two
/// groups) quantile function, interpolating with the original value by the
/// repair level. Group-conditional rank order is preserved for every lambda.
class RepairModel {
  public:
    static RepairModel fit(const Matrix& X, std::span<const int> g, double lambda,
                           std::span<const std::size_t> columns) {
        if (lambda < 0.0 || lambda > 1.0) throw DataError("repair: lambda outside [0,1]");
        if (g.size() != X.rows()) throw DataError("repair: group length mismatch");
        RepairModel m;
        m.lambda_ = lambda;
        m.columns_.assign(columns.begin(), columns.end());
        m.sorted_[0].resize(m.columns_.size());
        m.sorted_[1].resize(m.columns_.size());
        std::size_t n_grp[2] = {0, 0};
        for (int v : g) ++n_grp[v ? 1 : 0];
        if (n_grp[0] == 0 || n_grp[1] == 0) throw DataError("repair: a group has zero rows");
        for (std::size_t c = 0; c < m.columns_.size(); ++c) {
            for (std::size_t i = 0; i < X.rows(); ++i)
                m.sorted_[g[i] ? 1 : 0][c].push_back(X.at(i, m.columns_[c]));
            std::sort(m.sorted_[0][c].begin(), m.sorted_[0][c].end());
            std::sort(m.sorted_[1][c].begin(), m.sorted_[1][c].end());
        }
        return m;
    }

    double lambda() const { return lambda_; }
    const std::vector<std::size_t>& columns() const { return columns_; }

    /// Repair the configured columns in place; all other columns pass
    /// through untouched. lambda = 0 short-circuits to the bit identity.
    Matrix apply(const Matrix& X, std::span<const int> g) const {
        Matrix out = X;
        if (lambda_ == 0.0) return out;
        if (g.size() != X.rows()) throw DataError("repair apply: group length mismatch");
        for (std::size_t c = 0; c < columns_.size(); ++c) {
            for (std::size_t i = 0; i < X.rows(); ++i) {
                double x = X.at(i, columns_[c]);
                double u = cdf(sorted_[g[i] ? 1 : 0][c], x);
                double target = 0.5 * (quantile(sorted_[0][c], u) + quantile(sorted_[1][c], u));
                out.at(i, columns_[c]) = (1.0 - lambda_) * x + lambda_ * target;
            }
        }
        return out;
    }

    // interpolated empirical CDF position in [0,1]
    static double cdf(const std::vector<double>& sorted, double x) {
        std::size_t m = sorted.size();
        if (m == 1) return 0.5;
        if (x <= sorted.front()) return 0.0;
        if (x >= sorted.back()) return 1.0;
        std::size_t hi = std::size_t(std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
        std::size_t lo = hi - 1;
        double span = sorted[hi] - sorted[lo];
        double frac = span > 0.0 ? (x - sorted[lo]) / span : 0.0;
        return (double(lo) + frac) / double(m - 1);
    }

    // interpolated order statistic at position u in [0,1]
    static double quantile(const std::vector<double>& sorted, double u) {
        std::size_t m = sorted.size();
        if (m == 1) return sorted.front();
        double pos = std::clamp(u, 0.0, 1.0) * double(m - 1);
        std::size_t lo = std::size_t(pos);
        if (lo >= m - 1) return sorted.back();
        double frac = pos - double(lo);
        return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
    }

  private:
    double lambda_ = 1.0;
    std::vector<std::size_t> columns_;
    std::vector<std::vector<double>> sorted_[2];  // [group][column] -> sorted fit values
};

}  // namespace fairens
