#pragma once

// Independent reference implementations used only by tests. Each oracle is
// written from the definition, not from the library code paths it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace oracle {

// favorable rate per group from raw counting
struct Rates {
    double priv_rate = 0.0, unpriv_rate = 0.0;
    std::size_t n_priv = 0, n_unpriv = 0;
};

inline Rates count_rates(std::span<const int> pred, std::span<const int> g) {
    Rates r;
    std::size_t fav_p = 0, fav_u = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (g[i]) {
            ++r.n_priv;
            fav_p += pred[i] ? 1 : 0;
        } else {
            ++r.n_unpriv;
            fav_u += pred[i] ? 1 : 0;
        }
    }
    if (r.n_priv) r.priv_rate = double(fav_p) / double(r.n_priv);
    if (r.n_unpriv) r.unpriv_rate = double(fav_u) / double(r.n_unpriv);
    return r;
}

inline std::optional<double> di(std::span<const int> pred, std::span<const int> g) {
    Rates r = count_rates(pred, g);
    if (r.n_priv == 0 || r.n_unpriv == 0) return std::nullopt;
    if (r.priv_rate == 0.0) return r.unpriv_rate == 0.0 ? std::optional<double>(1.0) : std::nullopt;
    return r.unpriv_rate / r.priv_rate;
}

// Exact rational check that reweighing equalizes the favorable rate.
// Kamiran-Calders weights are rationals n_g*n_l/(n*n_gl); with integer cell
// counts the weighted rates are rationals too, so DI == 1 can be tested
// without floating point at all.
inline bool reweighed_di_is_exactly_one(const std::vector<int>& y, const std::vector<int>& g) {
    long long c[2][2] = {{0, 0}, {0, 0}};  // [group][label]
    for (std::size_t i = 0; i < y.size(); ++i) ++c[g[i] ? 1 : 0][y[i] ? 1 : 0];
    long long n = (long long)y.size();
    long long n_grp[2] = {c[0][0] + c[0][1], c[1][0] + c[1][1]};
    long long n_lab[2] = {c[0][0] + c[1][0], c[0][1] + c[1][1]};
    // weight(g,l) = n_grp[g]*n_lab[l] / (n*c[g][l]); cell sum of weights:
    // c[g][l]*weight(g,l) = n_grp[g]*n_lab[l]/n  (weight 1 for empty cells)
    auto cell_mass = [&](int gg, int ll) -> __int128 {
        if (c[gg][ll] == 0) return 0;  // empty cell contributes nothing either way
        return (__int128)n_grp[gg] * n_lab[ll];
    };
    // rates carry a common 1/n factor that cancels in the cross product
    __int128 fav[2] = {cell_mass(0, 1), cell_mass(1, 1)};
    __int128 tot[2] = {cell_mass(0, 0) + cell_mass(0, 1), cell_mass(1, 0) + cell_mass(1, 1)};
    // rate_u == rate_p  <=>  fav_u * tot_p == fav_p * tot_u
    return fav[0] * tot[1] == fav[1] * tot[0];
}

// quantile repair reference for equal-sized groups: sort each group's values,
// the repaired i-th order statistic is the mean of the groups' i-th order
// statistics (median of two distributions)
inline std::vector<double> repaired_sorted_values(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = 0.5 * (a[i] + b[i]);
    return out;
}

// central finite differences of a scalar function
inline std::vector<double> finite_difference_gradient(const std::function<double(std::span<const double>)>& f,
                                                      std::vector<double> x, double h = 1e-6) {
    std::vector<double> grad(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double keep = x[i];
        x[i] = keep + h;
        double up = f(x);
        x[i] = keep - h;
        double down = f(x);
        x[i] = keep;
        grad[i] = (up - down) / (2.0 * h);
    }
    return grad;
}

// exhaustive best axis-aligned stump on tiny instances: returns training
// accuracy of the best (feature, threshold, orientation)
inline double best_stump_accuracy(const std::vector<std::vector<double>>& X, const std::vector<int>& y) {
    std::size_t n = X.size(), d = X[0].size();
    double best = 0.0;
    for (std::size_t f = 0; f < d; ++f) {
        std::vector<double> cuts;
        for (const auto& row : X) cuts.push_back(row[f]);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        std::vector<double> thresholds;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) thresholds.push_back(0.5 * (cuts[i] + cuts[i + 1]));
        thresholds.push_back(cuts.empty() ? 0.0 : cuts.back() + 1.0);
        for (double t : thresholds) {
            for (int orient = 0; orient < 2; ++orient) {
                std::size_t ok = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    int pred = (X[i][f] <= t) == (orient == 0) ? 1 : 0;
                    ok += pred == y[i];
                }
                best = std::max(best, double(ok) / double(n));
            }
        }
    }
    return best;
}

}  // namespace oracle
