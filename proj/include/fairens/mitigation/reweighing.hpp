#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "fairens/core.hpp"

namespace fairens {

/// Kamiran-Calders reweighing: weight each (group, label) cell by
/// P(g)P(l)/P(g,l) so the weighted favorable rate is equal across groups.
struct ReweighingWeights {
    // cell weights indexed [group][label]
    double w[2][2] = {{1.0, 1.0}, {1.0, 1.0}};
    std::vector<double> per_row;
    std::vector<std::string> warnings;

    double cell(int group, int label) const { return w[group ? 1 : 0][label ? 1 : 0]; }
};

inline ReweighingWeights reweigh(std::span<const int> y, std::span<const int> g) {
    if (y.size() != g.size() || y.empty()) throw DataError("reweigh: label/group length mismatch");
    ReweighingWeights rw;
    double n = double(y.size());
    double count[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t i = 0; i < y.size(); ++i) count[g[i] ? 1 : 0][y[i] ? 1 : 0] += 1.0;
    double n_grp[2] = {count[0][0] + count[0][1], count[1][0] + count[1][1]};
    double n_lab[2] = {count[0][0] + count[1][0], count[0][1] + count[1][1]};
    for (int gg = 0; gg < 2; ++gg) {
        for (int ll = 0; ll < 2; ++ll) {
            if (count[gg][ll] == 0.0) {
                rw.w[gg][ll] = 1.0;
                rw.warnings.push_back("empty (group=" + std::to_string(gg) + ", label=" +
                                      std::to_string(ll) + ") cell; weight left at 1");
            } else {
                rw.w[gg][ll] = n_grp[gg] * n_lab[ll] / (n * count[gg][ll]);
            }
        }
    }
    rw.per_row.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) rw.per_row[i] = rw.cell(g[i], y[i]);
    return rw;
}

}  // namespace fairens
