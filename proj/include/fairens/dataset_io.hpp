#pragma once

#include <fstream>

#include <nlohmann/json.hpp>

#include "fairens/dataset.hpp"

namespace fairens {

/// Recipe document, fields matching DatasetRecipe:
/// {
///   "name": ..., "target": ..., "favorable": ...,
///   "protected": [{"column": ..., "privileged_values": [...] |
///                  "privileged_min": x, "unprivileged_values": [...]}],
///   "categorical": [...], "numeric": [...], "drop": [...],
///   "derive": [{"name": ..., "from": ..., "one_values": [...]}],
///   "scale_numeric": bool
/// }
/// Several protected entries AND together into one privileged-group vector.
inline DatasetRecipe recipe_from_json(const nlohmann::json& j) {
    DatasetRecipe r;
    r.name = j.value("name", "");
    r.target = j.at("target").get<std::string>();
    if (j.at("favorable").is_string()) r.favorable = j.at("favorable").get<std::string>();
    else r.favorable = j.at("favorable").dump();
    for (const auto& p : j.at("protected")) {
        ProtectedSpec spec;
        spec.column = p.at("column").get<std::string>();
        if (p.contains("privileged_values"))
            spec.privileged_values = p.at("privileged_values").get<std::vector<std::string>>();
        if (p.contains("privileged_min")) spec.privileged_min = p.at("privileged_min").get<double>();
        if (p.contains("unprivileged_values"))
            spec.unprivileged_values = p.at("unprivileged_values").get<std::vector<std::string>>();
        if (spec.privileged_values.empty() && !spec.privileged_min)
            throw ConfigError("protected attribute " + spec.column +
                              " needs privileged_values or privileged_min");
        r.protected_attrs.push_back(std::move(spec));
    }
    if (j.contains("categorical"))
        for (const auto& c : j.at("categorical")) r.categorical.insert(c.get<std::string>());
    if (j.contains("numeric"))
        for (const auto& c : j.at("numeric")) r.numeric.insert(c.get<std::string>());
    if (j.contains("drop"))
        for (const auto& c : j.at("drop")) r.drop.insert(c.get<std::string>());
    if (j.contains("derive")) {
        for (const auto& d : j.at("derive")) {
            DeriveSpec spec;
            spec.name = d.at("name").get<std::string>();
            spec.from = d.at("from").get<std::string>();
            spec.one_values = d.at("one_values").get<std::vector<std::string>>();
            r.derive.push_back(std::move(spec));
        }
    }
    r.scale_numeric = j.value("scale_numeric", false);
    r.check();
    return r;
}

inline DatasetRecipe load_recipe(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open recipe: " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("recipe is not valid JSON: " + path);
    try {
        return recipe_from_json(j);
    } catch (const nlohmann::json::exception& err) {
        throw ConfigError(path + ": " + err.what());
    }
}

/// Sidecar metadata for an encoded dataset cache.
inline nlohmann::ordered_json dataset_meta_json(const Dataset& ds, const std::string& favorable,
                                                const std::vector<std::string>& protected_names) {
    nlohmann::ordered_json j;
    j["name"] = ds.name;
    j["n_rows"] = ds.n_rows();
    j["n_cols"] = ds.n_cols();
    j["favorable_value"] = favorable;
    j["protected"] = protected_names;
    auto di = ds.baseline_di();
    if (di.defined) j["baseline_di"] = di.value;
    else j["baseline_di"] = nullptr;
    j["scale_numeric"] = ds.scale_numeric;
    j["numeric_columns"] = ds.numeric_columns;
    j["protected_columns"] = ds.protected_columns;
    j["feature_names"] = ds.feature_names;
    j["dropped_rows"] = ds.dropped_rows;
    j["warnings"] = ds.warnings;
    return j;
}

/// Write the encoded matrix as CSV (features then __label__, __group__)
/// plus the metadata sidecar.
inline void write_dataset_cache(const Dataset& ds, const std::string& csv_path,
                                const std::string& meta_path, const std::string& favorable = "",
                                const std::vector<std::string>& protected_names = {}) {
    std::ofstream csv(csv_path);
    if (!csv) throw DataError("cannot write dataset cache: " + csv_path);
    for (const auto& name : ds.feature_names) csv << csv_quote(name) << ",";
    csv << "__label__,__group__\n";
    for (std::size_t i = 0; i < ds.n_rows(); ++i) {
        for (std::size_t c = 0; c < ds.n_cols(); ++c) csv << format_double(ds.X.at(i, c)) << ",";
        csv << ds.y[i] << "," << ds.g[i] << "\n";
    }
    std::ofstream meta(meta_path);
    if (!meta) throw DataError("cannot write dataset metadata: " + meta_path);
    meta << dataset_meta_json(ds, favorable, protected_names).dump(2) << "\n";
}

inline Dataset load_dataset_cache(const std::string& csv_path, const std::string& meta_path) {
    std::ifstream meta_in(meta_path);
    if (!meta_in) throw DataError("cannot open dataset metadata: " + meta_path);
    nlohmann::json meta = nlohmann::json::parse(meta_in);

    RawTable t = load_csv(csv_path, true);
    if (t.n_cols() < 3) throw DataError("dataset cache is missing label/group columns");
    std::size_t label_col = t.column_index("__label__");
    std::size_t group_col = t.column_index("__group__");

    Dataset ds;
    ds.name = meta.at("name").get<std::string>();
    ds.feature_names = meta.at("feature_names").get<std::vector<std::string>>();
    ds.numeric_columns = meta.at("numeric_columns").get<std::vector<std::size_t>>();
    if (meta.contains("protected_columns"))
        ds.protected_columns = meta.at("protected_columns").get<std::vector<std::size_t>>();
    ds.scale_numeric = meta.at("scale_numeric").get<bool>();
    ds.X = Matrix(t.n_rows(), ds.feature_names.size());
    for (std::size_t i = 0; i < t.n_rows(); ++i) {
        for (std::size_t c = 0; c < ds.feature_names.size(); ++c) {
            auto v = detail::parse_number(t.cells[i][c]);
            if (!v) throw DataError("dataset cache: non-numeric cell in row " + std::to_string(i + 1));
            ds.X.at(i, c) = *v;
        }
        ds.y.push_back(t.cells[i][label_col] == "1" ? 1 : 0);
        ds.g.push_back(t.cells[i][group_col] == "1" ? 1 : 0);
    }
    ds.check();
    return ds;
}

}  // namespace fairens
