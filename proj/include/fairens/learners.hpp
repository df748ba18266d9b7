#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <string>

#include "fairens/learners/boosted.hpp"
#include "fairens/learners/dummy.hpp"
#include "fairens/learners/knn.hpp"
#include "fairens/learners/logistic.hpp"
#include "fairens/learners/model.hpp"
#include "fairens/learners/tree.hpp"

namespace fairens {

enum class LearnerKind { Tree, Logistic, Knn, Gbt, Dummy };

inline std::string learner_kind_name(LearnerKind k) {
    switch (k) {
        case LearnerKind::Tree: return "tree";
        case LearnerKind::Logistic: return "logreg";
        case LearnerKind::Knn: return "knn";
        case LearnerKind::Gbt: return "gbt";
        case LearnerKind::Dummy: return "dummy";
    }
    throw ConfigError("unknown learner kind");
}

inline LearnerKind learner_kind_from_name(const std::string& name) {
    if (name == "tree") return LearnerKind::Tree;
    if (name == "logreg") return LearnerKind::Logistic;
    if (name == "knn") return LearnerKind::Knn;
    if (name == "gbt") return LearnerKind::Gbt;
    if (name == "dummy") return LearnerKind::Dummy;
    throw ConfigError("unknown learner: " + name);
}

/// A learner kind plus validated hyperparameters. Unknown keys and
/// out-of-range values are rejected at construction.
struct LearnerSpec {
    LearnerKind kind = LearnerKind::Tree;
    std::map<std::string, double> hyper;  // ordered: canonical text is stable
    std::uint64_t seed = 0;

    static LearnerSpec make(LearnerKind kind, std::map<std::string, double> hyper = {},
                            std::uint64_t seed = 0) {
        LearnerSpec s{kind, std::move(hyper), seed};
        s.validate();
        return s;
    }

    static LearnerSpec parse_name(const std::string& name, std::map<std::string, double> hyper = {}) {
        return make(learner_kind_from_name(name), std::move(hyper));
    }

    double get(const std::string& key, double fallback) const {
        auto it = hyper.find(key);
        return it == hyper.end() ? fallback : it->second;
    }

    void validate() const {
        auto require = [&](const std::string& key, double lo, double hi) {
            auto it = hyper.find(key);
            if (it == hyper.end()) return;
            if (it->second < lo || it->second > hi)
                throw ConfigError(learner_kind_name(kind) + ": hyperparameter " + key + "=" +
                                  format_double(it->second) + " outside [" + format_double(lo) + ", " +
                                  format_double(hi) + "]");
        };
        std::vector<std::string> allowed;
        switch (kind) {
            case LearnerKind::Tree:
                allowed = {"max_depth", "min_leaf"};
                require("max_depth", 0, 64);
                require("min_leaf", 1, 1e9);
                break;
            case LearnerKind::Logistic:
                allowed = {"l2", "lr", "iters"};
                require("l2", 0, 1e9);
                require("lr", 1e-9, 1e3);
                require("iters", 0, 1e9);
                break;
            case LearnerKind::Knn:
                allowed = {"k"};
                require("k", 1, 1e9);
                break;
            case LearnerKind::Gbt:
                allowed = {"rounds", "lr", "depth"};
                require("rounds", 1, 1e6);
                require("lr", 1e-9, 1.0);
                require("depth", 1, 16);
                break;
            case LearnerKind::Dummy:
                allowed = {"label"};
                require("label", 0, 1);
                break;
        }
        for (const auto& [key, _] : hyper)
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
                throw ConfigError(learner_kind_name(kind) + ": unknown hyperparameter " + key);
    }

    std::string text() const {
        std::string s = learner_kind_name(kind);
        if (!hyper.empty()) {
            s += "(";
            bool first = true;
            for (const auto& [key, value] : hyper) {
                if (!first) s += ",";
                first = false;
                s += key + "=" + format_double(value);
            }
            s += ")";
        }
        return s;
    }
};

/// Shared-ownership handle to a fitted model plus training metadata.
class TrainedModel {
  public:
    TrainedModel() = default;
    TrainedModel(std::shared_ptr<const ModelBase> impl, TrainingMeta meta)
        : impl_(std::move(impl)), meta_(std::move(meta)) {}

    const ModelBase& model() const {
        if (!impl_) throw DataError("empty model handle");
        return *impl_;
    }
    const TrainingMeta& meta() const { return meta_; }

    std::vector<int> predict(const Matrix& X) const { return model().predict(X); }
    Matrix predict_proba(const Matrix& X) const {
        if (!model().supports_proba())
            throw DataError(model().kind() + " does not support probability outputs");
        return model().predict_proba(X);
    }
    bool supports_proba() const { return model().supports_proba(); }
    bool supports_weights() const { return model().supports_weights(); }

    nlohmann::json to_json() const {
        return {{"format", "fairens-model/1"},
                {"kind", model().kind()},
                {"params", model().params_json()},
                {"meta",
                 {{"n_rows", meta_.n_rows},
                  {"n_cols", meta_.n_cols},
                  {"seed", meta_.seed},
                  {"fit_seconds", meta_.fit_seconds}}}};
    }

    static TrainedModel from_json(const nlohmann::json& j) {
        if (j.at("format").get<std::string>() != "fairens-model/1")
            throw ConfigError("unsupported model document format");
        const auto& p = j.at("params");
        std::string kind = j.at("kind").get<std::string>();
        std::shared_ptr<const ModelBase> impl;
        if (kind == "tree") impl = std::make_shared<DecisionTreeModel>(DecisionTreeModel::from_json(p));
        else if (kind == "logreg") impl = std::make_shared<LogisticModel>(LogisticModel::from_json(p));
        else if (kind == "knn") impl = std::make_shared<KnnModel>(KnnModel::from_json(p));
        else if (kind == "gbt") impl = std::make_shared<GbtModel>(GbtModel::from_json(p));
        else if (kind == "dummy") impl = std::make_shared<DummyModel>(DummyModel::from_json(p));
        else throw ConfigError("unknown model kind in document: " + kind);
        TrainingMeta meta;
        meta.n_rows = j.at("meta").at("n_rows").get<std::size_t>();
        meta.n_cols = j.at("meta").at("n_cols").get<std::size_t>();
        meta.seed = j.at("meta").at("seed").get<std::uint64_t>();
        meta.fit_seconds = j.at("meta").at("fit_seconds").get<double>();
        return TrainedModel(std::move(impl), std::move(meta));
    }

  private:
    std::shared_ptr<const ModelBase> impl_;
    TrainingMeta meta_;
};

/// Fit a learner. Deterministic for fixed (spec, data, weights); a
/// single-class target degenerates to a constant predictor with a warning.
inline TrainedModel fit_learner(const LearnerSpec& spec, const Matrix& X, std::span<const int> y,
                                std::span<const double> weights = {}) {
    spec.validate();
    if (y.size() != X.rows()) throw DataError("fit: label length mismatch");
    if (y.empty()) throw DataError("fit: empty training data");

    TrainingMeta meta;
    meta.n_rows = X.rows();
    meta.n_cols = X.cols();
    meta.seed = spec.seed;
    bool single_class =
        std::all_of(y.begin(), y.end(), [&](int v) { return v == y.front(); });
    if (single_class) meta.warnings.push_back("single-class target; model degenerates to a constant predictor");

    auto started = std::chrono::steady_clock::now();
    std::shared_ptr<const ModelBase> impl;
    switch (spec.kind) {
        case LearnerKind::Tree: {
            TreeParams p{std::size_t(spec.get("max_depth", 0)), std::size_t(spec.get("min_leaf", 1))};
            impl = std::make_shared<DecisionTreeModel>(DecisionTreeModel::fit(X, y, weights, p));
            break;
        }
        case LearnerKind::Logistic: {
            LogisticParams p{spec.get("l2", 1e-4), spec.get("lr", 0.5), std::size_t(spec.get("iters", 500))};
            if (single_class) p.max_iters = 0;  // intercept-only constant model
            impl = std::make_shared<LogisticModel>(LogisticModel::fit(X, y, weights, p));
            break;
        }
        case LearnerKind::Knn: {
            KnnParams p{std::size_t(spec.get("k", 5))};
            impl = std::make_shared<KnnModel>(KnnModel::fit(X, y, weights, p));
            break;
        }
        case LearnerKind::Gbt: {
            GbtParams p{std::size_t(spec.get("rounds", 50)), spec.get("lr", 0.1),
                        std::size_t(spec.get("depth", 3))};
            impl = std::make_shared<GbtModel>(GbtModel::fit(X, y, weights, p));
            break;
        }
        case LearnerKind::Dummy: {
            impl = std::make_shared<DummyModel>(DummyModel::fit(X, int(spec.get("label", 1))));
            break;
        }
    }
    meta.fit_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return TrainedModel(std::move(impl), std::move(meta));
}

}  // namespace fairens
