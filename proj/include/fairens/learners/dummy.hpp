#pragma once

#include "fairens/learners/model.hpp"

namespace fairens {

/// Constant-label predictor, the trivial baseline.
class DummyModel final : public ModelBase {
  public:
    static DummyModel fit(const Matrix& X, int constant_label) {
        DummyModel m;
        m.n_features_ = X.cols();
        m.label_ = constant_label ? 1 : 0;
        return m;
    }

    std::string kind() const override { return "dummy"; }
    bool supports_weights() const override { return true; }
    std::size_t n_features() const override { return n_features_; }

    Matrix predict_proba(const Matrix& X) const override {
        check_width(X);
        Matrix out(X.rows(), 2);
        for (std::size_t i = 0; i < X.rows(); ++i) out.at(i, label_) = 1.0;
        return out;
    }

    nlohmann::json params_json() const override { return {{"label", label_}, {"n_features", n_features_}}; }

    static DummyModel from_json(const nlohmann::json& j) {
        DummyModel m;
        m.label_ = j.at("label").get<int>();
        m.n_features_ = j.at("n_features").get<std::size_t>();
        return m;
    }

  private:
    std::size_t n_features_ = 0;
    int label_ = 1;
};

}  // namespace fairens
