#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <vector>

#include "fairens/dataset.hpp"
#include "fairens/learners.hpp"
#include "fairens/mitigation.hpp"
#include "fairens/pipeline/expr.hpp"
#include "fairens/pipeline/validate.hpp"

namespace fairens {

struct FitOptions {
    bool bootstrap = true;  // test hook: Bag(e, 1) without bootstrap is e
};

/// One node's view of the training data. The numeric-column set tracks the
/// current feature space (it changes under LFR transforms and stacking
/// meta-features) so quantile repair always knows what it may touch.
struct TrainSlice {
    Matrix X;
    std::vector<int> y;
    std::vector<int> g;
    std::vector<double> weights;  // empty = unweighted
    std::vector<std::size_t> numeric_columns;

    TrainSlice rows(std::span<const std::size_t> idx) const {
        TrainSlice out;
        out.X = X.take_rows(idx);
        out.y = take(y, idx);
        out.g = take(g, idx);
        if (!weights.empty()) out.weights = take(weights, idx);
        out.numeric_columns = numeric_columns;
        return out;
    }
};

// ---------------------------------------------------------------------------
// trained pipeline tree

class TrainedNode {
  public:
    virtual ~TrainedNode() = default;
    virtual std::string name() const = 0;
    virtual bool supports_proba() const = 0;
    virtual bool needs_group() const = 0;
    virtual std::vector<int> labels(const Matrix& X, std::span<const int> g) const = 0;
    virtual Matrix proba(const Matrix& X, std::span<const int> g) const = 0;

  protected:
    void require_group(std::span<const int> g, const Matrix& X) const {
        if (g.size() != X.rows())
            throw DataError("node " + name() + " requires the group vector at prediction time");
    }
};

using TrainedPtr = std::shared_ptr<const TrainedNode>;

namespace detail {

inline std::vector<int> argmax_labels(const Matrix& proba) {
    std::vector<int> out(proba.rows());
    for (std::size_t i = 0; i < proba.rows(); ++i) out[i] = proba.at(i, 1) > proba.at(i, 0) ? 1 : 0;
    return out;
}

class LearnerNode final : public TrainedNode {
  public:
    explicit LearnerNode(TrainedModel model) : model_(std::move(model)) {}
    std::string name() const override { return model_.model().kind(); }
    bool supports_proba() const override { return model_.supports_proba(); }
    bool needs_group() const override { return false; }
    std::vector<int> labels(const Matrix& X, std::span<const int>) const override {
        return model_.predict(X);
    }
    Matrix proba(const Matrix& X, std::span<const int>) const override { return model_.predict_proba(X); }
    const TrainedModel& model() const { return model_; }

  private:
    TrainedModel model_;
};

class PreNode final : public TrainedNode {
  public:
    PreNode(MitigatorSpec spec, std::optional<RepairModel> repair, std::shared_ptr<const LfrModel> lfr,
            TrainedPtr inner)
        : spec_(std::move(spec)), repair_(std::move(repair)), lfr_(std::move(lfr)),
          inner_(std::move(inner)) {}

    std::string name() const override { return "Pr(" + spec_.text() + ")"; }
    bool supports_proba() const override { return inner_->supports_proba(); }
    bool needs_group() const override {
        return spec_.kind == MitigatorKind::Dir || inner_->needs_group();
    }
    std::vector<int> labels(const Matrix& X, std::span<const int> g) const override {
        Matrix t = transform(X, g);
        return inner_->labels(t, g);
    }
    Matrix proba(const Matrix& X, std::span<const int> g) const override {
        Matrix t = transform(X, g);
        return inner_->proba(t, g);
    }

  private:
    Matrix transform(const Matrix& X, std::span<const int> g) const {
        if (repair_) {
            require_group(g, X);
            return repair_->apply(X, g);
        }
        if (lfr_) return lfr_->transform(X);
        return X;  // reweighing only affects the fit
    }

    MitigatorSpec spec_;
    std::optional<RepairModel> repair_;
    std::shared_ptr<const LfrModel> lfr_;
    TrainedPtr inner_;
};

class PostNode final : public TrainedNode {
  public:
    PostNode(MitigatorSpec spec, CeoModel ceo, TrainedPtr inner, bool inner_proba)
        : spec_(std::move(spec)), ceo_(std::move(ceo)), inner_(std::move(inner)),
          inner_proba_(inner_proba) {}

    std::string name() const override { return "Post(" + spec_.text() + ")"; }
    bool supports_proba() const override { return false; }
    bool needs_group() const override { return true; }
    std::vector<int> labels(const Matrix& X, std::span<const int> g) const override {
        require_group(g, X);
        std::vector<double> scores = inner_scores(*inner_, inner_proba_, X, g);
        return ceo_labels(ceo_apply(ceo_, scores, g));
    }
    Matrix proba(const Matrix&, std::span<const int>) const override {
        throw DataError("post-mitigated estimators do not expose probabilities");
    }

    static std::vector<double> inner_scores(const TrainedNode& inner, bool use_proba, const Matrix& X,
                                            std::span<const int> g) {
        if (use_proba) {
            Matrix p = inner.proba(X, g);
            std::vector<double> s(p.rows());
            for (std::size_t i = 0; i < p.rows(); ++i) s[i] = p.at(i, 1);
            return s;
        }
        auto lab = inner.labels(X, g);
        return std::vector<double>(lab.begin(), lab.end());
    }

  private:
    MitigatorSpec spec_;
    CeoModel ceo_;
    TrainedPtr inner_;
    bool inner_proba_;
};

class BagNode final : public TrainedNode {
  public:
    BagNode(std::vector<TrainedPtr> members, bool aggregate_proba)
        : members_(std::move(members)), aggregate_proba_(aggregate_proba) {}

    std::string name() const override { return "Bag"; }
    bool supports_proba() const override { return aggregate_proba_; }
    bool needs_group() const override {
        return std::any_of(members_.begin(), members_.end(),
                           [](const TrainedPtr& m) { return m->needs_group(); });
    }
    std::vector<int> labels(const Matrix& X, std::span<const int> g) const override {
        if (aggregate_proba_) return argmax_labels(proba(X, g));
        return majority(members_, X, g);
    }
    Matrix proba(const Matrix& X, std::span<const int> g) const override {
        if (!aggregate_proba_) throw DataError("bagged members do not all expose probabilities");
        return mean_proba(members_, X, g);
    }

    static std::vector<int> majority(const std::vector<TrainedPtr>& members, const Matrix& X,
                                     std::span<const int> g) {
        std::vector<int> votes(X.rows(), 0);
        for (const auto& m : members) {
            auto lab = m->labels(X, g);
            for (std::size_t i = 0; i < lab.size(); ++i) votes[i] += lab[i];
        }
        std::vector<int> out(X.rows());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = 2 * std::size_t(votes[i]) > members.size() ? 1 : 0;
        return out;
    }

    static Matrix mean_proba(const std::vector<TrainedPtr>& members, const Matrix& X,
                             std::span<const int> g) {
        Matrix acc(X.rows(), 2);
        for (const auto& m : members) {
            Matrix p = m->proba(X, g);
            for (std::size_t i = 0; i < X.rows(); ++i) {
                acc.at(i, 0) += p.at(i, 0);
                acc.at(i, 1) += p.at(i, 1);
            }
        }
        for (std::size_t i = 0; i < X.rows(); ++i) {
            acc.at(i, 0) /= double(members.size());
            acc.at(i, 1) /= double(members.size());
        }
        return acc;
    }

  private:
    std::vector<TrainedPtr> members_;
    bool aggregate_proba_;
};

class BoostNode final : public TrainedNode {
  public:
    BoostNode(std::vector<TrainedPtr> members, std::vector<double> alphas)
        : members_(std::move(members)), alphas_(std::move(alphas)) {}

    std::string name() const override { return "Boost"; }
    bool supports_proba() const override { return true; }
    bool needs_group() const override {
        return std::any_of(members_.begin(), members_.end(),
                           [](const TrainedPtr& m) { return m->needs_group(); });
    }
    std::vector<int> labels(const Matrix& X, std::span<const int> g) const override {
        return argmax_labels(proba(X, g));
    }
    Matrix proba(const Matrix& X, std::span<const int> g) const override {
        // alpha-weighted vote fractions; an all-zero alpha vector (every
        // member no better than chance) falls back to the unweighted vote
        double total = 0.0;
        for (double a : alphas_) total += a;
        Matrix score(X.rows(), 2);
        for (std::size_t t = 0; t < members_.size(); ++t) {
            double a = total > 0.0 ? alphas_[t] : 1.0;
            if (a <= 0.0) continue;
            auto lab = members_[t]->labels(X, g);
            for (std::size_t i = 0; i < lab.size(); ++i) score.at(i, lab[i]) += a;
        }
        for (std::size_t i = 0; i < X.rows(); ++i) {
            double s = score.at(i, 0) + score.at(i, 1);
            if (s > 0.0) {
                score.at(i, 0) /= s;
                score.at(i, 1) /= s;
            } else {
                score.at(i, 0) = score.at(i, 1) = 0.5;
            }
        }
        return score;
    }

    const std::vector<double>& alphas() const { return alphas_; }

  private:
    std::vector<TrainedPtr> members_;
    std::vector<double> alphas_;
};

class VoteNode final : public TrainedNode {
  public:
    VoteNode(std::vector<TrainedPtr> members, bool soft) : members_(std::move(members)), soft_(soft) {}

    std::string name() const override { return soft_ ? "Vote(soft)" : "Vote(hard)"; }
    bool supports_proba() const override { return soft_; }
    bool needs_group() const override {
        return std::any_of(members_.begin(), members_.end(),
                           [](const TrainedPtr& m) { return m->needs_group(); });
    }
    std::vector<int> labels(const Matrix& X, std::span<const int> g) const override {
        if (soft_) return argmax_labels(BagNode::mean_proba(members_, X, g));
        return BagNode::majority(members_, X, g);
    }
    Matrix proba(const Matrix& X, std::span<const int> g) const override {
        if (!soft_) throw DataError("hard voting does not expose probabilities");
        return BagNode::mean_proba(members_, X, g);
    }

  private:
    std::vector<TrainedPtr> members_;
    bool soft_;
};

class StackNode final : public TrainedNode {
  public:
    StackNode(std::vector<TrainedPtr> members, std::vector<bool> member_proba, TrainedPtr final_est,
              bool passthrough)
        : members_(std::move(members)), member_proba_(std::move(member_proba)),
          final_(std::move(final_est)), passthrough_(passthrough) {}

    std::string name() const override { return "Stack"; }
    bool supports_proba() const override { return final_->supports_proba(); }
    bool needs_group() const override {
        if (final_->needs_group()) return true;
        return std::any_of(members_.begin(), members_.end(),
                           [](const TrainedPtr& m) { return m->needs_group(); });
    }
    std::vector<int> labels(const Matrix& X, std::span<const int> g) const override {
        return final_->labels(meta_features(X, g), g);
    }
    Matrix proba(const Matrix& X, std::span<const int> g) const override {
        return final_->proba(meta_features(X, g), g);
    }

    Matrix meta_features(const Matrix& X, std::span<const int> g) const {
        std::size_t width = members_.size() + (passthrough_ ? X.cols() : 0);
        Matrix meta(X.rows(), width);
        for (std::size_t m = 0; m < members_.size(); ++m) {
            auto col = PostNode::inner_scores(*members_[m], member_proba_[m], X, g);
            for (std::size_t i = 0; i < X.rows(); ++i) meta.at(i, m) = col[i];
        }
        if (passthrough_)
            for (std::size_t i = 0; i < X.rows(); ++i)
                for (std::size_t c = 0; c < X.cols(); ++c) meta.at(i, members_.size() + c) = X.at(i, c);
        return meta;
    }

  private:
    std::vector<TrainedPtr> members_;
    std::vector<bool> member_proba_;
    TrainedPtr final_;
    bool passthrough_;
};

// ---------------------------------------------------------------------------
// fitting

inline TrainedPtr fit_node(const PipelineExpr& e, const TrainSlice& s, std::uint64_t seed,
                           const FitOptions& opts);

inline std::vector<double> combined_weights(std::span<const double> incoming,
                                            std::span<const double> local) {
    if (incoming.empty()) return {local.begin(), local.end()};
    std::vector<double> out(local.begin(), local.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= incoming[i];
    return out;
}

inline TrainedPtr fit_pre(const PipelineExpr& e, const TrainSlice& s, std::uint64_t seed,
                          const FitOptions& opts) {
    const auto& m = e.mitigator;
    switch (m.kind) {
        case MitigatorKind::Reweigh: {
            auto rw = reweigh(s.y, s.g);
            TrainSlice inner = s;
            inner.weights = combined_weights(s.weights, rw.per_row);
            return std::make_shared<PreNode>(m, std::nullopt, nullptr,
                                             fit_node(*e.children[0], inner, derive_seed(seed, {"pre"}), opts));
        }
        case MitigatorKind::Dir: {
            auto model = RepairModel::fit(s.X, s.g, m.dir_level, s.numeric_columns);
            TrainSlice inner = s;
            inner.X = model.apply(s.X, s.g);
            return std::make_shared<PreNode>(m, std::move(model), nullptr,
                                             fit_node(*e.children[0], inner, derive_seed(seed, {"pre"}), opts));
        }
        case MitigatorKind::Lfr: {
            auto model = std::make_shared<LfrModel>(
                LfrModel::fit(s.X, s.y, s.g, m.lfr, derive_seed(seed, {"lfr"})));
            TrainSlice inner;
            inner.X = model->transform(s.X);
            inner.y = s.y;
            inner.g = s.g;
            inner.weights = s.weights;
            inner.numeric_columns.resize(m.lfr.k);
            for (std::size_t j = 0; j < m.lfr.k; ++j) inner.numeric_columns[j] = j;
            return std::make_shared<PreNode>(m, std::nullopt, std::move(model),
                                             fit_node(*e.children[0], inner, derive_seed(seed, {"pre"}), opts));
        }
        default:
            throw PipelineError("R0", "not a pre-estimator mitigator: " + m.text());
    }
}

inline TrainedPtr fit_post(const PipelineExpr& e, const TrainSlice& s, std::uint64_t seed,
                           const FitOptions& opts) {
    auto [train_idx, calib_idx] = stratified_holdout(s.y, s.g, 0.3, derive_seed(seed, {"post"}));
    TrainSlice train = s.rows(train_idx);
    TrainedPtr inner = fit_node(*e.children[0], train, derive_seed(seed, {"post-inner"}), opts);
    bool inner_proba = inner->supports_proba();

    auto fit_ceo_on = [&](std::span<const std::size_t> idx) {
        TrainSlice calib = s.rows(idx);
        auto scores = PostNode::inner_scores(*inner, inner_proba, calib.X, calib.g);
        return ceo_fit(scores, calib.y, calib.g, e.mitigator.ceo_cost);
    };
    CeoModel ceo;
    try {
        if (calib_idx.empty()) throw DataError("empty calibration slice");
        ceo = fit_ceo_on(calib_idx);
    } catch (const DataError&) {
        // degenerate calibration slice (a missing group on a tiny fold):
        // fall back to calibrating on the whole training slice
        std::vector<std::size_t> all(s.y.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        ceo = fit_ceo_on(all);
        ceo.warnings.push_back("calibration slice degenerate; calibrated on the full training slice");
    }
    return std::make_shared<PostNode>(e.mitigator, std::move(ceo), std::move(inner), inner_proba);
}

inline TrainedPtr fit_bag(const PipelineExpr& e, const TrainSlice& s, std::uint64_t seed,
                          const FitOptions& opts) {
    std::vector<TrainedPtr> members;
    members.reserve(e.n);
    for (std::size_t i = 0; i < e.n; ++i) {
        std::uint64_t member_seed = derive_seed(seed, {"bag", std::to_string(i)});
        if (opts.bootstrap) {
            Rng rng(derive_seed(seed, {"bootstrap", std::to_string(i)}));
            auto idx = rng.sample_with_replacement(s.y.size(), s.y.size(), s.weights);
            std::sort(idx.begin(), idx.end());
            TrainSlice sample = s.rows(idx);
            sample.weights.clear();  // weights act through the resampling probabilities
            members.push_back(fit_node(*e.children[0], sample, member_seed, opts));
        } else {
            members.push_back(fit_node(*e.children[0], s, member_seed, opts));
        }
    }
    bool aggregate_proba = structural_proba(*e.children[0]);
    return std::make_shared<BagNode>(std::move(members), aggregate_proba);
}

inline TrainedPtr fit_boost(const PipelineExpr& e, const TrainSlice& s, std::uint64_t seed,
                            const FitOptions& opts) {
    // discrete SAMME; every node in the palette routes sample weights, so
    // members always train on the full slice with the current weights
    std::size_t n = s.y.size();
    std::vector<double> w = s.weights.empty() ? std::vector<double>(n, 1.0) : s.weights;
    std::vector<TrainedPtr> members;
    std::vector<double> alphas;
    for (std::size_t t = 0; t < e.n; ++t) {
        TrainSlice round = s;
        round.weights = w;
        TrainedPtr member = fit_node(*e.children[0], round, derive_seed(seed, {"boost", std::to_string(t)}),
                                     opts);
        auto pred = member->labels(s.X, s.g);
        double err = 0.0, total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            total += w[i];
            if (pred[i] != s.y[i]) err += w[i];
        }
        err /= total;
        if (err >= 0.5) {
            // no better than chance: keep the member with zero say and stop
            members.push_back(std::move(member));
            alphas.push_back(0.0);
            break;
        }
        double alpha = std::log((1.0 - std::max(err, 1e-12)) / std::max(err, 1e-12));
        members.push_back(std::move(member));
        alphas.push_back(alpha);
        if (err <= 1e-12) break;  // perfect member dominates all later votes
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (pred[i] != s.y[i]) w[i] *= std::exp(alpha);
            mean += w[i];
        }
        mean /= double(n);
        for (auto& wi : w) wi /= mean;
    }
    return std::make_shared<BoostNode>(std::move(members), std::move(alphas));
}

inline TrainedPtr fit_stack(const PipelineExpr& e, const TrainSlice& s, std::uint64_t seed,
                            const FitOptions& opts) {
    constexpr std::size_t kInternalFolds = 3;
    auto assignments = stratified_assignments(s.y, s.g, kInternalFolds, derive_seed(seed, {"stack-folds"}));

    std::size_t n = s.y.size();
    std::vector<TrainedPtr> members;
    std::vector<bool> member_proba;
    Matrix meta(n, e.children.size() + (e.passthrough ? s.X.cols() : 0));

    for (std::size_t m = 0; m < e.children.size(); ++m) {
        bool use_proba = structural_proba(*e.children[m]);
        member_proba.push_back(use_proba);
        // out-of-fold meta-features: no member ever scores a row it saw
        for (std::size_t f = 0; f < kInternalFolds; ++f) {
            std::vector<std::size_t> train_idx, test_idx;
            for (std::size_t i = 0; i < n; ++i) (assignments[i] == f ? test_idx : train_idx).push_back(i);
            TrainSlice train = s.rows(train_idx);
            TrainedPtr oof = fit_node(*e.children[m], train,
                                      derive_seed(seed, {"stack-oof", std::to_string(m), std::to_string(f)}),
                                      opts);
            TrainSlice test = s.rows(test_idx);
            auto col = PostNode::inner_scores(*oof, use_proba, test.X, test.g);
            for (std::size_t i = 0; i < test_idx.size(); ++i) meta.at(test_idx[i], m) = col[i];
        }
        members.push_back(fit_node(*e.children[m], s, derive_seed(seed, {"stack", std::to_string(m)}), opts));
    }
    if (e.passthrough)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < s.X.cols(); ++c) meta.at(i, e.children.size() + c) = s.X.at(i, c);

    TrainSlice final_slice;
    final_slice.X = std::move(meta);
    final_slice.y = s.y;
    final_slice.g = s.g;
    final_slice.weights = s.weights;
    for (std::size_t m = 0; m < e.children.size(); ++m) final_slice.numeric_columns.push_back(m);
    if (e.passthrough)
        for (auto c : s.numeric_columns) final_slice.numeric_columns.push_back(e.children.size() + c);

    TrainedPtr final_est = fit_node(*e.stack_final, final_slice, derive_seed(seed, {"stack-final"}), opts);
    return std::make_shared<StackNode>(std::move(members), std::move(member_proba), std::move(final_est),
                                       e.passthrough);
}

inline TrainedPtr fit_node(const PipelineExpr& e, const TrainSlice& s, std::uint64_t seed,
                           const FitOptions& opts) {
    using T = PipelineExpr::Type;
    switch (e.type) {
        case T::Learner: {
            LearnerSpec spec = e.learner;
            spec.seed = seed;
            return std::make_shared<LearnerNode>(fit_learner(spec, s.X, s.y, s.weights));
        }
        case T::Pre: return fit_pre(e, s, seed, opts);
        case T::InEst: {
            auto model = PrejudiceRemoverModel::fit(s.X, s.y, s.g, e.mitigator.pr, seed, s.weights);
            TrainingMeta meta;
            meta.n_rows = s.y.size();
            meta.n_cols = s.X.cols();
            meta.seed = seed;
            return std::make_shared<LearnerNode>(
                TrainedModel(std::make_shared<PrejudiceRemoverModel>(std::move(model)), std::move(meta)));
        }
        case T::Post: return fit_post(e, s, seed, opts);
        case T::Bag: return fit_bag(e, s, seed, opts);
        case T::Boost: return fit_boost(e, s, seed, opts);
        case T::Vote: {
            std::vector<TrainedPtr> members;
            for (std::size_t m = 0; m < e.children.size(); ++m) {
                if (e.soft_vote && !structural_proba(*e.children[m]))
                    throw PipelineError("R2", "soft voting member lacks predict_proba");
                members.push_back(
                    fit_node(*e.children[m], s, derive_seed(seed, {"vote", std::to_string(m)}), opts));
            }
            return std::make_shared<VoteNode>(std::move(members), e.soft_vote);
        }
        case T::Stack: return fit_stack(e, s, seed, opts);
    }
    throw ConfigError("unknown node type");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// public entry points

/// Fully fitted pipeline: the trained node tree plus the fold-level feature
/// scaler (refit on the training slice whenever the dataset asks for
/// scaling, so no test statistics leak in).
struct TrainedPipeline {
    TrainedPtr root;
    std::optional<MinMaxScaler> scaler;
    std::size_t input_width = 0;
    std::uint64_t seed = 0;
    double fit_seconds = 0.0;
    std::string text;

    bool supports_proba() const { return root->supports_proba(); }
    bool needs_group() const { return root->needs_group(); }

    std::vector<int> predict(const Matrix& X, std::span<const int> g = {}) const {
        return root->labels(prepared(X), g);
    }

    Matrix predict_proba(const Matrix& X, std::span<const int> g = {}) const {
        return root->proba(prepared(X), g);
    }

  private:
    Matrix prepared(const Matrix& X) const {
        if (X.cols() != input_width)
            throw DataError("pipeline " + text + ": predict width " + std::to_string(X.cols()) +
                            " does not match training width " + std::to_string(input_width));
        Matrix out = X;
        if (scaler) scaler->apply(out);
        return out;
    }
};

inline TrainedPipeline fit_pipeline(const ExprPtr& expr, const Dataset& ds,
                                    std::span<const std::size_t> train_rows, std::uint64_t seed,
                                    const FitOptions& opts = {}) {
    validate_or_throw(*expr);
    auto started = std::chrono::steady_clock::now();

    TrainSlice slice;
    slice.X = ds.X.take_rows(train_rows);
    slice.y = take(ds.y, train_rows);
    slice.g = take(ds.g, train_rows);
    slice.numeric_columns = ds.numeric_columns;

    TrainedPipeline out;
    out.input_width = ds.n_cols();
    out.seed = seed;
    out.text = to_text(expr);
    if (ds.scale_numeric && !ds.numeric_columns.empty()) {
        std::vector<std::size_t> all(slice.y.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        out.scaler = MinMaxScaler::fit(slice.X, all, ds.numeric_columns);
        out.scaler->apply(slice.X);
    }
    out.root = detail::fit_node(*expr, slice, seed, opts);
    out.fit_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return out;
}

inline TrainedPipeline fit_pipeline(const ExprPtr& expr, const Dataset& ds, std::uint64_t seed,
                                    const FitOptions& opts = {}) {
    std::vector<std::size_t> all(ds.n_rows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return fit_pipeline(expr, ds, all, seed, opts);
}

inline std::vector<int> predict_pipeline(const TrainedPipeline& trained, const Matrix& X,
                                         std::span<const int> g = {}) {
    return trained.predict(X, g);
}

}  // namespace fairens
