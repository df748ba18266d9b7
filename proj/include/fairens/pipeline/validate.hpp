#pragma once

#include <optional>
#include <string>

#include "fairens/pipeline/expr.hpp"

namespace fairens {

/// One violated feasibility rule; every rejection names exactly one rule.
struct FeasibilityError {
    std::string rule;     // R1..R5
    std::string message;
    std::string path;     // offending subtree, slash-separated from the root
};

struct PipelineError : std::runtime_error {
    std::string rule;
    PipelineError(const FeasibilityError& e)
        : std::runtime_error(e.rule + ": " + e.message + " (at " + e.path + ")"), rule(e.rule) {}
    PipelineError(std::string rule_id, const std::string& msg)
        : std::runtime_error(rule_id + ": " + msg), rule(std::move(rule_id)) {}
};

namespace detail {

inline std::string node_name(const PipelineExpr& e) {
    using T = PipelineExpr::Type;
    switch (e.type) {
        case T::Learner: return e.learner.text();
        case T::Pre: return "Pr";
        case T::InEst: return "In";
        case T::Post: return "Post";
        case T::Bag: return "Bag";
        case T::Boost: return "Boost";
        case T::Vote: return "Vote";
        case T::Stack: return "Stack";
    }
    return "?";
}

inline bool is_mitigation_node(const PipelineExpr& e) {
    using T = PipelineExpr::Type;
    return e.type == T::Pre || e.type == T::InEst || e.type == T::Post;
}

inline bool subtree_mitigated(const PipelineExpr& e) {
    if (is_mitigation_node(e)) return true;
    for (const auto& c : e.children)
        if (subtree_mitigated(*c)) return true;
    if (e.stack_final && subtree_mitigated(*e.stack_final)) return true;
    return false;
}

// Whether the composed estimator can emit probabilities, from structure
// alone (every learner in the palette supports predict_proba, so only Post
// nodes and hard voting clear the flag).
inline bool structural_proba(const PipelineExpr& e) {
    using T = PipelineExpr::Type;
    switch (e.type) {
        case T::Learner: return true;
        case T::InEst: return true;
        case T::Post: return false;
        case T::Pre:
        case T::Bag:
        case T::Boost: return structural_proba(*e.children[0]);
        case T::Vote: return e.soft_vote;
        case T::Stack: return structural_proba(*e.stack_final);
    }
    return false;
}

using Visitor = std::function<std::optional<FeasibilityError>(const PipelineExpr&, const std::string&)>;

inline std::optional<FeasibilityError> walk(const PipelineExpr& e, const std::string& path,
                                            const Visitor& visit) {
    std::string here = path + "/" + node_name(e);
    if (auto err = visit(e, here)) return err;
    for (const auto& c : e.children)
        if (auto err = walk(*c, here, visit)) return err;
    if (e.stack_final)
        if (auto err = walk(*e.stack_final, here + "/final", visit)) return err;
    return std::nullopt;
}

inline std::size_t max_mitigation_on_path(const PipelineExpr& e) {
    std::size_t self = is_mitigation_node(e) ? 1 : 0;
    std::size_t deepest = 0;
    for (const auto& c : e.children) deepest = std::max(deepest, max_mitigation_on_path(*c));
    if (e.stack_final) deepest = std::max(deepest, max_mitigation_on_path(*e.stack_final));
    return self + deepest;
}

}  // namespace detail

/// Check the composition feasibility rules, in order:
///   R1  an in-estimator mitigator is itself an estimator and cannot wrap
///       another estimator (in particular not an ensemble);
///   R2  soft voting requires probabilities, which post-mitigated members
///       do not expose;
///   R3  without passthrough a stacking final estimator sees no dataset
///       features, so it cannot be mitigated;
///   R4  stacking mitigates either the base estimators or the final
///       estimator, not both;
///   R5  at most one mitigation point on any root-to-leaf path.
/// Purely structural: the result never depends on leaf learner choices.
inline std::optional<FeasibilityError> validate(const PipelineExpr& root) {
    using T = PipelineExpr::Type;

    // R1
    if (auto err = detail::walk(root, "", [](const PipelineExpr& e, const std::string& path)
                                              -> std::optional<FeasibilityError> {
            if (e.type == T::InEst && !e.children.empty())
                return FeasibilityError{"R1",
                                        "an in-estimator mitigator is itself an estimator and cannot be "
                                        "applied at the ensemble level",
                                        path};
            return std::nullopt;
        }))
        return err;

    // R2
    if (auto err = detail::walk(root, "", [](const PipelineExpr& e, const std::string& path)
                                              -> std::optional<FeasibilityError> {
            if (e.type == T::Vote && e.soft_vote) {
                for (const auto& m : e.children)
                    if (!detail::structural_proba(*m))
                        return FeasibilityError{
                            "R2", "soft voting requires predict_proba, which a post-mitigated member "
                                  "does not support",
                            path};
            }
            return std::nullopt;
        }))
        return err;

    // R3
    if (auto err = detail::walk(root, "", [](const PipelineExpr& e, const std::string& path)
                                              -> std::optional<FeasibilityError> {
            if (e.type == T::Stack && !e.passthrough && detail::subtree_mitigated(*e.stack_final))
                return FeasibilityError{"R3",
                                        "without passthrough the final estimator sees no dataset "
                                        "features, so it cannot be mitigated",
                                        path};
            return std::nullopt;
        }))
        return err;

    // R4
    if (auto err = detail::walk(root, "", [](const PipelineExpr& e, const std::string& path)
                                              -> std::optional<FeasibilityError> {
            if (e.type == T::Stack && detail::subtree_mitigated(*e.stack_final)) {
                for (const auto& b : e.children)
                    if (detail::subtree_mitigated(*b))
                        return FeasibilityError{
                            "R4", "stacking may mitigate the base estimators or the final estimator, "
                                  "but not both",
                            path};
            }
            return std::nullopt;
        }))
        return err;

    // R5
    if (auto err = detail::walk(root, "", [](const PipelineExpr& e, const std::string& path)
                                              -> std::optional<FeasibilityError> {
            if (detail::is_mitigation_node(e)) {
                std::size_t below = 0;
                for (const auto& c : e.children) below = std::max(below, detail::max_mitigation_on_path(*c));
                if (e.stack_final) below = std::max(below, detail::max_mitigation_on_path(*e.stack_final));
                if (below > 0)
                    return FeasibilityError{"R5", "more than one mitigation point on a root-to-leaf path",
                                            path};
            }
            return std::nullopt;
        }))
        return err;

    return std::nullopt;
}

inline std::optional<FeasibilityError> validate(const ExprPtr& e) { return validate(*e); }

inline void validate_or_throw(const PipelineExpr& e) {
    if (auto err = validate(e)) throw PipelineError(*err);
}

}  // namespace fairens
