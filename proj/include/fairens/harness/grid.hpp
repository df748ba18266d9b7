#pragma once

#include <map>
#include <string>
#include <vector>

#include "fairens/harness/cv.hpp"
#include "fairens/harness/select.hpp"
#include "fairens/harness/store.hpp"

namespace fairens {

/// Step-2 grid: pipeline templates plus the ensemble-size axes. Templates
/// may reference the step-1 winners as @pre / @in / @post, and an @n inside
/// Bag(...) or Boost(...) expands over the corresponding size list.
struct GridSpec {
    std::vector<std::string> templates;
    std::vector<std::size_t> bagging_sizes{1, 10, 100};
    std::vector<std::size_t> boosting_sizes{1, 50, 500};
    CvOptions cv;
};

namespace detail {

inline std::string replace_all(std::string text, const std::string& token, const std::string& value) {
    std::size_t at = 0;
    while ((at = text.find(token, at)) != std::string::npos) {
        text.replace(at, token.size(), value);
        at += value.size();
    }
    return text;
}

}  // namespace detail

/// Expand one template for one dataset. Missing step-1 references throw.
inline std::vector<std::string> instantiate_template(const std::string& tmpl, const Step1Choice& step1,
                                                     const std::string& dataset, const GridSpec& grid) {
    std::string text = tmpl;
    auto substitute = [&](const std::string& token, MitigatorRole role) {
        if (text.find(token) == std::string::npos) return;
        const Step1Kind* kind = step1.find(dataset, role);
        if (!kind || kind->chosen_mitigator.empty())
            throw ConfigError("template references " + token + " but step 1 chose no " +
                              mitigator_role_name(role) + "-estimator mitigator for " + dataset);
        text = detail::replace_all(text, token, kind->chosen_mitigator);
    };
    substitute("@pre", MitigatorRole::Pre);
    substitute("@in", MitigatorRole::In);
    substitute("@post", MitigatorRole::Post);

    std::vector<std::string> out;
    if (text.find("@n") != std::string::npos) {
        const auto& sizes =
            text.find("Bag(") != std::string::npos ? grid.bagging_sizes : grid.boosting_sizes;
        for (auto n : sizes) out.push_back(detail::replace_all(text, "@n", std::to_string(n)));
    } else {
        out.push_back(text);
    }
    return out;
}

/// The composition cross product drawn in the combinations figure,
/// instantiated with a homogeneous base learner and a heterogeneous member
/// list. @pre/@in/@post mark the mitigation points for step-1 winners.
inline std::vector<std::string> default_grid_templates(const std::string& base = "tree",
                                                       const std::string& final_est = "gbt") {
    const std::string members = "tree, gbt, knn, logreg";
    const std::string pre_members = "Pr(@pre, tree), Pr(@pre, gbt), Pr(@pre, knn), Pr(@pre, logreg)";
    const std::string in_members = "@in, @in, @in, @in";
    const std::string post_members =
        "Post(@post, tree), Post(@post, gbt), Post(@post, knn), Post(@post, logreg)";
    std::vector<std::string> t;
    // no ensemble
    t.push_back(base);
    t.push_back("Pr(@pre, " + base + ")");
    t.push_back("@in");
    t.push_back("Post(@post, " + base + ")");
    // bagging
    t.push_back("Bag(" + base + ", @n)");
    t.push_back("Bag(Pr(@pre, " + base + "), @n)");
    t.push_back("Bag(@in, @n)");
    t.push_back("Bag(Post(@post, " + base + "), @n)");
    t.push_back("Pr(@pre, Bag(" + base + ", @n))");
    t.push_back("Post(@post, Bag(" + base + ", @n))");
    // boosting
    t.push_back("Boost(" + base + ", @n)");
    t.push_back("Boost(Pr(@pre, " + base + "), @n)");
    t.push_back("Boost(@in, @n)");
    t.push_back("Boost(Post(@post, " + base + "), @n)");
    t.push_back("Pr(@pre, Boost(" + base + ", @n))");
    t.push_back("Post(@post, Boost(" + base + ", @n))");
    // voting (hard: feasible with every member kind)
    t.push_back("Vote([" + members + "], hard)");
    t.push_back("Vote([" + pre_members + "], hard)");
    t.push_back("Vote([" + in_members + "], hard)");
    t.push_back("Vote([" + post_members + "], hard)");
    t.push_back("Pr(@pre, Vote([" + members + "], hard))");
    t.push_back("Post(@post, Vote([" + members + "], hard))");
    // stacking, both passthrough settings for the unmitigated form
    for (const char* pt : {"false", "true"}) {
        t.push_back("Stack([" + members + "], " + final_est + ", passthrough=" + pt + ")");
        t.push_back("Stack([" + pre_members + "], " + final_est + ", passthrough=" + pt + ")");
        t.push_back("Stack([" + in_members + "], " + final_est + ", passthrough=" + pt + ")");
        t.push_back("Stack([" + post_members + "], " + final_est + ", passthrough=" + pt + ")");
    }
    // mitigated final estimator needs passthrough
    t.push_back("Stack([" + members + "], Pr(@pre, " + final_est + "), passthrough=true)");
    t.push_back("Stack([" + members + "], @in, passthrough=true)");
    t.push_back("Stack([" + members + "], Post(@post, " + final_est + "), passthrough=true)");
    // whole-ensemble mitigation around the stack
    t.push_back("Pr(@pre, Stack([" + members + "], " + final_est + ", passthrough=true))");
    t.push_back("Post(@post, Stack([" + members + "], " + final_est + ", passthrough=false))");
    return t;
}

/// Cross product runner: every (dataset, instantiated pipeline) through
/// run_cv, appended to the store. Individual pipeline failures become
/// failure entries and the run continues.
inline void run_grid(const std::vector<Dataset>& datasets, const GridSpec& grid, const Step1Choice& step1,
                     std::uint64_t master_seed, ResultStore& store) {
    for (const auto& ds : datasets) {
        for (const auto& tmpl : grid.templates) {
            std::vector<std::string> texts;
            try {
                texts = instantiate_template(tmpl, step1, ds.name, grid);
            } catch (const std::exception& err) {
                store.append_failure({ds.name, tmpl, err.what()});
                continue;
            }
            for (const auto& text : texts) {
                try {
                    ExprPtr expr = parse_pipeline(text);
                    validate_or_throw(*expr);
                    CvOptions opts = grid.cv;
                    std::string canonical = to_text(expr);
                    opts.skip = [&](std::size_t trial, std::size_t fold, std::uint64_t seed) {
                        return store.contains_key(ds.name, canonical, trial, fold, seed);
                    };
                    for (auto& record : run_cv(expr, ds, master_seed, opts)) store.append(std::move(record));
                } catch (const std::exception& err) {
                    store.append_failure({ds.name, text, err.what()});
                }
            }
        }
    }
}

}  // namespace fairens
