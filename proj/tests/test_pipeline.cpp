#include <catch2/catch_amalgamated.hpp>

#include "fairens/pipeline.hpp"
#include "oracles.hpp"

using namespace fairens;
using Catch::Approx;

// --- parsing -----------------------------------------------------------------

TEST_CASE("parse walks the documented example") {
    auto e = parse_pipeline("Bag(Pr(DIR(0.4), tree), 10)");
    REQUIRE(e->type == PipelineExpr::Type::Bag);
    CHECK(e->n == 10);
    const auto& pre = *e->children[0];
    REQUIRE(pre.type == PipelineExpr::Type::Pre);
    CHECK(pre.mitigator.kind == MitigatorKind::Dir);
    CHECK(pre.mitigator.dir_level == 0.4);
    CHECK(pre.children[0]->type == PipelineExpr::Type::Learner);
    CHECK(pre.children[0]->learner.kind == LearnerKind::Tree);
}

TEST_CASE("parse boost shorthand") {
    auto e = parse_pipeline("Boost(tree, 1)");
    REQUIRE(e->type == PipelineExpr::Type::Boost);
    CHECK(e->n == 1);
}

TEST_CASE("unterminated expression reports the offset at end of input") {
    try {
        parse_pipeline("Bag(tree");
        FAIL("expected a parse error");
    } catch (const ParseError& err) {
        CHECK(err.offset == 8);
    }
}

TEST_CASE("unknown names are rejected with their position") {
    CHECK_THROWS_AS(parse_pipeline("Bog(tree, 1)"), ParseError);
    CHECK_THROWS_AS(parse_pipeline("Bag(forest, 1)"), ParseError);
    CHECK_THROWS_AS(parse_pipeline("Reweigh"), ParseError);  // mitigator alone is not an estimator
}

TEST_CASE("whitespace is insignificant") {
    auto a = parse_pipeline("Bag( Pr( DIR( 0.4 ) , tree ) , 10 )");
    auto b = parse_pipeline("Bag(Pr(DIR(0.4),tree),10)");
    CHECK(to_text(a) == to_text(b));
}

TEST_CASE("canonical text round-trips") {
    for (const char* text : {
             "tree",
             "dummy(label=1)",
             "In",
             "PR(eta=100)",
             "Pr(Reweigh, tree)",
             "Pr(DIR(0.4), knn(k=3))",
             "Pr(LFR(k=5,Ax=0.01,Ay=10,Az=5), tree)",
             "Post(CEO(cost=weighted), gbt)",
             "Bag(tree, 10)",
             "Boost(Pr(DIR(1), tree), 50)",
             "Vote([tree, knn, gbt, logreg], hard)",
             "Vote([tree, gbt], soft)",
             "Stack([tree, knn], gbt, passthrough=true)",
             "Stack([Pr(Reweigh, tree), Pr(Reweigh, knn)], gbt, passthrough=false)",
         }) {
        auto e = parse_pipeline(text);
        CHECK(to_text(e) == text);
        CHECK(to_text(parse_pipeline(to_text(e))) == to_text(e));
    }
}

TEST_CASE("structural constraints reject malformed nodes at parse time") {
    CHECK_THROWS_AS(parse_pipeline("Vote([tree], hard)"), ParseError);      // < 2 members
    CHECK_THROWS_AS(parse_pipeline("Bag(tree, 0)"), ParseError);            // n < 1
    CHECK_THROWS_AS(parse_pipeline("Pr(CEO(cost=fpr), tree)"), ParseError); // CEO is not pre
    CHECK_THROWS_AS(parse_pipeline("Post(Reweigh, tree)"), ParseError);     // Reweigh is not post
    CHECK_THROWS_AS(parse_pipeline("DIR(1.5)"), ParseError);                // out-of-range level
}

// --- validation ----------------------------------------------------------------

namespace {
std::string rule_of(const std::string& text) {
    auto err = validate(parse_pipeline(text));
    return err ? err->rule : "ok";
}
}  // namespace

TEST_CASE("documented feasibility outcomes") {
    CHECK(rule_of("Pr(DIR(1), Stack([tree, knn], gbt, passthrough=true))") == "ok");
    CHECK(rule_of("Stack([tree, knn], Pr(DIR(1), gbt), passthrough=false)") == "R3");
    CHECK(rule_of("Bag(Pr(Reweigh, Pr(DIR(0.4), tree)), 10)") == "R5");
}

TEST_CASE("in-estimator mitigation cannot wrap an ensemble") {
    CHECK(rule_of("In(Bag(tree, 10))") == "R1");
    CHECK(rule_of("In(Vote([tree, knn], hard))") == "R1");
    CHECK(rule_of("In(tree)") == "R1");
}

TEST_CASE("soft voting rejects post-mitigated members") {
    CHECK(rule_of("Vote([Post(CEO(cost=weighted), tree), gbt], soft)") == "R2");
    CHECK(rule_of("Vote([Post(CEO(cost=weighted), tree), gbt], hard)") == "ok");
    CHECK(rule_of("Vote([Bag(Post(CEO(cost=weighted), tree), 3), gbt], soft)") == "R2");
}

TEST_CASE("stacking mitigation rules") {
    CHECK(rule_of("Stack([tree, knn], Pr(DIR(1), gbt), passthrough=true)") == "ok");
    CHECK(rule_of("Stack([tree, knn], In, passthrough=true)") == "ok");
    CHECK(rule_of("Stack([tree, knn], In, passthrough=false)") == "R3");
    CHECK(rule_of("Stack([Pr(Reweigh, tree), knn], Pr(DIR(1), gbt), passthrough=true)") == "R4");
    CHECK(rule_of("Stack([Pr(Reweigh, tree), Pr(Reweigh, knn)], gbt, passthrough=false)") == "ok");
}

TEST_CASE("one mitigation point per path") {
    CHECK(rule_of("Pr(Reweigh, Bag(In, 5))") == "R5");
    CHECK(rule_of("Post(CEO(cost=fpr), Bag(Post(CEO(cost=fpr), tree), 5))") == "R5");
    CHECK(rule_of("Pr(DIR(0.5), Post(CEO(cost=fpr), tree))") == "R5");
}

TEST_CASE("validation is independent of leaf learner choices") {
    for (const char* a : {"tree", "knn", "gbt", "logreg", "dummy"}) {
        std::string text = "Vote([Post(CEO(cost=weighted), " + std::string(a) + "), " + a + "], soft)";
        CHECK(rule_of(text) == "R2");
        std::string ok_text = "Bag(Pr(DIR(0.3), " + std::string(a) + "), 3)";
        CHECK(rule_of(ok_text) == "ok");
    }
}

TEST_CASE("rejections name exactly one rule with a path") {
    auto err = validate(parse_pipeline("Bag(In(tree), 3)"));
    REQUIRE(err.has_value());
    CHECK(err->rule == "R1");
    CHECK(err->path.find("Bag") != std::string::npos);
    CHECK(err->path.find("In") != std::string::npos);
}

// --- fitting -------------------------------------------------------------------

namespace {
Dataset fixture(std::uint64_t seed, std::size_t n = 160) { return synth_biased(n, 0.75, 0.35, 5, seed); }

std::vector<std::size_t> all_rows(const Dataset& ds) {
    std::vector<std::size_t> idx(ds.n_rows());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    return idx;
}
}  // namespace

TEST_CASE("single-round boosting is the inner estimator") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        auto ds = fixture(40 + seed);
        auto boosted = fit_pipeline(parse_pipeline("Boost(tree, 1)"), ds, seed);
        auto plain = fit_pipeline(parse_pipeline("tree"), ds, seed);
        CHECK(boosted.predict(ds.X, ds.g) == plain.predict(ds.X, ds.g));
    }
}

TEST_CASE("degenerate bag without bootstrap is the inner estimator") {
    auto ds = fixture(44);
    FitOptions no_bootstrap;
    no_bootstrap.bootstrap = false;
    auto bagged = fit_pipeline(parse_pipeline("Bag(tree, 1)"), ds, all_rows(ds), 7, no_bootstrap);
    auto plain = fit_pipeline(parse_pipeline("tree"), ds, 7);
    CHECK(bagged.predict(ds.X, ds.g) == plain.predict(ds.X, ds.g));
}

TEST_CASE("unanimous vote is the member") {
    auto ds = fixture(45);
    auto vote = fit_pipeline(parse_pipeline("Vote([knn, knn, knn], hard)"), ds, 3);
    auto member = fit_pipeline(parse_pipeline("knn"), ds, 3);
    CHECK(vote.predict(ds.X, ds.g) == member.predict(ds.X, ds.g));
}

TEST_CASE("identity repair level leaves the inner estimator untouched") {
    auto ds = fixture(46);
    auto wrapped = fit_pipeline(parse_pipeline("Pr(DIR(0), tree)"), ds, 5);
    auto plain = fit_pipeline(parse_pipeline("tree"), ds, 5);
    CHECK(wrapped.predict(ds.X, ds.g) == plain.predict(ds.X, ds.g));
}

TEST_CASE("constant members stay constant under every ensemble") {
    auto ds = fixture(47, 60);
    for (const char* text : {
             "Bag(dummy(label=1), 5)",
             "Boost(dummy(label=1), 3)",
             "Vote([dummy(label=1), dummy(label=1), dummy(label=1)], hard)",
             "Stack([dummy(label=1), dummy(label=1)], dummy(label=1), passthrough=false)",
             "Pr(Reweigh, Bag(dummy(label=1), 3))",
         }) {
        auto trained = fit_pipeline(parse_pipeline(text), ds, 11);
        auto pred = trained.predict(ds.X, ds.g);
        CHECK(std::all_of(pred.begin(), pred.end(), [](int v) { return v == 1; }));
    }
}

TEST_CASE("post mitigation over cost-equal scores is the inner estimator") {
    // features are a function of the class alone and both groups have the
    // same class composition, so every calibration slice sees identical
    // score distributions per group, the cost gap is exactly zero, and the
    // fitted mixing rate must be zero
    Dataset ds;
    ds.name = "mirror";
    ds.X = Matrix(120, 2);
    for (std::size_t i = 0; i < 120; ++i) {
        int y = (i % 60) < 36 ? 1 : 0;
        ds.y.push_back(y);
        ds.g.push_back(i < 60 ? 0 : 1);
        ds.X.at(i, 0) = double(y);
        ds.X.at(i, 1) = 0.5;
    }
    ds.feature_names = {"x0", "x1"};
    ds.numeric_columns = {0, 1};

    auto post = fit_pipeline(parse_pipeline("Post(CEO(cost=weighted), logreg)"), ds, 9);
    auto plain = fit_pipeline(parse_pipeline("logreg"), ds, 9);
    auto pred = post.predict(ds.X, ds.g);
    // rows with identical features agree across groups, and the zero-mixing
    // CEO leaves the inner labels intact
    for (std::size_t i = 0; i < 60; ++i) CHECK(pred[i] == pred[60 + i]);
    CHECK(pred == plain.predict(ds.X, ds.g));
}

TEST_CASE("pipelines are deterministic for a fixed seed") {
    auto ds = fixture(49);
    for (const char* text : {
             "Bag(Pr(DIR(0.7), tree), 5)",
             "Boost(Pr(Reweigh, tree), 5)",
             "Stack([tree, knn], gbt, passthrough=true)",
             "Post(CEO(cost=weighted), gbt)",
             "Vote([Pr(DIR(0.5), tree), gbt, knn], hard)",
         }) {
        auto a = fit_pipeline(parse_pipeline(text), ds, 21);
        auto b = fit_pipeline(parse_pipeline(text), ds, 21);
        CHECK(a.predict(ds.X, ds.g) == b.predict(ds.X, ds.g));
    }
}

TEST_CASE("missing group vector at prediction names the node") {
    auto ds = fixture(50);
    auto trained = fit_pipeline(parse_pipeline("Pr(DIR(1), tree)"), ds, 2);
    CHECK(trained.needs_group());
    CHECK_THROWS_WITH(trained.predict(ds.X), Catch::Matchers::ContainsSubstring("DIR"));
    auto post = fit_pipeline(parse_pipeline("Post(CEO(cost=fnr), tree)"), ds, 2);
    CHECK_THROWS_WITH(post.predict(ds.X), Catch::Matchers::ContainsSubstring("Post"));
    auto plain = fit_pipeline(parse_pipeline("Bag(tree, 3)"), ds, 2);
    CHECK_FALSE(plain.needs_group());
    CHECK_NOTHROW(plain.predict(ds.X));
}

TEST_CASE("post-mitigated pipelines do not expose probabilities") {
    auto ds = fixture(51);
    auto post = fit_pipeline(parse_pipeline("Post(CEO(cost=weighted), tree)"), ds, 3);
    CHECK_FALSE(post.supports_proba());
    CHECK_THROWS_AS(post.predict_proba(ds.X, ds.g), DataError);
    auto hard = fit_pipeline(parse_pipeline("Vote([tree, knn], hard)"), ds, 3);
    CHECK_FALSE(hard.supports_proba());
}

TEST_CASE("soft voting over probability members averages them") {
    auto ds = fixture(52);
    auto soft = fit_pipeline(parse_pipeline("Vote([gbt, logreg], soft)"), ds, 4);
    CHECK(soft.supports_proba());
    auto proba = soft.predict_proba(ds.X, ds.g);
    for (std::size_t i = 0; i < proba.rows(); ++i)
        CHECK(proba.at(i, 0) + proba.at(i, 1) == Approx(1.0).margin(1e-9));
}

TEST_CASE("boost alphas are finite and positive for better-than-chance members") {
    auto ds = fixture(53);
    auto trained = fit_pipeline(parse_pipeline("Boost(tree(max_depth=2), 10)"), ds, 5);
    const auto& boost = dynamic_cast<const detail::BoostNode&>(*trained.root);
    REQUIRE_FALSE(boost.alphas().empty());
    for (double a : boost.alphas()) {
        CHECK(std::isfinite(a));
        CHECK(a >= 0.0);
    }
}

TEST_CASE("stacking meta width follows member count and passthrough") {
    auto ds = fixture(54, 90);
    auto no_pass = fit_pipeline(parse_pipeline("Stack([tree, knn, gbt], logreg, passthrough=false)"), ds, 6);
    auto with_pass = fit_pipeline(parse_pipeline("Stack([tree, knn, gbt], logreg, passthrough=true)"), ds, 6);
    const auto& a = dynamic_cast<const detail::StackNode&>(*no_pass.root);
    const auto& b = dynamic_cast<const detail::StackNode&>(*with_pass.root);
    CHECK(a.meta_features(ds.X, ds.g).cols() == 3);
    CHECK(b.meta_features(ds.X, ds.g).cols() == 3 + ds.n_cols());
}

TEST_CASE("ensemble-level reweighing samples by weight, base-level reweighs per sample") {
    auto ds = fixture(55);
    auto ens = fit_pipeline(parse_pipeline("Pr(Reweigh, Bag(tree, 5))"), ds, 8);
    auto base = fit_pipeline(parse_pipeline("Bag(Pr(Reweigh, tree), 5)"), ds, 8);
    CHECK(ens.predict(ds.X, ds.g).size() == ds.n_rows());
    CHECK(base.predict(ds.X, ds.g).size() == ds.n_rows());
}

TEST_CASE("lfr pre-mitigation reshapes features for the inner learner") {
    auto ds = fixture(56, 100);
    auto trained =
        fit_pipeline(parse_pipeline("Pr(LFR(k=4,Ax=0.01,Ay=1,Az=5,iters=40,restarts=1), tree)"), ds, 9);
    auto pred = trained.predict(ds.X, ds.g);
    CHECK(pred.size() == ds.n_rows());
}

TEST_CASE("fitting an invalid pipeline throws the rule") {
    auto ds = fixture(57, 60);
    try {
        fit_pipeline(parse_pipeline("In(Bag(tree, 3))"), ds, 1);
        FAIL("expected a pipeline error");
    } catch (const PipelineError& err) {
        CHECK(err.rule == "R1");
    }
}

TEST_CASE("prediction width mismatches are rejected") {
    auto ds = fixture(58, 60);
    auto trained = fit_pipeline(parse_pipeline("tree"), ds, 1);
    Matrix wrong(4, 2);
    CHECK_THROWS_AS(trained.predict(wrong), DataError);
}
