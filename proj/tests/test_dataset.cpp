#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "fairens/dataset.hpp"
#include "oracles.hpp"

using namespace fairens;
using Catch::Approx;

namespace {
DatasetRecipe toy_recipe() {
    DatasetRecipe r;
    r.name = "toy";
    r.target = "hired";
    r.favorable = "yes";
    r.protected_attrs.push_back({"sex", {"M"}, std::nullopt, {}});
    r.categorical = {"sex"};
    r.numeric = {"inc"};
    return r;
}

RawTable toy_table() {
    return parse_csv_text("sex,inc,hired\nM,1,yes\nF,2,no\nM,3,yes\nF,4,no\n");
}
}  // namespace

TEST_CASE("toy table encodes by hand-worked expectation") {
    auto ds = encode(toy_table(), toy_recipe());
    CHECK(ds.feature_names == std::vector<std::string>{"sex_M", "sex_F", "inc"});
    CHECK(ds.y == std::vector<int>{1, 0, 1, 0});
    CHECK(ds.g == std::vector<int>{1, 0, 1, 0});
    CHECK(ds.X.at(0, 0) == 1.0);
    CHECK(ds.X.at(1, 1) == 1.0);
    CHECK(ds.X.at(2, 2) == 3.0);
    CHECK(ds.numeric_columns == std::vector<std::size_t>{2});
}

TEST_CASE("no categoricals and scaling off is the numeric identity") {
    DatasetRecipe r;
    r.name = "nums";
    r.target = "t";
    r.favorable = "1";
    r.protected_attrs.push_back({"p", {}, 1.0, {}});
    auto ds = encode(parse_csv_text("a,b,p,t\n0.5,2,1,1\n1.5,4,0,0\n2.5,6,1,1\n"), r);
    CHECK(ds.feature_names == std::vector<std::string>{"a", "b", "p"});
    CHECK(ds.X.at(0, 0) == 0.5);
    CHECK(ds.X.at(1, 1) == 4.0);
    CHECK(ds.X.at(2, 2) == 1.0);
}

TEST_CASE("encode is deterministic bit for bit") {
    auto a = encode(toy_table(), toy_recipe());
    auto b = encode(toy_table(), toy_recipe());
    CHECK(a.X == b.X);
    CHECK(a.y == b.y);
    CHECK(a.g == b.g);
    CHECK(a.feature_names == b.feature_names);
}

TEST_CASE("degenerate target is rejected") {
    DatasetRecipe r = toy_recipe();
    RawTable t = parse_csv_text("sex,inc,hired\nM,1,yes\nF,2,yes\n");
    CHECK_THROWS_WITH(encode(t, r), Catch::Matchers::ContainsSubstring("degenerate target"));
}

TEST_CASE("privileged predicate matching nothing is rejected") {
    DatasetRecipe r = toy_recipe();
    r.protected_attrs[0].privileged_values = {"X"};
    CHECK_THROWS_WITH(encode(toy_table(), r), Catch::Matchers::ContainsSubstring("privileged"));
}

TEST_CASE("rows with missing target or protected value are dropped and counted") {
    DatasetRecipe r = toy_recipe();
    RawTable t = parse_csv_text("sex,inc,hired\nM,1,yes\nF,2,no\n,3,yes\nM,4,\nF,5,no\nM,6,yes\n");
    auto ds = encode(t, r);
    CHECK(ds.n_rows() == 4);
    CHECK(ds.dropped_rows == 2);
    REQUIRE_FALSE(ds.warnings.empty());
}

TEST_CASE("missing numerics impute the column median, missing categoricals one-hot") {
    DatasetRecipe r = toy_recipe();
    RawTable t = parse_csv_text("sex,inc,hired\nM,1,yes\nF,,no\nM,3,yes\nF,5,no\n");
    auto ds = encode(t, r);
    // median of {1,3,5} = 3
    std::size_t inc = 2;
    CHECK(ds.X.at(1, inc) == 3.0);

    DatasetRecipe r2 = toy_recipe();
    r2.categorical.insert("city");
    RawTable t2 = parse_csv_text("sex,city,inc,hired\nM,york,1,yes\nF,?,2,no\nM,kent,3,yes\nF,york,4,no\n");
    auto ds2 = encode(t2, r2);
    CHECK(ds2.n_rows() == 4);  // missing non-protected categorical keeps the row
    CHECK(std::find(ds2.feature_names.begin(), ds2.feature_names.end(), "city_missing") !=
          ds2.feature_names.end());
}

TEST_CASE("derived binary column feeds protected predicate") {
    DatasetRecipe r;
    r.name = "derived";
    r.target = "ok";
    r.favorable = "y";
    r.derive.push_back({"male", "status", {"m single", "m married"}});
    r.protected_attrs.push_back({"male", {"1"}, std::nullopt, {}});
    r.drop = {"status"};
    auto ds = encode(parse_csv_text("status,ok\nm single,y\nf single,n\nm married,y\nf married,n\n"), r);
    CHECK(ds.g == std::vector<int>{1, 0, 1, 0});
    CHECK(std::find(ds.feature_names.begin(), ds.feature_names.end(), "male") != ds.feature_names.end());
    CHECK(std::find(ds.feature_names.begin(), ds.feature_names.end(), "status_m single") ==
          ds.feature_names.end());
}

TEST_CASE("unprivileged value set drops other cohorts") {
    DatasetRecipe r;
    r.name = "two-cohort";
    r.target = "t";
    r.favorable = "1";
    r.protected_attrs.push_back({"race", {"A"}, std::nullopt, {"B"}});
    r.categorical = {"race"};
    auto ds = encode(parse_csv_text("race,t\nA,1\nB,0\nC,1\nA,0\nB,1\n"), r);
    CHECK(ds.n_rows() == 4);  // C row dropped
    CHECK(ds.dropped_rows == 1);
}

TEST_CASE("scale_numeric maps numeric features into [0,1]") {
    DatasetRecipe r = toy_recipe();
    r.scale_numeric = true;
    auto ds = encode(toy_table(), r);
    std::size_t inc = 2;
    CHECK(ds.X.at(0, inc) == 0.0);
    CHECK(ds.X.at(3, inc) == 1.0);
    CHECK(ds.scale_numeric);
}

// --- stratified folds ---------------------------------------------------

namespace {
Dataset twelve_row_dataset() {
    // 3 rows in each of the 4 (label, group) strata
    Dataset ds;
    ds.name = "strata12";
    ds.X = Matrix(12, 1);
    ds.feature_names = {"x"};
    for (int i = 0; i < 12; ++i) ds.X.at(i, 0) = i;
    ds.y = {0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1};
    ds.g = {0, 0, 0, 1, 1, 1, 0, 0, 0, 1, 1, 1};
    return ds;
}
}  // namespace

TEST_CASE("12 rows over 4 strata with k=3 land one row per stratum per fold") {
    auto ds = twelve_row_dataset();
    auto plan = stratified_kfold(ds, 3, 42);
    // oracle: enumerate fold x stratum counts
    std::map<std::pair<std::size_t, std::pair<int, int>>, int> counts;
    for (std::size_t i = 0; i < 12; ++i) ++counts[{plan.assignments[i], {ds.y[i], ds.g[i]}}];
    for (std::size_t f = 0; f < 3; ++f)
        for (int y : {0, 1})
            for (int g : {0, 1}) CHECK(counts[{f, {y, g}}] == 1);
}

TEST_CASE("k below 2 and k beyond n are errors") {
    auto ds = twelve_row_dataset();
    CHECK_THROWS_AS(stratified_kfold(ds, 1, 0), DataError);
    CHECK_THROWS_AS(stratified_kfold(ds, 13, 0), DataError);
}

TEST_CASE("same seed reproduces assignments, different seed moves them") {
    auto ds = twelve_row_dataset();
    auto a = stratified_kfold(ds, 3, 7);
    auto b = stratified_kfold(ds, 3, 7);
    CHECK(a.assignments == b.assignments);
    bool any_diff = false;
    for (std::uint64_t s = 8; s < 16 && !any_diff; ++s)
        any_diff = stratified_kfold(ds, 3, s).assignments != a.assignments;
    CHECK(any_diff);
}

TEST_CASE("per-stratum fold counts never differ by more than one") {
    Rng rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        std::size_t n = 20 + rng.uniform_int(60);
        Dataset ds;
        ds.name = "prop";
        ds.X = Matrix(n, 1);
        ds.feature_names = {"x"};
        for (std::size_t i = 0; i < n; ++i) {
            ds.y.push_back(int(rng.uniform() < 0.4));
            ds.g.push_back(int(rng.uniform() < 0.6));
        }
        std::size_t k = 2 + rng.uniform_int(4);
        auto plan = stratified_kfold(ds, k, rep);
        std::map<std::pair<int, int>, std::vector<int>> per_stratum;
        for (std::size_t i = 0; i < n; ++i) {
            auto& v = per_stratum[{ds.y[i], ds.g[i]}];
            v.resize(k, 0);
            ++v[plan.assignments[i]];
        }
        for (auto& [stratum, v] : per_stratum) {
            int lo = *std::min_element(v.begin(), v.end());
            int hi = *std::max_element(v.begin(), v.end());
            CHECK(hi - lo <= 1);
        }
        // folds partition all rows and are non-empty
        std::vector<std::size_t> seen;
        for (std::size_t f = 0; f < k; ++f) {
            auto test = plan.test_rows(f);
            CHECK_FALSE(test.empty());
            seen.insert(seen.end(), test.begin(), test.end());
        }
        std::sort(seen.begin(), seen.end());
        CHECK(seen.size() == n);
        CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
    }
}

// --- synthetic fixtures ---------------------------------------------------

TEST_CASE("equal synthetic rates give DI within 0.05 of one") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto ds = synth_biased(10000, 0.5, 0.5, 6, seed);
        auto di = oracle::di(ds.y, ds.g);
        REQUIRE(di.has_value());
        CHECK(std::abs(*di - 1.0) <= 0.05);
    }
}

TEST_CASE("biased synthetic rates give the configured DI") {
    auto ds = synth_biased(10000, 0.8, 0.4, 6, 3);
    auto di = oracle::di(ds.y, ds.g);
    REQUIRE(di.has_value());
    CHECK(*di >= 0.45);
    CHECK(*di <= 0.55);
    CHECK(ds.baseline_di().value == Approx(*di));
}

TEST_CASE("synthetic fixture rejects tiny n") {
    CHECK_THROWS_AS(synth_biased(4, 0.5, 0.5, 4, 0), DataError);
}

TEST_CASE("dataset slice keeps rows aligned") {
    auto ds = synth_biased(50, 0.7, 0.3, 5, 1);
    std::vector<std::size_t> rows{0, 5, 10, 15};
    auto s = ds.slice(rows);
    CHECK(s.n_rows() == 4);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(s.y[i] == ds.y[rows[i]]);
        CHECK(s.g[i] == ds.g[rows[i]]);
        CHECK(s.X.at(i, 2) == ds.X.at(rows[i], 2));
    }
}
