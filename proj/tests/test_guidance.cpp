#include <catch2/catch_amalgamated.hpp>

#include "fairens/guidance.hpp"
#include "dot_oracle.hpp"

using namespace fairens;
using Catch::Approx;

namespace {
TrialRecord rec(const std::string& dataset, const std::string& pipeline, std::size_t trial,
                std::size_t fold, double di, double f1) {
    TrialRecord r;
    r.dataset = dataset;
    r.pipeline = pipeline;
    r.trial = trial;
    r.fold = fold;
    r.seed = trial * 10 + fold;
    r.metrics.di = di < 0 ? DisparateImpactValue::undefined("crafted") : DisparateImpactValue::of(di);
    r.metrics.spd = 0.0;
    r.metrics.f1 = f1;
    r.metrics.precision = f1;
    r.metrics.recall = f1;
    r.metrics.accuracy = f1;
    return r;
}

// dataset with three pipelines: "good" dominates on both DI and F1,
// "middling" is second, "bad" is filtered out of the top third
std::vector<TrialRecord> dominant_dataset(const std::string& name, double jitter = 0.0) {
    std::vector<TrialRecord> out;
    for (std::size_t t = 0; t < 2; ++t) {
        for (std::size_t f = 0; f < 3; ++f) {
            double wiggle = 0.01 * double(f) + jitter;
            out.push_back(rec(name, "good", t, f, 0.95 - wiggle, 0.9 - wiggle));
            out.push_back(rec(name, "middling", t, f, 0.7 - wiggle, 0.7 - wiggle));
            out.push_back(rec(name, "bad", t, f, 0.3 - wiggle, 0.4 - wiggle));
        }
    }
    return out;
}
}  // namespace

TEST_CASE("fold metric matches the documented examples") {
    auto r = rec("d", "p", 0, 0, 1.25, 0.7);
    CHECK(fold_metric(r, MetricId::Di) == Approx(0.8));
    CHECK(fold_metric(r, MetricId::F1) == Approx(0.7));
    r.metrics.spd = -0.25;
    CHECK(fold_metric(r, MetricId::Spd) == Approx(0.25));
    auto undef = rec("d", "p", 0, 0, -1.0, 0.7);
    CHECK(fold_metric(undef, MetricId::Di) == 0.0);
}

TEST_CASE("standardize min-max scales means across pipelines") {
    std::vector<TrialRecord> records;
    for (std::size_t f = 0; f < 3; ++f) {
        records.push_back(rec("d", "a", 0, f, 0.2, 0.2));
        records.push_back(rec("d", "b", 0, f, 0.5, 0.5));
        records.push_back(rec("d", "c", 0, f, 0.8, 0.8));
    }
    auto out = standardize(records, MetricId::Di);
    REQUIRE(out.results.size() == 3);
    std::map<std::string, double> scaled;
    for (const auto& r : out.results) scaled[r.pipeline] = r.scaled_mean;
    CHECK(scaled["a"] == Approx(0.0));
    CHECK(scaled["b"] == Approx(0.5));
    CHECK(scaled["c"] == Approx(1.0));
}

TEST_CASE("identical means scale to one half with a warning") {
    std::vector<TrialRecord> records;
    for (std::size_t f = 0; f < 3; ++f) {
        records.push_back(rec("d", "a", 0, f, 0.6, 0.6));
        records.push_back(rec("d", "b", 0, f, 0.6, 0.6));
    }
    auto out = standardize(records, MetricId::F1);
    for (const auto& r : out.results) CHECK(r.scaled_mean == 0.5);
    CHECK_FALSE(out.warnings.empty());
}

TEST_CASE("standardization is invariant to pipeline ordering and affine maps") {
    std::vector<double> values{0.3, 0.9, 0.5, 0.7};
    auto scaled = minmax_scale(values, true);
    std::vector<double> affine(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) affine[i] = 3.5 * values[i] + 1.25;
    auto scaled_affine = minmax_scale(affine, true);
    for (std::size_t i = 0; i < values.size(); ++i)
        CHECK(scaled[i] == Approx(scaled_affine[i]).margin(1e-12));
}

TEST_CASE("quadrant assignment follows the documented thresholds") {
    // small and fair
    auto q1 = assign_quadrant(1000, 0.748);
    CHECK_FALSE(q1.large);
    CHECK(q1.fair);
    // large and unfair
    auto q2 = assign_quadrant(48842, 0.277);
    CHECK(q2.large);
    CHECK_FALSE(q2.fair);
    // boundary row count is large for any DI
    CHECK(assign_quadrant(8000, 0.9).large);
    CHECK(assign_quadrant(8000, 0.1).large);
    CHECK_FALSE(assign_quadrant(7999, 0.9).large);
    // folded DI right at the threshold is fair
    CHECK(assign_quadrant(100, 0.45).fair);
    CHECK_FALSE(assign_quadrant(100, 0.449).fair);
}

TEST_CASE("a dominant pipeline is rank one in all three metric cells") {
    auto records = dominant_dataset("ds1");
    std::map<std::string, DatasetMeta> meta{{"ds1", {500, 0.8}}};
    auto diagram = generate_diagram(records, meta);
    const auto& quadrant = diagram.quadrant(assign_quadrant(500, 0.8));
    for (const auto& metric : diagram_metrics()) {
        const auto& cell = quadrant.cells.at(metric);
        REQUIRE(cell.status == "ok");
        REQUIRE_FALSE(cell.entries.empty());
        CHECK(cell.entries.front().pipeline == "good");
    }
}

TEST_CASE("diagram generation is byte-deterministic") {
    auto records = dominant_dataset("ds1");
    auto more = dominant_dataset("ds2", 0.002);
    records.insert(records.end(), more.begin(), more.end());
    std::map<std::string, DatasetMeta> meta{{"ds1", {500, 0.8}}, {"ds2", {9000, 0.3}}};
    auto a = diagram_to_json(generate_diagram(records, meta)).dump(2);
    auto b = diagram_to_json(generate_diagram(records, meta)).dump(2);
    CHECK(a == b);
}

TEST_CASE("empty quadrants are marked no data") {
    auto records = dominant_dataset("ds1");
    std::map<std::string, DatasetMeta> meta{{"ds1", {500, 0.8}}};
    auto diagram = generate_diagram(records, meta);
    std::size_t no_data = 0;
    for (const auto& qr : diagram.quadrants)
        for (const auto& metric : diagram_metrics())
            no_data += qr.cells.at(metric).status == "no data" ? 1 : 0;
    CHECK(no_data == 9);  // three empty quadrants x three metrics
}

TEST_CASE("restricting the store to one quadrant reproduces that quadrant") {
    auto records = dominant_dataset("ds1");
    auto ds2 = dominant_dataset("ds2", 0.002);
    auto ds3 = dominant_dataset("ds3", -0.003);
    records.insert(records.end(), ds2.begin(), ds2.end());
    records.insert(records.end(), ds3.begin(), ds3.end());
    std::map<std::string, DatasetMeta> meta{
        {"ds1", {500, 0.8}}, {"ds2", {500, 0.9}}, {"ds3", {9000, 0.2}}};

    auto full = generate_diagram(records, meta);

    std::vector<TrialRecord> small_only;
    for (const auto& r : records)
        if (r.dataset != "ds3") small_only.push_back(r);
    std::map<std::string, DatasetMeta> small_meta{{"ds1", {500, 0.8}}, {"ds2", {500, 0.9}}};
    auto local = generate_diagram(small_only, small_meta);

    Quadrant q = assign_quadrant(500, 0.8);
    for (const auto& metric : diagram_metrics()) {
        const auto& a = full.quadrant(q).cells.at(metric);
        const auto& b = local.quadrant(q).cells.at(metric);
        REQUIRE(a.entries.size() == b.entries.size());
        for (std::size_t i = 0; i < a.entries.size(); ++i) {
            CHECK(a.entries[i].pipeline == b.entries[i].pipeline);
            CHECK(a.entries[i].value == Approx(b.entries[i].value).margin(1e-12));
        }
    }
}

TEST_CASE("three surviving pipelines are all reported in metric order") {
    std::vector<TrialRecord> records;
    for (std::size_t f = 0; f < 3; ++f) {
        // nine pipelines so the top third keeps three; p0..p2 dominate both metrics
        for (int p = 0; p < 9; ++p) {
            double quality = 1.0 - 0.1 * p;
            records.push_back(
                rec("d", "p" + std::to_string(p), 0, f, quality, quality - 0.02 * double(f)));
        }
    }
    std::map<std::string, DatasetMeta> meta{{"d", {100, 0.9}}};
    auto diagram = generate_diagram(records, meta);
    const auto& cell = diagram.quadrant(assign_quadrant(100, 0.9)).cells.at("di_mean");
    REQUIRE(cell.entries.size() == 3);
    CHECK(cell.entries[0].pipeline == "p0");
    CHECK(cell.entries[1].pipeline == "p1");
    CHECK(cell.entries[2].pipeline == "p2");
    CHECK(cell.entries[0].value >= cell.entries[1].value);
    CHECK(cell.entries[1].value >= cell.entries[2].value);
}

// --- leave-one-out ---------------------------------------------------------

TEST_CASE("identical full and LOO top-3 give zero differences") {
    // two near-identical datasets in one quadrant: omitting either leaves
    // the same survivors, so recommendations cannot move
    auto records = dominant_dataset("ds1");
    auto ds2 = dominant_dataset("ds2");
    records.insert(records.end(), ds2.begin(), ds2.end());
    std::map<std::string, DatasetMeta> meta{{"ds1", {500, 0.8}}, {"ds2", {600, 0.85}}};
    auto report = leave_one_out(records, meta);
    REQUIRE(report.rows.size() == 2);
    for (const auto& row : report.rows) {
        REQUIRE(row.status == "ok");
        for (const auto& metric : diagram_metrics()) {
            CHECK(row.cells.at(metric).config_differences == 0);
            REQUIRE(row.cells.at(metric).metric_difference.has_value());
            CHECK(*row.cells.at(metric).metric_difference == Approx(0.0).margin(1e-12));
        }
    }
}

TEST_CASE("an omitted dataset with no surviving rows changes nothing") {
    // ds_noise's pipelines never clear the top-third filter in both metrics
    // at once because DI and F1 rank in opposite orders
    auto records = dominant_dataset("ds1");
    auto more = dominant_dataset("ds2", 0.001);
    records.insert(records.end(), more.begin(), more.end());
    std::vector<TrialRecord> noise;
    for (std::size_t f = 0; f < 3; ++f) {
        noise.push_back(rec("ds_noise", "n0", 0, f, 0.9, 0.2));
        noise.push_back(rec("ds_noise", "n1", 0, f, 0.5, 0.5));
        noise.push_back(rec("ds_noise", "n2", 0, f, 0.2, 0.9));
    }
    records.insert(records.end(), noise.begin(), noise.end());
    std::map<std::string, DatasetMeta> meta{
        {"ds1", {500, 0.8}}, {"ds2", {600, 0.85}}, {"ds_noise", {400, 0.9}}};

    // confirm the construction: no ds_noise pipeline survives the filter
    auto full = generate_diagram(records, meta);
    Quadrant q = assign_quadrant(400, 0.9);
    for (const auto& metric : diagram_metrics())
        for (const auto& e : full.quadrant(q).cells.at(metric).entries)
            CHECK(e.pipeline.rfind("n", 0) != 0);

    auto report = leave_one_out(records, meta);
    for (const auto& row : report.rows) {
        if (row.dataset != "ds_noise") continue;
        REQUIRE(row.status == "ok");
        for (const auto& metric : diagram_metrics()) {
            CHECK(row.cells.at(metric).config_differences == 0);
            CHECK(*row.cells.at(metric).metric_difference == Approx(0.0).margin(1e-12));
        }
    }
}

TEST_CASE("difference counts never exceed three") {
    auto records = dominant_dataset("ds1");
    auto ds2 = dominant_dataset("ds2", 0.05);
    records.insert(records.end(), ds2.begin(), ds2.end());
    std::map<std::string, DatasetMeta> meta{{"ds1", {500, 0.8}}, {"ds2", {600, 0.85}}};
    auto report = leave_one_out(records, meta);
    for (const auto& row : report.rows)
        for (const auto& [metric, cell] : row.cells) CHECK(cell.config_differences <= 3);
}

TEST_CASE("a lone dataset in its quadrant is marked quadrant emptied") {
    auto records = dominant_dataset("ds1");
    std::map<std::string, DatasetMeta> meta{{"ds1", {500, 0.8}}};
    auto report = leave_one_out(records, meta);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].status == "quadrant emptied");
}

// --- emission -----------------------------------------------------------------

TEST_CASE("empty diagram emits valid JSON with four no-data quadrants") {
    auto diagram = generate_diagram({}, {});
    auto j = diagram_to_json(diagram);
    REQUIRE(j.at("quadrants").size() == 4);
    for (const auto& q : j.at("quadrants"))
        for (const auto& metric : diagram_metrics())
            CHECK(q.at("cells").at(metric).at("status").get<std::string>() == "no data");
}

TEST_CASE("emitting twice yields identical bytes") {
    auto records = dominant_dataset("ds1");
    std::map<std::string, DatasetMeta> meta{{"ds1", {500, 0.8}}};
    auto diagram = generate_diagram(records, meta);
    CHECK(diagram_to_json(diagram).dump() == diagram_to_json(diagram).dump());
    CHECK(diagram_to_dot(diagram) == diagram_to_dot(diagram));
}

TEST_CASE("DOT output parses under the grammar oracle") {
    auto records = dominant_dataset("ds1");
    auto more = dominant_dataset("ds2", 0.002);
    records.insert(records.end(), more.begin(), more.end());
    std::map<std::string, DatasetMeta> meta{{"ds1", {500, 0.8}}, {"ds2", {9000, 0.3}}};
    std::string dot = diagram_to_dot(generate_diagram(records, meta));
    auto summary = oracle::parse_dot(dot);
    INFO(summary.error);
    REQUIRE(summary.ok);
    // root + 4x(size, quadrant) + 4 quadrants x 3 metric leaves
    CHECK(summary.nodes >= 1 + 8 + 12);
    CHECK(summary.edges >= 8 + 12);
}

TEST_CASE("quoted pipeline names survive DOT escaping") {
    std::vector<TrialRecord> records;
    for (std::size_t f = 0; f < 3; ++f) {
        records.push_back(rec("d", "Stack([tree, knn], gbt, passthrough=true)", 0, f, 0.9, 0.9));
        records.push_back(rec("d", "Bag(tree, 10)", 0, f, 0.5, 0.5));
    }
    std::map<std::string, DatasetMeta> meta{{"d", {100, 0.9}}};
    std::string dot = diagram_to_dot(generate_diagram(records, meta));
    auto summary = oracle::parse_dot(dot);
    INFO(summary.error);
    CHECK(summary.ok);
}

TEST_CASE("loo report renders as JSON and text") {
    auto records = dominant_dataset("ds1");
    auto ds2 = dominant_dataset("ds2");
    records.insert(records.end(), ds2.begin(), ds2.end());
    std::map<std::string, DatasetMeta> meta{{"ds1", {500, 0.8}}, {"ds2", {600, 0.85}}};
    auto report = leave_one_out(records, meta);
    auto j = loo_to_json(report);
    CHECK(j.at("rows").size() == 2);
    auto text = loo_to_text(report);
    CHECK(text.find("ds1") != std::string::npos);
    CHECK(text.find("DI Mean") != std::string::npos);
}
