#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairens/metrics.hpp"

namespace fairens {

/// One (dataset, pipeline, trial, fold) evaluation.
struct TrialRecord {
    std::string dataset;
    std::string pipeline;
    std::size_t trial = 0;
    std::size_t fold = 0;
    std::uint64_t seed = 0;
    MetricReport metrics;
    std::optional<double> memory_mb;

    std::string key() const {
        return dataset + "\x1f" + pipeline + "\x1f" + std::to_string(trial) + "\x1f" +
               std::to_string(fold) + "\x1f" + std::to_string(seed);
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["dataset"] = dataset;
        j["pipeline"] = pipeline;
        j["trial"] = trial;
        j["fold"] = fold;
        j["seed"] = seed;
        if (metrics.di.defined) j["di"] = metrics.di.value;
        else j["di"] = nullptr;
        if (metrics.spd) j["spd"] = *metrics.spd;
        else j["spd"] = nullptr;
        j["precision"] = metrics.precision;
        j["recall"] = metrics.recall;
        j["f1"] = metrics.f1;
        j["accuracy"] = metrics.accuracy;
        j["fit_seconds"] = metrics.fit_seconds;
        if (memory_mb) j["memory_mb"] = *memory_mb;
        else j["memory_mb"] = nullptr;
        return j;
    }

    static TrialRecord from_json(const nlohmann::json& j) {
        TrialRecord r;
        r.dataset = j.at("dataset").get<std::string>();
        r.pipeline = j.at("pipeline").get<std::string>();
        r.trial = j.at("trial").get<std::size_t>();
        r.fold = j.at("fold").get<std::size_t>();
        r.seed = j.at("seed").get<std::uint64_t>();
        if (!j.at("di").is_null()) r.metrics.di = DisparateImpactValue::of(j.at("di").get<double>());
        else r.metrics.di = DisparateImpactValue::undefined("stored as undefined");
        if (!j.at("spd").is_null()) r.metrics.spd = j.at("spd").get<double>();
        r.metrics.precision = j.at("precision").get<double>();
        r.metrics.recall = j.at("recall").get<double>();
        r.metrics.f1 = j.at("f1").get<double>();
        r.metrics.accuracy = j.at("accuracy").get<double>();
        r.metrics.fit_seconds = j.at("fit_seconds").get<double>();
        if (j.contains("memory_mb") && !j.at("memory_mb").is_null())
            r.memory_mb = j.at("memory_mb").get<double>();
        return r;
    }
};

struct FailureRecord {
    std::string dataset;
    std::string pipeline;
    std::string error;
};

/// Append-only JSON-Lines store with a schema header. Appending an existing
/// (dataset, pipeline, trial, fold, seed) key is a no-op, which is what
/// makes re-running an identical experiment resume instead of duplicate.
class ResultStore {
  public:
    static constexpr const char* kSchema = "trialrecord/1";

    ResultStore() = default;

    static ResultStore load(const std::string& path) {
        ResultStore s;
        std::ifstream in(path);
        if (!in) return s;  // absent file = empty store
        std::string line;
        bool first = true;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded())
                throw DataError(path + ": line " + std::to_string(line_no) + " is not valid JSON");
            if (first) {
                first = false;
                if (!j.contains("schema") || j.at("schema").get<std::string>() != kSchema)
                    throw DataError(path + ": missing or unsupported schema header");
                continue;
            }
            if (j.contains("error")) {
                s.failures_.push_back({j.value("dataset", ""), j.value("pipeline", ""),
                                       j.at("error").get<std::string>()});
                continue;
            }
            TrialRecord r = TrialRecord::from_json(j);
            s.keys_.insert(r.key());
            s.records_.push_back(std::move(r));
        }
        return s;
    }

    /// Open the backing file for appending, writing the header when new.
    void attach(const std::string& path) {
        bool fresh = !std::ifstream(path).good();
        sink_.open(path, std::ios::app);
        if (!sink_) throw DataError("cannot open store for writing: " + path);
        path_ = path;
        if (fresh) {
            sink_ << nlohmann::ordered_json{{"schema", kSchema}}.dump() << "\n";
            sink_.flush();
        }
    }

    bool contains(const TrialRecord& r) const { return keys_.count(r.key()) > 0; }

    bool contains_key(const std::string& dataset, const std::string& pipeline, std::size_t trial,
                      std::size_t fold, std::uint64_t seed) const {
        TrialRecord probe;
        probe.dataset = dataset;
        probe.pipeline = pipeline;
        probe.trial = trial;
        probe.fold = fold;
        probe.seed = seed;
        return contains(probe);
    }

    /// Returns false (and writes nothing) when the key already exists.
    bool append(TrialRecord r) {
        if (!keys_.insert(r.key()).second) return false;
        if (sink_.is_open()) {
            sink_ << r.to_json().dump() << "\n";
            sink_.flush();
        }
        records_.push_back(std::move(r));
        return true;
    }

    void append_failure(FailureRecord f) {
        if (sink_.is_open()) {
            nlohmann::ordered_json j;
            j["dataset"] = f.dataset;
            j["pipeline"] = f.pipeline;
            j["error"] = f.error;
            sink_ << j.dump() << "\n";
            sink_.flush();
        }
        failures_.push_back(std::move(f));
    }

    const std::vector<TrialRecord>& records() const { return records_; }
    const std::vector<FailureRecord>& failures() const { return failures_; }
    const std::string& path() const { return path_; }

    std::vector<std::string> datasets() const {
        std::set<std::string> seen;
        for (const auto& r : records_) seen.insert(r.dataset);
        return {seen.begin(), seen.end()};
    }

  private:
    std::vector<TrialRecord> records_;
    std::vector<FailureRecord> failures_;
    std::set<std::string> keys_;
    std::ofstream sink_;
    std::string path_;
};

}  // namespace fairens
