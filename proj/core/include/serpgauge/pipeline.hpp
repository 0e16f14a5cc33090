#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "serpgauge/engines.hpp"
#include "serpgauge/errors.hpp"
#include "serpgauge/mockengine.hpp"
#include "serpgauge/report.hpp"
#include "serpgauge/scoring.hpp"

namespace serpgauge::pipeline {

struct RunConfig {
    std::filesystem::path queryset_path;
    std::filesystem::path engines_dir;
    std::filesystem::path cache_dir;
    std::filesystem::path out_dir;
    // Offline forces every engine into fixture mode; nothing touches the
    // network regardless of what the configs say.
    bool offline = false;
    int k = 10;
    int workers = 4;
    std::filesystem::path model_path;  // empty = unit model
};

// Offline preflight found gaps; nothing was evaluated.
class PreflightError : public Error {
public:
    explicit PreflightError(std::vector<std::string> missing_fixtures);
    const std::vector<std::string>& missing() const { return missing_; }

private:
    std::vector<std::string> missing_;
};

struct EvaluateOutcome {
    report::RunReport report;
    int total_queries = 0;   // (engine, query) tasks
    int failed_queries = 0;  // tasks lost to transport errors
    // Live-mode failure budget: more than 20% lost tasks means the run is not
    // trustworthy and callers should signal it.
    bool budget_exceeded() const {
        return total_queries > 0 && failed_queries * 5 > total_queries;
    }
};

// The whole evaluation: load and validate inputs, judge every (engine, query)
// pair on a worker pool, aggregate, and write report.json, report.csv and the
// charts under out_dir. Deterministic for identical inputs: the worker count
// changes wall-clock time only.
EvaluateOutcome run_evaluate(const RunConfig& config);

struct RecordConfig {
    std::filesystem::path queryset_path;
    std::filesystem::path engines_dir;
    std::filesystem::path cache_dir;
    int count = 10;
};

struct RecordOutcome {
    std::vector<std::pair<std::string, RecordSummary>> engines;  // id -> summary
};

// Warms the fixture cache for every engine and query.
RecordOutcome run_record(const RecordConfig& config);

struct TuneConfig {
    std::filesystem::path queryset_path;
    std::filesystem::path labels_path;
    std::filesystem::path cache_dir;
    std::filesystem::path out_path;
    std::uint64_t seed = 0;
};

struct TuneOutcome {
    scoring::TuneResult result;
    int queries_used = 0;
    int candidates = 0;
    std::vector<std::string> warnings;
};

// Fits score weights to expert grades over cached pages and writes the model
// file. Only queries with a universal set can be fitted; labels on other
// queries are reported and skipped.
TuneOutcome run_tune(const TuneConfig& config);

struct MockConfig {
    std::uint64_t seed = 1;
    int size = 120;
    mock::DefectSet defects;
    std::filesystem::path out_dir;
};

struct MockOutcome {
    mock::EmitResult emitted;
    std::filesystem::path engine_config_path;
    std::filesystem::path queryset_path;
};

// Emits one simulated engine: fixtures under out/cache, a fixture-mode engine
// config under out/engines, and the bundled query set at out/queryset.json.
MockOutcome run_mock(const MockConfig& config);

}  // namespace serpgauge::pipeline
