#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "serpgauge/errors.hpp"
#include "serpgauge/pipeline.hpp"
#include "serpgauge/queryset.hpp"
#include "serpgauge/report.hpp"
#include "serpgauge/scoring.hpp"
#include "serpgauge/url.hpp"

using namespace serpgauge;
using namespace serpgauge::pipeline;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("serpgauge-pipe-" + std::to_string(::getpid()) + "-" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code discard;
        fs::remove_all(path, discard);
    }
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// One emitted mock engine, ready for offline evaluation.
struct MockWorkspace {
    TempDir dir;
    MockOutcome outcome;

    explicit MockWorkspace(mock::DefectSet defects = {}) {
        MockConfig config;
        config.seed = 11;
        config.size = 120;
        config.defects = std::move(defects);
        config.out_dir = dir.path;
        outcome = run_mock(config);
    }

    RunConfig evaluate_config(const fs::path& out) const {
        RunConfig config;
        config.queryset_path = outcome.queryset_path;
        config.engines_dir = dir.path / "engines";
        config.cache_dir = dir.path / "cache";
        config.out_dir = out;
        config.offline = true;
        return config;
    }
};

double component_headline(const report::RunReport& run_report, const std::string& engine,
                          const std::string& component) {
    for (const auto& row : run_report.components)
        if (row.engine_id == engine && row.component == component) return row.headline;
    FAIL("component row not found: ", engine, " ", component);
    return -1.0;
}

}  // namespace

TEST_CASE("the mock emitter lays out a self-contained workspace") {
    MockWorkspace workspace;
    CHECK(workspace.outcome.emitted.engine_id == "mock");
    CHECK(workspace.outcome.emitted.serps == 50);
    CHECK(workspace.outcome.emitted.pages == 120);
    CHECK(fs::exists(workspace.outcome.engine_config_path));
    CHECK(fs::exists(workspace.outcome.queryset_path));

    const auto config = parse_engine_config(slurp(workspace.outcome.engine_config_path));
    CHECK(config.engine_id == "mock");
    CHECK(config.mode == EngineConfig::Mode::fixture);

    const auto checked = queryset::validate_queryset(slurp(workspace.outcome.queryset_path));
    CHECK(checked.violations.empty());
    CHECK(checked.set.queries.size() == 50);
}

TEST_CASE("offline evaluation of the clean mock completes and scores every component") {
    MockWorkspace workspace;
    TempDir out;
    const auto outcome = run_evaluate(workspace.evaluate_config(out.path / "run"));
    CHECK(outcome.total_queries == 50);
    CHECK(outcome.failed_queries == 0);
    CHECK(!outcome.budget_exceeded());

    CHECK(component_headline(outcome.report, "mock", "normalizer") == 1.0);
    CHECK(component_headline(outcome.report, "mock", "tokenizer") == 1.0);
    CHECK(component_headline(outcome.report, "mock", "spell_correction") == 1.0);
    CHECK(component_headline(outcome.report, "mock", "query_expansion") == 0.6);
    CHECK(component_headline(outcome.report, "mock", "ranking") == 1.0);

    // outputs land on disk and re-parse to the in-memory report
    const auto parsed = report::parse_report(slurp(out.path / "run" / "report.json"));
    CHECK(parsed == outcome.report);
    CHECK(fs::exists(out.path / "run" / "report.csv"));
    CHECK(fs::exists(out.path / "run" / "charts" / "summary.svg"));
    CHECK(fs::exists(out.path / "run" / "charts" / "ranking.svg"));

    CHECK(outcome.report.run_id.size() == 12);
    CHECK(outcome.report.queryset_hash.size() == 16);
    CHECK(outcome.report.timing.queries == 50);
}

TEST_CASE("evaluation output is byte-identical across worker counts") {
    MockWorkspace workspace;
    TempDir out;
    auto first_config = workspace.evaluate_config(out.path / "a");
    first_config.workers = 1;
    auto second_config = workspace.evaluate_config(out.path / "b");
    second_config.workers = 7;
    run_evaluate(first_config);
    run_evaluate(second_config);

    for (const char* name : {"report.json", "report.csv"})
        CHECK(slurp(out.path / "a" / name) == slurp(out.path / "b" / name));
    for (const auto& entry : fs::directory_iterator(out.path / "a" / "charts")) {
        const auto name = entry.path().filename();
        CHECK(slurp(entry.path()) == slurp(out.path / "b" / "charts" / name));
    }
}

TEST_CASE("a defective engine drops only its own component") {
    MockWorkspace workspace;
    // plant a second engine with broken spell handling into the same cache
    MockConfig defective;
    defective.seed = 11;
    defective.size = 120;
    defective.defects = {mock::Defect::no_spell_correction};
    defective.out_dir = workspace.dir.path;
    run_mock(defective);

    TempDir out;
    const auto outcome = run_evaluate(workspace.evaluate_config(out.path / "run"));
    CHECK(outcome.total_queries == 100);  // 50 queries, two engines

    const auto& run_report = outcome.report;
    const double clean = component_headline(run_report, "mock", "spell_correction");
    const double broken =
        component_headline(run_report, "mock_no_spell_correction", "spell_correction");
    CHECK(clean - broken >= 0.2);
    for (const char* untouched : {"normalizer", "tokenizer", "query_expansion", "ranking"}) {
        CHECK(component_headline(run_report, "mock", untouched) ==
              component_headline(run_report, "mock_no_spell_correction", untouched));
    }
}

TEST_CASE("offline gaps abort before any judging") {
    MockWorkspace workspace;
    // remove one serp fixture
    const auto serp_dir = workspace.dir.path / "cache" / "serp" / "mock";
    fs::path removed;
    for (const auto& entry : fs::directory_iterator(serp_dir)) {
        removed = entry.path();
        break;
    }
    fs::remove(removed);

    TempDir out;
    try {
        run_evaluate(workspace.evaluate_config(out.path / "run"));
        FAIL("expected a preflight error");
    } catch (const PreflightError& error) {
        CHECK(!error.missing().empty());
        bool names_serp = false;
        for (const auto& item : error.missing())
            if (item.rfind("serp mock/", 0) == 0) names_serp = true;
        CHECK(names_serp);
    }
    CHECK(!fs::exists(out.path / "run" / "report.json"));
}

TEST_CASE("a broken query-set is rejected with a validation error") {
    MockWorkspace workspace;
    std::ofstream(workspace.outcome.queryset_path, std::ios::trunc)
        << R"({"version": 1, "queries": [{"query_id": "", "component": "x",)"
        << R"( "domain_path": "nope", "query_text": "", "query_type": "analyzer_probe"}]})";
    TempDir out;
    CHECK_THROWS_AS(run_evaluate(workspace.evaluate_config(out.path / "run")), InputError);
}

TEST_CASE("a shallower cutoff still evaluates cleanly") {
    MockWorkspace workspace;
    TempDir out;
    auto config = workspace.evaluate_config(out.path / "run");
    config.k = 3;
    const auto outcome = run_evaluate(config);
    CHECK(outcome.total_queries == 50);
    CHECK(outcome.failed_queries == 0);
}

TEST_CASE("tuning fits a model over cached pages and expert grades") {
    MockWorkspace workspace;
    FixtureCache cache(workspace.dir.path / "cache");

    // grade the ranked queries: universal-set members 3, everything else 0
    const auto set = mock::bundled_queryset();
    std::ostringstream labels;
    int ranked_queries = 0;
    for (const auto& query : set.queries) {
        if (query.query_type != queryset::QueryType::known_item &&
            query.query_type != queryset::QueryType::semi_informational)
            continue;
        ++ranked_queries;
        std::set<std::string> wanted;
        for (const auto& url : query.u_set) wanted.insert(normalize_url(url));
        const auto serp = parse_serp(*cache.load_serp_text("mock", query.query_id));
        for (const auto& entry : serp.entries) {
            const int grade = wanted.count(normalize_url(entry.url)) ? 3 : 0;
            labels << query.query_id << '\t' << entry.url << '\t' << grade << '\n';
        }
    }
    REQUIRE(ranked_queries == 6);
    const auto labels_path = workspace.dir.path / "labels.tsv";
    std::ofstream(labels_path) << labels.str();

    TuneConfig config;
    config.queryset_path = workspace.outcome.queryset_path;
    config.labels_path = labels_path;
    config.cache_dir = workspace.dir.path / "cache";
    config.out_path = workspace.dir.path / "lambda.json";
    config.seed = 42;
    const auto outcome = run_tune(config);
    CHECK(outcome.queries_used == 6);
    CHECK(outcome.candidates > 0);
    CHECK(outcome.result.e_train >= 0.5);  // planted grades are nearly separable
    CHECK(outcome.result.e_train <= 1.0);

    const auto stored = scoring::parse_model(slurp(config.out_path));
    CHECK(stored.seed == 42);
    CHECK(stored.e_train == outcome.result.e_train);

    // refitting with the same seed reproduces the same file
    run_tune(config);
    const auto bytes = slurp(config.out_path);
    fs::remove(config.out_path);
    run_tune(config);
    CHECK(slurp(config.out_path) == bytes);
}
