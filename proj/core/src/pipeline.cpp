#include "serpgauge/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include "serpgauge/metrics.hpp"
#include "serpgauge/textproc.hpp"
#include "serpgauge/url.hpp"

namespace serpgauge::pipeline {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(std::string(what) + " not readable: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const fs::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("short write to " + path.string());
}

struct LoadedQuerySet {
    queryset::QuerySet set;
    std::string bytes;
};

LoadedQuerySet load_queryset(const fs::path& path) {
    LoadedQuerySet loaded;
    loaded.bytes = read_file(path, "query set");
    auto validated = queryset::validate_queryset(loaded.bytes);
    if (!validated.ok()) {
        std::string message = "query set has " + std::to_string(validated.violations.size()) +
                              " violation(s); first: " + validated.violations.front().query_id +
                              " " + validated.violations.front().field + ": " +
                              validated.violations.front().message;
        throw InputError(message);
    }
    loaded.set = std::move(validated.set);
    return loaded;
}

bool needs_entry_pages(const queryset::QuerySpec& query) {
    switch (query.query_type) {
        case queryset::QueryType::navigational:
        case queryset::QueryType::trend_single_url:
            return false;  // judged by URL alone
        default:
            return true;
    }
}

bool rank_judged(const queryset::QuerySpec& query) {
    return query.query_type == queryset::QueryType::known_item ||
           query.query_type == queryset::QueryType::semi_informational;
}

// Evidence matching: does any evidence surface form occur in the text?
bool evidence_in(const std::vector<std::string>& evidence_terms,
                 const textproc::NormalizedText& text) {
    for (const auto& term : evidence_terms) {
        try {
            if (textproc::count_occurrences(text, term) > 0) return true;
        } catch (const std::invalid_argument&) {
            // Term normalizes to nothing; it cannot match.
        }
    }
    return false;
}

struct TaskOutcome {
    std::optional<metrics::QueryScore> row;
    std::vector<std::string> warnings;
    bool failed = false;
    int serps = 0;
    int pages = 0;
};

struct JudgeContext {
    const queryset::QuerySet* set = nullptr;
    const scoring::LinearScoreModel* model = nullptr;
    std::array<double, textproc::kAllParts.size()> part_importance{};
    int k = 10;
};

std::optional<textproc::SegmentedDocument> load_page_document(Engine& engine,
                                                             const std::string& url,
                                                             TaskOutcome& outcome) {
    try {
        const PageRecord record = engine.fetch_page(url);
        ++outcome.pages;
        return textproc::segment_html(record.body, record.url, record.retrieved_at_ms);
    } catch (const Error& e) {
        outcome.warnings.push_back("page " + url + ": " + e.what());
        return std::nullopt;
    } catch (const std::exception& e) {
        outcome.warnings.push_back("page " + url + ": " + e.what());
        return std::nullopt;
    }
}

void judge_probe(const queryset::QuerySpec& query, const Serp& serp, Engine& engine,
                 const JudgeContext& context, TaskOutcome& outcome) {
    metrics::JudgedSerp judged;
    judged.query_id = query.query_id;
    judged.engine_id = serp.engine_id;
    for (const auto& entry : serp.entries) {
        bool relevant = evidence_in(query.evidence_terms,
                                    textproc::normalize_text(entry.title + "\n" + entry.snippet));
        if (!relevant) {
            if (const auto page = load_page_document(engine, entry.url, outcome)) {
                for (const auto part : textproc::kAllParts) {
                    if (evidence_in(query.evidence_terms, page->part(part))) {
                        relevant = true;
                        break;
                    }
                }
            }
        }
        judged.entries.push_back(
            {entry.rank, relevant ? scoring::Relevance::relevant : scoring::Relevance::irrelevant});
    }
    metrics::QueryScore row;
    row.query_id = query.query_id;
    row.engine_id = serp.engine_id;
    row.domain_path = query.domain_path;
    row.accuracy = metrics::accuracy_at_k(judged, context.k);
    row.pass_rate = metrics::probe_pass_rate(judged, context.k);
    outcome.row = std::move(row);
}

void judge_url_match(const queryset::QuerySpec& query, const Serp& serp, TaskOutcome& outcome,
                     const JudgeContext& context) {
    std::set<std::string> expected;
    for (const auto& url : query.expected_urls) expected.insert(normalize_url(url));
    metrics::JudgedSerp judged;
    judged.query_id = query.query_id;
    judged.engine_id = serp.engine_id;
    for (const auto& entry : serp.entries) {
        bool relevant = false;
        try {
            relevant = expected.count(normalize_url(entry.url)) > 0;
        } catch (const Error& e) {
            outcome.warnings.push_back("entry url " + entry.url + ": " + e.what());
        }
        judged.entries.push_back(
            {entry.rank, relevant ? scoring::Relevance::relevant : scoring::Relevance::irrelevant});
    }
    metrics::QueryScore row;
    row.query_id = query.query_id;
    row.engine_id = serp.engine_id;
    row.domain_path = query.domain_path;
    row.accuracy = metrics::accuracy_at_k(judged, context.k);
    row.mrr = metrics::reciprocal_rank(judged);
    row.signed_mrr = metrics::signed_reciprocal_rank(judged);
    outcome.row = std::move(row);
}

void judge_ranked(const queryset::QuerySpec& query, const Serp& serp, Engine& engine,
                  const JudgeContext& context, TaskOutcome& outcome) {
    std::vector<textproc::SegmentedDocument> universe;
    for (const auto& url : query.u_set) {
        if (auto document = load_page_document(engine, url, outcome))
            universe.push_back(std::move(*document));
    }
    if (universe.size() < 3) {
        outcome.warnings.push_back("query " + query.query_id + " on " + serp.engine_id +
                                   ": universal set unusable (" +
                                   std::to_string(universe.size()) + " of " +
                                   std::to_string(query.u_set.size()) + " pages loaded)");
        return;
    }
    const queryset::QuerySpec enriched = queryset::enrich_bigrams(query);
    scoring::NetworkOptions options;
    options.part_importance = context.part_importance;
    const scoring::DecisionNetwork network = scoring::build_theta(universe, enriched, options);
    const std::vector<double> self_scores = scoring::loo_self_scores(universe, enriched, options);

    metrics::JudgedSerp judged;
    judged.query_id = query.query_id;
    judged.engine_id = serp.engine_id;
    for (const auto& entry : serp.entries) {
        scoring::Relevance relevance = scoring::Relevance::uncertain;
        if (const auto page = load_page_document(engine, entry.url, outcome)) {
            const auto families = scoring::feature_families(network, *page, false);
            const double score = scoring::linear_score(*context.model, families, &outcome.warnings);
            relevance = scoring::relevance_decision(score, self_scores).relevance;
        }
        judged.entries.push_back({entry.rank, relevance});
    }
    metrics::QueryScore row;
    row.query_id = query.query_id;
    row.engine_id = serp.engine_id;
    row.domain_path = query.domain_path;
    row.accuracy = metrics::accuracy_at_k(judged, context.k);
    row.mrr = metrics::reciprocal_rank(judged);
    row.signed_mrr = metrics::signed_reciprocal_rank(judged);
    outcome.row = std::move(row);
}

TaskOutcome run_task(const queryset::QuerySpec& query, Engine& engine,
                     const JudgeContext& context) {
    TaskOutcome outcome;
    Serp serp;
    try {
        serp = engine.search(query.query_text, query.query_id, context.k, &outcome.warnings);
        ++outcome.serps;
    } catch (const MissingFixtureError& e) {
        outcome.failed = true;
        outcome.warnings.push_back("query " + query.query_id + " on " +
                                   engine.config().engine_id + ": " + e.what());
        return outcome;
    } catch (const TransportError& e) {
        outcome.failed = true;
        outcome.warnings.push_back("query " + query.query_id + " on " +
                                   engine.config().engine_id + ": " + e.what());
        return outcome;
    }
    if (static_cast<int>(serp.entries.size()) > context.k)
        serp.entries.resize(static_cast<std::size_t>(context.k));
    try {
        switch (query.query_type) {
            case queryset::QueryType::analyzer_probe:
                judge_probe(query, serp, engine, context, outcome);
                break;
            case queryset::QueryType::navigational:
            case queryset::QueryType::trend_single_url:
                judge_url_match(query, serp, outcome, context);
                break;
            case queryset::QueryType::known_item:
            case queryset::QueryType::semi_informational:
                judge_ranked(query, serp, engine, context, outcome);
                break;
        }
    } catch (const std::exception& e) {
        outcome.row.reset();
        outcome.failed = true;
        outcome.warnings.push_back("query " + query.query_id + " on " +
                                   engine.config().engine_id + " failed: " + e.what());
    }
    return outcome;
}

// Offline evaluation must never start on a partial cache: every fixture the
// run would read is checked up front and all gaps are reported at once.
void preflight(const std::vector<EngineConfig>& configs, const queryset::QuerySet& set,
               const FixtureCache& cache, int k) {
    std::vector<std::string> missing;
    std::set<std::string> seen;
    const auto note = [&](std::string line) {
        if (seen.insert(line).second) missing.push_back(std::move(line));
    };
    for (const auto& config : configs) {
        for (const auto& query : set.queries) {
            if (!cache.has_serp(config.engine_id, query.query_id)) {
                note("serp " + config.engine_id + "/" + query.query_id);
                continue;
            }
            if (!needs_entry_pages(query)) continue;
            Serp serp;
            try {
                serp = parse_serp(*cache.load_serp_text(config.engine_id, query.query_id));
            } catch (const Error& e) {
                throw InputError("fixture serp " + config.engine_id + "/" + query.query_id +
                                 " is not loadable: " + e.what());
            }
            const std::size_t judged = std::min(serp.entries.size(), static_cast<std::size_t>(k));
            for (std::size_t i = 0; i < judged; ++i) {
                if (!cache.has_page(serp.entries[i].url))
                    note("page " + serp.entries[i].url + " (serp " + config.engine_id + "/" +
                         query.query_id + ")");
            }
        }
    }
    for (const auto& query : set.queries) {
        if (!rank_judged(query)) continue;
        for (const auto& url : query.u_set)
            if (!cache.has_page(url)) note("page " + url + " (universal set of " + query.query_id + ")");
    }
    if (!missing.empty()) throw PreflightError(std::move(missing));
}

}  // namespace

PreflightError::PreflightError(std::vector<std::string> missing_fixtures)
    : Error("offline run is missing " + std::to_string(missing_fixtures.size()) + " fixture(s)"),
      missing_(std::move(missing_fixtures)) {}

EvaluateOutcome run_evaluate(const RunConfig& config) {
    if (config.k < 1 || config.k > 50) throw InputError("k must lie in [1, 50]");
    if (config.workers < 1) throw InputError("worker count must be positive");

    const LoadedQuerySet loaded = load_queryset(config.queryset_path);
    std::vector<EngineConfig> configs = load_engine_configs(config.engines_dir);
    if (configs.empty())
        throw InputError("no engine configs under " + config.engines_dir.string());
    if (config.offline)
        for (auto& engine_config : configs) engine_config.mode = EngineConfig::Mode::fixture;
    std::sort(configs.begin(), configs.end(),
              [](const EngineConfig& a, const EngineConfig& b) { return a.engine_id < b.engine_id; });

    scoring::LinearScoreModel model = scoring::unit_network_model();
    std::string model_bytes = "default";
    if (!config.model_path.empty()) {
        model_bytes = read_file(config.model_path, "model file");
        model = scoring::parse_model(model_bytes).model;
    }

    FixtureCache cache(config.cache_dir);
    if (config.offline) preflight(configs, loaded.set, cache, config.k);

    SystemClock clock;
    std::vector<std::unique_ptr<Engine>> engines;
    engines.reserve(configs.size());
    for (const auto& engine_config : configs)
        engines.push_back(std::make_unique<Engine>(engine_config, cache, clock));

    JudgeContext context;
    context.set = &loaded.set;
    context.model = &model;
    context.part_importance = scoring::part_importance_with_overrides(loaded.set.v_overrides);
    context.k = config.k;

    struct Task {
        std::size_t engine_index;
        std::size_t query_index;
    };
    std::vector<Task> tasks;
    for (std::size_t e = 0; e < engines.size(); ++e)
        for (std::size_t q = 0; q < loaded.set.queries.size(); ++q) tasks.push_back({e, q});

    std::vector<TaskOutcome> outcomes(tasks.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
            const Task& task = tasks[i];
            outcomes[i] = run_task(loaded.set.queries[task.query_index],
                                   *engines[task.engine_index], context);
        }
    };
    const std::size_t n_workers =
        std::min<std::size_t>(static_cast<std::size_t>(config.workers), std::max<std::size_t>(tasks.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i + 1 < n_workers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& thread : pool) thread.join();

    // Deterministic reduction in task order; the pool size left no trace.
    EvaluateOutcome result;
    result.total_queries = static_cast<int>(tasks.size());
    std::vector<metrics::QueryScore> rows;
    std::vector<std::string> warnings;
    std::set<std::string> warned;
    report::Timing timing;
    for (const auto& outcome : outcomes) {
        if (outcome.failed) ++result.failed_queries;
        if (outcome.row) rows.push_back(*outcome.row);
        for (const auto& warning : outcome.warnings)
            if (warned.insert(warning).second) warnings.push_back(warning);
        timing.serps += outcome.serps;
        timing.pages += outcome.pages;
    }
    timing.queries = static_cast<std::int64_t>(tasks.size());

    metrics::AggregateResult aggregated = metrics::aggregate(rows);
    report::RunReport run_report;
    {
        std::string fingerprint = "evaluate\n" + loaded.bytes + "\n";
        for (const auto& engine_config : configs)
            fingerprint += serialize_engine_config(engine_config) + "\n";
        fingerprint += model_bytes + "\n" + std::to_string(config.k) +
                       (config.offline ? "\noffline" : "\nlive");
        run_report.run_id = sha256_hex(fingerprint).substr(0, 12);
    }
    run_report.queryset_hash = sha256_hex(loaded.bytes).substr(0, 16);
    for (const auto& engine_config : configs) run_report.engines.push_back(engine_config.engine_id);
    run_report.domains = std::move(aggregated.domains);
    run_report.components = std::move(aggregated.components);
    run_report.warnings = std::move(warnings);
    for (const auto& warning : aggregated.warnings) run_report.warnings.push_back(warning);
    run_report.timing = timing;
    report::canonicalize(run_report);

    fs::create_directories(config.out_dir / "charts");
    write_file(config.out_dir / "report.json",
               report::emit_report(run_report, report::Format::json));
    write_file(config.out_dir / "report.csv", report::emit_report(run_report, report::Format::csv));
    for (const auto& [name, svg] : report::emit_charts(run_report))
        write_file(config.out_dir / "charts" / name, svg);

    result.report = std::move(run_report);
    return result;
}

RecordOutcome run_record(const RecordConfig& config) {
    if (config.count < 1 || config.count > 50) throw InputError("count must lie in [1, 50]");
    const LoadedQuerySet loaded = load_queryset(config.queryset_path);
    const std::vector<EngineConfig> configs = load_engine_configs(config.engines_dir);
    if (configs.empty())
        throw InputError("no engine configs under " + config.engines_dir.string());
    FixtureCache cache(config.cache_dir);
    SystemClock clock;
    std::vector<RecordQuery> queries;
    for (const auto& query : loaded.set.queries)
        queries.push_back({query.query_id, query.query_text});
    RecordOutcome outcome;
    for (const auto& engine_config : configs) {
        Engine engine(engine_config, cache, clock);
        outcome.engines.emplace_back(engine_config.engine_id,
                                     record_fixtures(engine, queries, config.count));
    }
    return outcome;
}

TuneOutcome run_tune(const TuneConfig& config) {
    const LoadedQuerySet loaded = load_queryset(config.queryset_path);
    const auto labels = queryset::parse_labels(read_file(config.labels_path, "labels file"));
    const auto label_violations = queryset::validate_labels(labels, loaded.set);
    if (!label_violations.empty())
        throw InputError("labels refer to " + std::to_string(label_violations.size()) +
                         " unknown quer" + (label_violations.size() == 1 ? "y" : "ies") +
                         "; first: " + label_violations.front().query_id);

    FixtureCache cache(config.cache_dir);
    TuneOutcome outcome;
    const auto part_importance = scoring::part_importance_with_overrides(loaded.set.v_overrides);

    std::vector<std::vector<scoring::LabeledCandidate>> groups;
    for (const auto& query : loaded.set.queries) {
        std::vector<const queryset::ExpertLabel*> query_labels;
        for (const auto& label : labels.labels)
            if (label.query_id == query.query_id) query_labels.push_back(&label);
        if (query_labels.empty()) continue;
        if (!rank_judged(query)) {
            outcome.warnings.push_back("labels for " + query.query_id +
                                       " ignored: no universal set to fit against");
            continue;
        }
        std::vector<textproc::SegmentedDocument> universe;
        for (const auto& url : query.u_set) {
            const auto record = cache.load_page(url);
            if (!record) {
                outcome.warnings.push_back("page " + url + " not cached");
                continue;
            }
            try {
                universe.push_back(
                    textproc::segment_html(record->body, record->url, record->retrieved_at_ms));
            } catch (const SegmentationError& e) {
                outcome.warnings.push_back("page " + url + ": " + e.what());
            }
        }
        if (universe.size() < 3) {
            outcome.warnings.push_back("query " + query.query_id +
                                       " skipped: universal set unusable");
            continue;
        }
        const queryset::QuerySpec enriched = queryset::enrich_bigrams(query);
        scoring::NetworkOptions options;
        options.part_importance = part_importance;
        const scoring::DecisionNetwork network = scoring::build_theta(universe, enriched, options);

        std::vector<scoring::LabeledCandidate> group;
        for (const auto* label : query_labels) {
            const auto record = cache.load_page(label->url);
            if (!record) {
                outcome.warnings.push_back("labeled page " + label->url + " not cached; skipped");
                continue;
            }
            try {
                const auto document =
                    textproc::segment_html(record->body, record->url, record->retrieved_at_ms);
                group.push_back({scoring::feature_families(network, document, false), label->grade});
            } catch (const SegmentationError& e) {
                outcome.warnings.push_back("labeled page " + label->url + ": " + e.what());
            }
        }
        if (group.size() >= 2) {
            outcome.candidates += static_cast<int>(group.size());
            ++outcome.queries_used;
            groups.push_back(std::move(group));
        } else if (!group.empty()) {
            outcome.warnings.push_back("query " + query.query_id +
                                       " skipped: a single labeled page carries no order");
        }
    }
    outcome.result = scoring::tune_lambda(groups, scoring::unit_network_model(), config.seed);

    scoring::StoredModel stored;
    stored.model = outcome.result.model;
    stored.e_train = outcome.result.e_train;
    stored.seed = config.seed;
    if (!config.out_path.parent_path().empty())
        fs::create_directories(config.out_path.parent_path());
    write_file(config.out_path, scoring::serialize_model(stored));
    return outcome;
}

MockOutcome run_mock(const MockConfig& config) {
    const mock::MockCorpus corpus = mock::build_corpus(config.seed, config.size);
    const std::string engine_id = mock::engine_id_for(config.defects);
    FixtureCache cache(config.out_dir / "cache");
    MockOutcome outcome;
    outcome.emitted = mock::emit_fixtures(corpus, config.defects, engine_id, cache);

    EngineConfig engine_config;
    engine_config.engine_id = engine_id;
    engine_config.mode = EngineConfig::Mode::fixture;
    fs::create_directories(config.out_dir / "engines");
    outcome.engine_config_path = config.out_dir / "engines" / (engine_id + ".json");
    write_file(outcome.engine_config_path, serialize_engine_config(engine_config));

    outcome.queryset_path = config.out_dir / "queryset.json";
    write_file(outcome.queryset_path, queryset::serialize_queryset(mock::bundled_queryset()));
    return outcome;
}

}  // namespace serpgauge::pipeline
