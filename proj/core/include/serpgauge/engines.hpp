#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "serpgauge/cache.hpp"
#include "serpgauge/http.hpp"

namespace serpgauge {

struct SerpEntry {
    int rank = 0;  // 1-based, contiguous within a SERP
    std::string url;
    std::string title;
    std::string snippet;
};

struct Serp {
    std::string engine_id;
    std::string query_id;
    int requested_count = 0;
    std::vector<SerpEntry> entries;
    std::int64_t retrieved_at_ms = 0;
};

// Stable field order; fixtures must be byte-reproducible.
std::string serialize_serp(const Serp& serp);
Serp parse_serp(std::string_view json_text);  // throws InputError, checks rank contiguity

// CSS-subset selectors, applied to the result page. link/title/snippet are
// evaluated inside each result match; link names an element whose href is the
// entry URL.
struct ExtractionRules {
    std::string result;
    std::string link;
    std::string title;
    std::string snippet;
};

struct EngineConfig {
    std::string engine_id;
    enum class Mode { live, fixture };
    Mode mode = Mode::fixture;
    std::string url_template;  // contains {query}
    ExtractionRules rules;
    std::int64_t min_request_interval_ms = 2000;
    int max_retries = 3;
    std::int64_t timeout_ms = 15000;
};

EngineConfig parse_engine_config(std::string_view json_text);  // throws InputError
std::string serialize_engine_config(const EngineConfig& config);

// Loads every *.json under the directory, sorted by filename. Duplicate
// engine ids are rejected.
std::vector<EngineConfig> load_engine_configs(const std::filesystem::path& dir);

// One engine adapter, shared by all workers so request spacing holds
// globally. Both modes read through the cache; live mode fills misses over
// the network, fixture mode turns them into MissingFixtureError.
class Engine {
public:
    Engine(EngineConfig config, FixtureCache& cache, Clock& clock);

    const EngineConfig& config() const { return config_; }

    // count must lie in [1, 50]. An extraction yielding zero entries is a
    // warning, not an error.
    Serp search(std::string_view query_text, std::string_view query_id, int count,
                std::vector<std::string>* warnings = nullptr);

    // Cache-first page load keyed by normalized URL.
    PageRecord fetch_page(const std::string& url);

private:
    Serp live_search(std::string_view query_text, std::string_view query_id, int count,
                     std::vector<std::string>* warnings);
    void wait_turn();

    EngineConfig config_;
    FixtureCache& cache_;
    Clock& clock_;
    HttpClient http_;
    std::mutex throttle_mutex_;
    std::int64_t last_request_ms_ = -1;
};

struct RecordSummary {
    int serps = 0;     // SERPs now present (fetched or already cached)
    int pages = 0;     // pages now present
    int failures = 0;  // items that errored
    std::vector<std::string> errors;
};

struct RecordQuery {
    std::string query_id;
    std::string query_text;
};

// Fills the cache for every query and every referenced page. Warm entries are
// skipped; per-item failures are collected, never fatal.
RecordSummary record_fixtures(Engine& engine, const std::vector<RecordQuery>& queries, int count);

// Extracts SERP entries from a result page using the engine's rules.
std::vector<SerpEntry> extract_entries(const std::string& html_text, const ExtractionRules& rules,
                                       int count, const std::string& base_url);

}  // namespace serpgauge
