#include "serpgauge/engines.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "serpgauge/errors.hpp"
#include "serpgauge/html.hpp"
#include "serpgauge/url.hpp"

namespace serpgauge {

namespace {

using Json = nlohmann::ordered_json;

std::string require_string(const nlohmann::json& object, const std::string& field,
                           const std::string& context) {
    if (!object.contains(field) || !object[field].is_string())
        throw InputError(context + ": missing string field '" + field + "'");
    return object[field].get<std::string>();
}

}  // namespace

std::string serialize_serp(const Serp& serp) {
    Json document;
    document["engine_id"] = serp.engine_id;
    document["query_id"] = serp.query_id;
    document["requested_count"] = serp.requested_count;
    document["retrieved_at_ms"] = serp.retrieved_at_ms;
    Json entries = Json::array();
    for (const auto& entry : serp.entries) {
        Json item;
        item["rank"] = entry.rank;
        item["url"] = entry.url;
        item["title"] = entry.title;
        item["snippet"] = entry.snippet;
        entries.push_back(std::move(item));
    }
    document["entries"] = std::move(entries);
    return document.dump(2) + "\n";
}

Serp parse_serp(std::string_view json_text) {
    nlohmann::json document;
    try {
        document = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& error) {
        throw InputError(std::string("SERP fixture is not valid JSON: ") + error.what());
    }
    Serp serp;
    serp.engine_id = require_string(document, "engine_id", "SERP fixture");
    serp.query_id = require_string(document, "query_id", "SERP fixture");
    if (!document.contains("requested_count") || !document["requested_count"].is_number_integer())
        throw InputError("SERP fixture: missing integer 'requested_count'");
    serp.requested_count = document["requested_count"].get<int>();
    if (document.contains("retrieved_at_ms") && document["retrieved_at_ms"].is_number_integer())
        serp.retrieved_at_ms = document["retrieved_at_ms"].get<std::int64_t>();
    if (!document.contains("entries") || !document["entries"].is_array())
        throw InputError("SERP fixture: missing 'entries' array");
    for (const auto& item : document["entries"]) {
        SerpEntry entry;
        if (!item.contains("rank") || !item["rank"].is_number_integer())
            throw InputError("SERP fixture: entry missing integer 'rank'");
        entry.rank = item["rank"].get<int>();
        entry.url = require_string(item, "url", "SERP fixture entry");
        entry.title = item.value("title", "");
        entry.snippet = item.value("snippet", "");
        serp.entries.push_back(std::move(entry));
    }
    for (std::size_t i = 0; i < serp.entries.size(); ++i) {
        if (serp.entries[i].rank != static_cast<int>(i) + 1)
            throw InputError("SERP fixture for query '" + serp.query_id +
                             "': ranks must be 1..n without gaps");
    }
    if (static_cast<int>(serp.entries.size()) > serp.requested_count)
        throw InputError("SERP fixture for query '" + serp.query_id +
                         "': more entries than requested_count");
    return serp;
}

EngineConfig parse_engine_config(std::string_view json_text) {
    nlohmann::json document;
    try {
        document = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& error) {
        throw InputError(std::string("engine config is not valid JSON: ") + error.what());
    }
    if (!document.is_object()) throw InputError("engine config must be a JSON object");

    static const std::set<std::string> kKnown = {
        "engine_id", "mode",        "url_template",           "rules",
        "min_request_interval_ms",  "max_retries", "timeout_ms"};
    for (const auto& [field, value] : document.items()) {
        (void)value;
        if (!kKnown.count(field))
            throw InputError("engine config: unknown field '" + field + "'");
    }

    EngineConfig config;
    config.engine_id = require_string(document, "engine_id", "engine config");
    const std::string mode = require_string(document, "mode", "engine config");
    if (mode == "live")
        config.mode = EngineConfig::Mode::live;
    else if (mode == "fixture")
        config.mode = EngineConfig::Mode::fixture;
    else
        throw InputError("engine config: mode must be 'live' or 'fixture', got '" + mode + "'");

    if (document.contains("url_template"))
        config.url_template = require_string(document, "url_template", "engine config");
    if (document.contains("rules")) {
        const auto& rules = document["rules"];
        if (!rules.is_object()) throw InputError("engine config: 'rules' must be an object");
        config.rules.result = rules.value("result", "");
        config.rules.link = rules.value("link", "");
        config.rules.title = rules.value("title", "");
        config.rules.snippet = rules.value("snippet", "");
    }
    if (document.contains("min_request_interval_ms"))
        config.min_request_interval_ms = document["min_request_interval_ms"].get<std::int64_t>();
    if (document.contains("max_retries")) config.max_retries = document["max_retries"].get<int>();
    if (document.contains("timeout_ms"))
        config.timeout_ms = document["timeout_ms"].get<std::int64_t>();

    if (config.mode == EngineConfig::Mode::live) {
        if (config.url_template.find("{query}") == std::string::npos)
            throw InputError("engine config '" + config.engine_id +
                             "': live mode needs a url_template containing {query}");
        if (config.rules.result.empty() || config.rules.link.empty())
            throw InputError("engine config '" + config.engine_id +
                             "': live mode needs extraction rules (result, link)");
    }
    return config;
}

std::string serialize_engine_config(const EngineConfig& config) {
    Json document;
    document["engine_id"] = config.engine_id;
    document["mode"] = config.mode == EngineConfig::Mode::live ? "live" : "fixture";
    if (!config.url_template.empty()) document["url_template"] = config.url_template;
    if (!config.rules.result.empty() || !config.rules.link.empty()) {
        Json rules;
        rules["result"] = config.rules.result;
        rules["link"] = config.rules.link;
        rules["title"] = config.rules.title;
        rules["snippet"] = config.rules.snippet;
        document["rules"] = std::move(rules);
    }
    document["min_request_interval_ms"] = config.min_request_interval_ms;
    document["max_retries"] = config.max_retries;
    document["timeout_ms"] = config.timeout_ms;
    return document.dump(2) + "\n";
}

std::vector<EngineConfig> load_engine_configs(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw InputError("engine config directory '" + dir.string() + "' does not exist");
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<EngineConfig> configs;
    std::set<std::string> ids;
    for (const auto& file : files) {
        std::ifstream in(file);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        EngineConfig config;
        try {
            config = parse_engine_config(buffer.str());
        } catch (const InputError& error) {
            throw InputError(file.string() + ": " + error.what());
        }
        if (!ids.insert(config.engine_id).second)
            throw InputError("duplicate engine_id '" + config.engine_id + "' in " + dir.string());
        configs.push_back(std::move(config));
    }
    return configs;
}

std::vector<SerpEntry> extract_entries(const std::string& html_text, const ExtractionRules& rules,
                                       int count, const std::string& base_url) {
    const html::Document document = html::Document::parse(html_text);
    std::vector<SerpEntry> entries;
    for (const int result_index : document.select(rules.result)) {
        if (static_cast<int>(entries.size()) >= count) break;
        const auto links = document.select_within(result_index, rules.link);
        if (links.empty()) continue;
        const html::Node& link = document.node(links.front());
        const std::string* href = link.attr("href");
        if (!href || href->empty()) continue;
        SerpEntry entry;
        try {
            entry.url = resolve_reference(base_url, *href);
        } catch (const InputError&) {
            continue;  // unresolvable href: not a result link
        }
        if (rules.title.empty()) {
            entry.title = document.text_beneath(links.front());
        } else {
            const auto titles = document.select_within(result_index, rules.title);
            if (!titles.empty()) entry.title = document.text_beneath(titles.front());
        }
        if (!rules.snippet.empty()) {
            const auto snippets = document.select_within(result_index, rules.snippet);
            if (!snippets.empty()) entry.snippet = document.text_beneath(snippets.front());
        }
        entry.rank = static_cast<int>(entries.size()) + 1;
        entries.push_back(std::move(entry));
    }
    return entries;
}

Engine::Engine(EngineConfig config, FixtureCache& cache, Clock& clock)
    : config_(std::move(config)),
      cache_(cache),
      clock_(clock),
      http_(clock, [&] {
          HttpOptions options;
          options.timeout_ms = config_.timeout_ms;
          options.max_retries = config_.max_retries;
          return options;
      }()) {}

void Engine::wait_turn() {
    std::lock_guard<std::mutex> lock(throttle_mutex_);
    const std::int64_t now = clock_.now_ms();
    if (last_request_ms_ >= 0) {
        const std::int64_t elapsed = now - last_request_ms_;
        if (elapsed < config_.min_request_interval_ms)
            clock_.sleep_ms(config_.min_request_interval_ms - elapsed);
    }
    last_request_ms_ = clock_.now_ms();
}

Serp Engine::search(std::string_view query_text, std::string_view query_id, int count,
                    std::vector<std::string>* warnings) {
    if (count < 1 || count > 50) throw InputError("search count must lie in [1, 50]");
    if (const auto cached = cache_.load_serp_text(config_.engine_id, query_id))
        return parse_serp(*cached);
    if (config_.mode == EngineConfig::Mode::fixture)
        throw MissingFixtureError(config_.engine_id, std::string(query_id));
    return live_search(query_text, query_id, count, warnings);
}

Serp Engine::live_search(std::string_view query_text, std::string_view query_id, int count,
                         std::vector<std::string>* warnings) {
    std::string url = config_.url_template;
    const std::string encoded = url_encode_component(query_text);
    for (auto at = url.find("{query}"); at != std::string::npos; at = url.find("{query}"))
        url.replace(at, 7, encoded);

    wait_turn();
    const HttpResponse response = http_.get(url);
    Serp serp;
    serp.engine_id = config_.engine_id;
    serp.query_id.assign(query_id);
    serp.requested_count = count;
    serp.retrieved_at_ms = clock_.now_ms();
    serp.entries = extract_entries(response.body, config_.rules, count, response.final_url);
    if (serp.entries.empty() && warnings)
        warnings->push_back("engine '" + config_.engine_id + "' returned an empty SERP for query '" +
                            std::string(query_id) + "'");
    cache_.store_serp_text(config_.engine_id, query_id, serialize_serp(serp));
    // Serve what the cache now holds, so a lost write race still yields the
    // canonical bytes every later call will see.
    return parse_serp(*cache_.load_serp_text(config_.engine_id, query_id));
}

PageRecord Engine::fetch_page(const std::string& url) {
    const std::string normalized = normalize_url(url);
    if (auto cached = cache_.load_page(normalized)) return *cached;
    if (config_.mode == EngineConfig::Mode::fixture)
        throw MissingFixtureError(config_.engine_id, "page " + normalized);

    wait_turn();
    const HttpResponse response = http_.get(normalized);
    PageRecord record;
    record.url = normalized;
    record.final_url = response.final_url;
    record.status = response.status;
    record.retrieved_at_ms = clock_.now_ms();
    record.body = response.body;
    cache_.store_page(record);
    return *cache_.load_page(normalized);
}

RecordSummary record_fixtures(Engine& engine, const std::vector<RecordQuery>& queries, int count) {
    RecordSummary summary;
    for (const auto& query : queries) {
        Serp serp;
        try {
            serp = engine.search(query.query_text, query.query_id, count, &summary.errors);
            ++summary.serps;
        } catch (const Error& error) {
            ++summary.failures;
            summary.errors.push_back("serp " + query.query_id + ": " + error.what());
            continue;
        }
        for (const auto& entry : serp.entries) {
            try {
                engine.fetch_page(entry.url);
                ++summary.pages;
            } catch (const Error& error) {
                ++summary.failures;
                summary.errors.push_back("page " + entry.url + ": " + error.what());
            }
        }
    }
    return summary;
}

}  // namespace serpgauge
