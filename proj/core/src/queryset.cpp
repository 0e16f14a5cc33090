#include "serpgauge/queryset.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "serpgauge/errors.hpp"
#include "serpgauge/stats.hpp"
#include "serpgauge/textproc.hpp"
#include "serpgauge/url.hpp"

namespace serpgauge::queryset {

namespace {

DomainNode leaf(std::string path, std::string label, std::string component, bool supported = true) {
    DomainNode node;
    node.path = std::move(path);
    node.label = std::move(label);
    node.component = std::move(component);
    node.supported = supported;
    return node;
}

DomainNode group(std::string path, std::string label, std::string component,
                 std::vector<DomainNode> children) {
    DomainNode node = leaf(std::move(path), std::move(label), std::move(component));
    node.children = std::move(children);
    return node;
}

DomainNode build_taxonomy() {
    DomainNode root;
    root.label = "search engine";
    root.children.push_back(group(
        "normalizer", "Text normalizer", "normalizer",
        {
            group("normalizer/numbers", "Numbers and their written forms", "normalizer",
                  {
                      leaf("normalizer/numbers/cardinal", "Cardinal numbers", "normalizer"),
                      leaf("normalizer/numbers/ordinal", "Ordinal numbers", "normalizer"),
                      leaf("normalizer/numbers/cost_benefit", "Costs and benefits", "normalizer"),
                      leaf("normalizer/numbers/time", "Times", "normalizer"),
                      leaf("normalizer/numbers/date", "Dates", "normalizer"),
                      leaf("normalizer/numbers/population", "Population figures", "normalizer"),
                  }),
            group("normalizer/written_forms", "Words with multiple written forms", "normalizer",
                  {
                      leaf("normalizer/written_forms/hamzeh", "Hamzeh-based forms", "normalizer"),
                      leaf("normalizer/written_forms/char_repetition",
                           "Character repetitions with similar sounds", "normalizer"),
                      leaf("normalizer/written_forms/char_position",
                           "Initial, centric and final character forms", "normalizer"),
                  }),
            group("normalizer/homophones", "Same sound, different spellings", "normalizer",
                  {
                      leaf("normalizer/homophones/all_live", "All spellings in use", "normalizer"),
                      leaf("normalizer/homophones/one_live", "One spelling in use", "normalizer"),
                  }),
        }));
    root.children.push_back(group(
        "tokenizer", "Text tokenizer", "tokenizer",
        {
            leaf("tokenizer/joint_terms", "Terms joined without a separator", "tokenizer"),
            group("tokenizer/phrases", "Phrase detection", "tokenizer",
                  {
                      leaf("tokenizer/phrases/two_part_verbs", "Two-part verbs", "tokenizer"),
                      leaf("tokenizer/phrases/multi_part_verbs",
                           "Multi-part verbs carrying a plural suffix", "tokenizer"),
                      leaf("tokenizer/phrases/named_entities",
                           "Named entities prefixed by identifiers", "tokenizer"),
                  }),
        }));
    root.children.push_back(
        group("spell_correction", "Spell correction", "spell_correction",
              {
                  leaf("spell_correction/lexicon", "Lexicon", "spell_correction"),
                  leaf("spell_correction/inflection", "Inflection", "spell_correction"),
                  leaf("spell_correction/homonyms", "Homonyms", "spell_correction"),
                  leaf("spell_correction/word_frequency", "Word frequency", "spell_correction"),
                  leaf("spell_correction/keyboard_order", "Keyboard order", "spell_correction"),
              }));
    root.children.push_back(group(
        "query_expansion", "Query expansion", "query_expansion",
        {
            leaf("query_expansion/synonyms", "Synonyms", "query_expansion"),
            leaf("query_expansion/abbreviations", "Abbreviations", "query_expansion"),
            // Listed for completeness; no evaluation mechanics exist for it.
            leaf("query_expansion/punctuations", "Punctuations", "query_expansion", false),
        }));
    root.children.push_back(
        group("ranking", "Ranking", "ranking",
              {
                  leaf("ranking/navigational", "Navigational queries", "ranking"),
                  leaf("ranking/trend_single_url", "Trends with a single URL", "ranking"),
                  leaf("ranking/known_items", "Known items", "ranking"),
              }));
    return root;
}

void index_paths(const DomainNode& node, std::map<std::string, const DomainNode*>& index) {
    if (!node.path.empty()) index[node.path] = &node;
    for (const auto& child : node.children) index_paths(child, index);
}

const std::map<std::string, const DomainNode*>& path_index() {
    static const std::map<std::string, const DomainNode*> index = [] {
        std::map<std::string, const DomainNode*> out;
        index_paths(taxonomy(), out);
        return out;
    }();
    return index;
}

void collect_leaves(const DomainNode& node, std::string_view component,
                    std::vector<std::string>& out) {
    if (node.is_leaf() && !node.path.empty()) {
        if (component == "all" || node.component == component) out.push_back(node.path);
        return;
    }
    for (const auto& child : node.children) collect_leaves(child, component, out);
}

std::string token_key(std::string_view text) {
    const auto tokens = textproc::normalize_text(text).tokens;
    std::string key;
    for (const auto& token : tokens) {
        if (!key.empty()) key.push_back('\x1f');
        key.append(token);
    }
    return key;
}

void enrich_list(std::vector<std::string>& terms) {
    std::set<std::string> seen;
    for (const auto& term : terms) seen.insert(token_key(term));
    const std::size_t original_count = terms.size();
    for (std::size_t i = 0; i < original_count; ++i) {
        const auto tokens = textproc::normalize_text(terms[i]).tokens;
        for (std::size_t j = 0; j + 1 < tokens.size(); ++j) {
            const std::string bigram = tokens[j] + " " + tokens[j + 1];
            if (seen.insert(token_key(bigram)).second) terms.push_back(bigram);
        }
    }
}

using Json = nlohmann::ordered_json;

std::vector<std::string> string_list(const Json& value, const std::string& query_id,
                                     const std::string& field, std::vector<Violation>& out) {
    std::vector<std::string> list;
    if (!value.is_array()) {
        out.push_back({query_id, field, "expected an array of strings"});
        return list;
    }
    for (const auto& item : value) {
        if (!item.is_string()) {
            out.push_back({query_id, field, "expected an array of strings"});
            return {};
        }
        list.push_back(item.get<std::string>());
    }
    return list;
}

void check_urls(const std::vector<std::string>& urls, const std::string& query_id,
                const std::string& field, std::vector<Violation>& out) {
    for (const auto& url : urls) {
        try {
            normalize_url(url);
        } catch (const InputError& error) {
            out.push_back({query_id, field, std::string("malformed URL: ") + error.what()});
        }
    }
}

std::string label_key(std::string_view query_id, std::string_view url) {
    std::string normalized;
    try {
        normalized = normalize_url(url);
    } catch (const InputError&) {
        normalized.assign(url);
    }
    return std::string(query_id) + "\x1f" + normalized;
}

}  // namespace

const DomainNode& taxonomy() {
    static const DomainNode root = build_taxonomy();
    return root;
}

const DomainNode* find_domain(std::string_view path) {
    const auto& index = path_index();
    const auto it = index.find(std::string(path));
    return it == index.end() ? nullptr : it->second;
}

const std::vector<std::string>& component_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> out;
        for (const auto& child : taxonomy().children) out.push_back(child.path);
        return out;
    }();
    return ids;
}

std::vector<std::string> taxonomy_leaves(std::string_view component) {
    if (component != "all") {
        const auto& ids = component_ids();
        if (std::find(ids.begin(), ids.end(), component) == ids.end())
            throw InputError("unknown component '" + std::string(component) + "'");
    }
    std::vector<std::string> out;
    collect_leaves(taxonomy(), component, out);
    return out;
}

std::string_view query_type_name(QueryType type) {
    switch (type) {
        case QueryType::navigational:
            return "navigational";
        case QueryType::trend_single_url:
            return "trend_single_url";
        case QueryType::known_item:
            return "known_item";
        case QueryType::semi_informational:
            return "semi_informational";
        case QueryType::analyzer_probe:
            return "analyzer_probe";
    }
    return "";
}

QueryType query_type_from_name(std::string_view name) {
    for (const auto type :
         {QueryType::navigational, QueryType::trend_single_url, QueryType::known_item,
          QueryType::semi_informational, QueryType::analyzer_probe}) {
        if (query_type_name(type) == name) return type;
    }
    throw InputError("unknown query_type '" + std::string(name) + "'");
}

ValidatedQuerySet validate_queryset(std::string_view json_text) {
    Json document;
    try {
        document = Json::parse(json_text);
    } catch (const nlohmann::json::exception& error) {
        throw InputError(std::string("query-set file is not valid JSON: ") + error.what());
    }
    if (!document.is_object()) throw InputError("query-set file must be a JSON object");

    ValidatedQuerySet result;
    auto& violations = result.violations;

    if (!document.contains("version") || !document["version"].is_number_integer()) {
        violations.push_back({"", "version", "missing integer field"});
    } else {
        result.set.version = document["version"].get<int>();
        if (result.set.version != 1)
            violations.push_back({"", "version",
                                  "unsupported version " + std::to_string(result.set.version)});
    }

    if (document.contains("v_overrides")) {
        const auto& overrides = document["v_overrides"];
        if (!overrides.is_object()) {
            violations.push_back({"", "v_overrides", "expected an object of part -> number"});
        } else {
            for (const auto& [part, value] : overrides.items()) {
                bool known = true;
                try {
                    textproc::part_from_name(part);
                } catch (const InputError&) {
                    known = false;
                    violations.push_back({"", "v_overrides", "unknown document part '" + part + "'"});
                }
                if (!value.is_number() || value.get<double>() < 0.0 ||
                    !std::isfinite(value.get<double>())) {
                    violations.push_back(
                        {"", "v_overrides", "importance for '" + part + "' must be a number >= 0"});
                } else if (known) {
                    result.set.v_overrides[part] = value.get<double>();
                }
            }
        }
    }

    if (!document.contains("queries") || !document["queries"].is_array())
        throw InputError("query-set file must carry a 'queries' array");

    static const std::set<std::string> kKnownFields = {
        "query_id",       "component",      "domain_path",    "query_text", "query_type",
        "descriptive_terms", "exclusive_terms", "evidence_terms", "expected_urls", "u_set"};

    std::set<std::string> seen_ids;
    for (const auto& entry : document["queries"]) {
        if (!entry.is_object()) {
            violations.push_back({"", "queries", "query entries must be objects"});
            continue;
        }
        QuerySpec query;
        const std::string query_id =
            entry.contains("query_id") && entry["query_id"].is_string()
                ? entry["query_id"].get<std::string>()
                : "";
        query.query_id = query_id;
        if (query_id.empty()) {
            violations.push_back({query_id, "query_id", "missing or empty"});
        } else if (!seen_ids.insert(query_id).second) {
            violations.push_back({query_id, "query_id", "duplicate query_id"});
        }

        for (const auto& [field, value] : entry.items()) {
            if (!kKnownFields.count(field))
                violations.push_back({query_id, field, "unknown field"});
            (void)value;
        }

        if (entry.contains("query_text") && entry["query_text"].is_string())
            query.query_text = entry["query_text"].get<std::string>();
        if (query.query_text.empty())
            violations.push_back({query_id, "query_text", "missing or empty"});

        bool type_known = false;
        if (entry.contains("query_type") && entry["query_type"].is_string()) {
            try {
                query.query_type = query_type_from_name(entry["query_type"].get<std::string>());
                type_known = true;
            } catch (const InputError& error) {
                violations.push_back({query_id, "query_type", error.what()});
            }
        } else {
            violations.push_back({query_id, "query_type", "missing"});
        }

        if (entry.contains("component") && entry["component"].is_string())
            query.component = entry["component"].get<std::string>();
        if (entry.contains("domain_path") && entry["domain_path"].is_string())
            query.domain_path = entry["domain_path"].get<std::string>();
        const DomainNode* domain = find_domain(query.domain_path);
        if (!domain) {
            violations.push_back({query_id, "domain_path",
                                  "unknown domain_path '" + query.domain_path + "'"});
        } else if (!domain->is_leaf()) {
            violations.push_back(
                {query_id, "domain_path", "'" + query.domain_path + "' is not a leaf domain"});
        } else if (!domain->supported) {
            violations.push_back({query_id, "domain_path",
                                  "domain '" + query.domain_path +
                                      "' is not supported for evaluation"});
        } else if (query.component != domain->component) {
            violations.push_back({query_id, "component",
                                  "component '" + query.component + "' does not own domain '" +
                                      query.domain_path + "'"});
        }

        if (entry.contains("descriptive_terms"))
            query.descriptive_terms =
                string_list(entry["descriptive_terms"], query_id, "descriptive_terms", violations);
        if (entry.contains("exclusive_terms"))
            query.exclusive_terms =
                string_list(entry["exclusive_terms"], query_id, "exclusive_terms", violations);
        if (entry.contains("evidence_terms"))
            query.evidence_terms =
                string_list(entry["evidence_terms"], query_id, "evidence_terms", violations);
        if (entry.contains("expected_urls"))
            query.expected_urls =
                string_list(entry["expected_urls"], query_id, "expected_urls", violations);
        if (entry.contains("u_set"))
            query.u_set = string_list(entry["u_set"], query_id, "u_set", violations);

        check_urls(query.expected_urls, query_id, "expected_urls", violations);
        check_urls(query.u_set, query_id, "u_set", violations);

        if (type_known) {
            const bool wants_expected = query.query_type == QueryType::navigational ||
                                        query.query_type == QueryType::trend_single_url;
            const bool wants_u_set = query.query_type == QueryType::known_item ||
                                     query.query_type == QueryType::semi_informational;
            if (wants_expected && query.expected_urls.empty())
                violations.push_back({query_id, "expected_urls",
                                      "expected_urls required for this query_type"});
            if (!wants_expected && !query.expected_urls.empty())
                violations.push_back({query_id, "expected_urls",
                                      "expected_urls only apply to navigational and "
                                      "trend_single_url queries"});
            if (wants_u_set && query.u_set.size() < 3)
                violations.push_back(
                    {query_id, "u_set", "at least 3 u_set URLs required for this query_type"});
            if (!wants_u_set && !query.u_set.empty())
                violations.push_back({query_id, "u_set",
                                      "u_set only applies to known_item and "
                                      "semi_informational queries"});
            if (query.query_type == QueryType::analyzer_probe && query.evidence_terms.empty())
                violations.push_back(
                    {query_id, "evidence_terms", "at least one evidence term required for probes"});
        }
        result.set.queries.push_back(std::move(query));
    }
    return result;
}

std::string serialize_queryset(const QuerySet& set) {
    Json document;
    document["version"] = set.version;
    if (!set.v_overrides.empty()) {
        Json overrides = Json::object();
        for (const auto& [part, value] : set.v_overrides) overrides[part] = value;
        document["v_overrides"] = overrides;
    }
    Json queries = Json::array();
    for (const auto& query : set.queries) {
        Json entry;
        entry["query_id"] = query.query_id;
        entry["component"] = query.component;
        entry["domain_path"] = query.domain_path;
        entry["query_text"] = query.query_text;
        entry["query_type"] = std::string(query_type_name(query.query_type));
        entry["descriptive_terms"] = query.descriptive_terms;
        entry["exclusive_terms"] = query.exclusive_terms;
        entry["evidence_terms"] = query.evidence_terms;
        entry["expected_urls"] = query.expected_urls;
        entry["u_set"] = query.u_set;
        queries.push_back(std::move(entry));
    }
    document["queries"] = std::move(queries);
    return document.dump(2) + "\n";
}

QuerySpec enrich_bigrams(const QuerySpec& query) {
    QuerySpec out = query;
    enrich_list(out.descriptive_terms);
    enrich_list(out.exclusive_terms);
    return out;
}

int required_sample_size(const SampleSizeRequest& request) {
    if (!(request.confidence > 0.0 && request.confidence < 1.0))
        throw std::invalid_argument("confidence must lie in (0, 1)");
    if (!(request.margin > 0.0 && request.margin <= 0.5))
        throw std::invalid_argument("margin of error must lie in (0, 0.5]");
    if (!(request.proportion > 0.0 && request.proportion < 1.0))
        throw std::invalid_argument("proportion must lie in (0, 1)");
    const double z = stats::two_sided_z(request.confidence);
    const double n =
        z * z * request.proportion * (1.0 - request.proportion) / (request.margin * request.margin);
    return static_cast<int>(std::ceil(n));
}

const ExpertLabel* ExpertLabelSet::find(std::string_view query_id, std::string_view url) const {
    const std::string wanted = label_key(query_id, url);
    for (const auto& label : labels) {
        if (label_key(label.query_id, label.url) == wanted) return &label;
    }
    return nullptr;
}

ExpertLabelSet parse_labels(std::string_view tsv_text) {
    ExpertLabelSet out;
    std::set<std::string> seen;
    std::istringstream lines{std::string(tsv_text)};
    std::string line;
    int line_number = 0;
    while (std::getline(lines, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto first_tab = line.find('\t');
        const auto second_tab =
            first_tab == std::string::npos ? std::string::npos : line.find('\t', first_tab + 1);
        if (second_tab == std::string::npos || line.find('\t', second_tab + 1) != std::string::npos)
            throw InputError("labels line " + std::to_string(line_number) +
                             ": expected query_id<TAB>url<TAB>grade");
        ExpertLabel label;
        label.query_id = line.substr(0, first_tab);
        label.url = line.substr(first_tab + 1, second_tab - first_tab - 1);
        const std::string grade_text = line.substr(second_tab + 1);
        try {
            std::size_t used = 0;
            label.grade = std::stoi(grade_text, &used);
            if (used != grade_text.size()) throw std::invalid_argument(grade_text);
        } catch (const std::exception&) {
            throw InputError("labels line " + std::to_string(line_number) + ": grade '" +
                             grade_text + "' is not an integer");
        }
        if (label.grade < kGradeMin || label.grade > kGradeMax)
            throw InputError("labels line " + std::to_string(line_number) + ": grade must be " +
                             std::to_string(kGradeMin) + ".." + std::to_string(kGradeMax));
        if (label.query_id.empty() || label.url.empty())
            throw InputError("labels line " + std::to_string(line_number) +
                             ": query_id and url must be non-empty");
        if (!seen.insert(label_key(label.query_id, label.url)).second)
            throw InputError("labels line " + std::to_string(line_number) + ": duplicate (" +
                             label.query_id + ", " + label.url + ")");
        out.labels.push_back(std::move(label));
    }
    return out;
}

std::vector<Violation> validate_labels(const ExpertLabelSet& labels, const QuerySet& set) {
    std::set<std::string> ids;
    for (const auto& query : set.queries) ids.insert(query.query_id);
    std::vector<Violation> out;
    for (const auto& label : labels.labels) {
        if (!ids.count(label.query_id))
            out.push_back({label.query_id, "query_id",
                           "label references unknown query_id '" + label.query_id + "'"});
    }
    return out;
}

}  // namespace serpgauge::queryset
