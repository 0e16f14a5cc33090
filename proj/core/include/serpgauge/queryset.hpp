#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace serpgauge::queryset {

// The evaluation-domain tree is fixed so that domain scores stay comparable
// across query-sets; query files reference it by leaf path only.
struct DomainNode {
    std::string path;       // "normalizer/numbers/cardinal"; "" for the root
    std::string label;
    std::string component;  // owning search-engine component id
    bool supported = true;  // a leaf can be listed yet not evaluable
    std::vector<DomainNode> children;

    bool is_leaf() const { return children.empty(); }
};

const DomainNode& taxonomy();
const DomainNode* find_domain(std::string_view path);  // nullptr when absent
const std::vector<std::string>& component_ids();

// Leaf paths in document order; component "all" enumerates every component.
// Throws InputError for an unknown component id.
std::vector<std::string> taxonomy_leaves(std::string_view component = "all");

enum class QueryType {
    navigational,
    trend_single_url,
    known_item,
    semi_informational,
    analyzer_probe,
};

std::string_view query_type_name(QueryType type);
QueryType query_type_from_name(std::string_view name);  // throws InputError

struct QuerySpec {
    std::string query_id;
    std::string component;
    std::string domain_path;
    std::string query_text;
    QueryType query_type = QueryType::analyzer_probe;
    std::vector<std::string> descriptive_terms;
    std::vector<std::string> exclusive_terms;
    // Surface forms a correct result must exhibit; drives analyzer probes.
    std::vector<std::string> evidence_terms;
    // Required for navigational / trend_single_url queries.
    std::vector<std::string> expected_urls;
    // Universal set authored with the query; required for known_item /
    // semi_informational queries.
    std::vector<std::string> u_set;
};

struct QuerySet {
    int version = 1;
    std::vector<QuerySpec> queries;
    // Optional per-part importance overrides applied when scoring documents.
    std::map<std::string, double> v_overrides;
};

struct Violation {
    std::string query_id;  // empty for file-level problems
    std::string field;
    std::string message;
};

struct ValidatedQuerySet {
    QuerySet set;
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
};

// Parses and checks a query-set document. Collects every violation instead of
// stopping at the first; throws InputError only when the text is not valid
// JSON of the documented shape.
ValidatedQuerySet validate_queryset(std::string_view json_text);

std::string serialize_queryset(const QuerySet& set);

// Appends the adjacent-token bigrams of every multi-token descriptive and
// exclusive term. Duplicates (by normalized token join) are skipped, so the
// operation is idempotent.
QuerySpec enrich_bigrams(const QuerySpec& query);

struct SampleSizeRequest {
    double confidence = 0.95;  // in (0, 1)
    double margin = 0.05;      // in (0, 0.5]
    double proportion = 0.5;   // in (0, 1)
};

// Smallest test-set size whose estimate of a proportion stays within the
// margin at the given confidence. Throws std::invalid_argument out of range.
int required_sample_size(const SampleSizeRequest& request);

// Expert grades: 0 irrelevant .. 3 perfect; >= kRelevantGradeMin counts as
// relevant for binary metrics.
inline constexpr int kGradeMin = 0;
inline constexpr int kGradeMax = 3;
inline constexpr int kRelevantGradeMin = 2;

struct ExpertLabel {
    std::string query_id;
    std::string url;
    int grade = 0;
};

struct ExpertLabelSet {
    std::vector<ExpertLabel> labels;

    // Lookup by query id and normalized URL; nullptr when unlabeled.
    const ExpertLabel* find(std::string_view query_id, std::string_view url) const;
};

// Parses tab-separated "query_id<TAB>url<TAB>grade" lines (no header).
// Throws InputError on malformed lines, out-of-range grades, or duplicate
// (query_id, url) pairs.
ExpertLabelSet parse_labels(std::string_view tsv_text);

// Every label must reference a known query id.
std::vector<Violation> validate_labels(const ExpertLabelSet& labels, const QuerySet& set);

}  // namespace serpgauge::queryset
