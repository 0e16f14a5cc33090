#pragma once

#include <optional>
#include <string>
#include <vector>

#include "serpgauge/scoring.hpp"

namespace serpgauge::metrics {

struct JudgedEntry {
    int rank = 0;
    scoring::Relevance judgment = scoring::Relevance::uncertain;
};

struct JudgedSerp {
    std::string query_id;
    std::string engine_id;
    std::vector<JudgedEntry> entries;  // ranks must be 1..n, in order
};

// Throws InputError unless entry ranks are exactly 1..n in order.
void check_ranks(const JudgedSerp& serp);

// 1/r for the best-ranked relevant entry; 0 when none is relevant.
double reciprocal_rank(const JudgedSerp& serp);

// Like reciprocal_rank, but a judged-irrelevant entry ahead of the first
// relevant one costs the whole query: the score becomes -1. Uncertain entries
// are neutral and never trigger the penalty.
double signed_reciprocal_rank(const JudgedSerp& serp);

// 1 iff a relevant entry sits within the top k.
int accuracy_at_k(const JudgedSerp& serp, int k = 10);

// Fraction of the returned top-k entries that are relevant (denominator is
// the number of entries actually present, capped at k). Empty SERP scores 0.
double probe_pass_rate(const JudgedSerp& serp, int k = 10);

// One evaluated query. Order-based metrics are meaningless for analyzer
// probes (their judgment is a set property), so they stay unset there, and
// pass_rate stays unset for rank-quality queries.
struct QueryScore {
    std::string query_id;
    std::string engine_id;
    std::string domain_path;
    double accuracy = 0.0;  // 0 or 1 per query
    std::optional<double> mrr;
    std::optional<double> signed_mrr;
    std::optional<double> pass_rate;
};

struct DomainScore {
    std::string domain_path;
    std::string engine_id;
    int n_queries = 0;
    double accuracy = 0.0;
    std::optional<double> mrr;
    std::optional<double> signed_mrr;
    std::optional<double> pass_rate;

    friend bool operator==(const DomainScore&, const DomainScore&) = default;
};

struct ComponentScore {
    std::string component;
    std::string engine_id;
    int n_leaves = 0;
    int n_queries = 0;
    double accuracy = 0.0;
    std::optional<double> mrr;
    std::optional<double> signed_mrr;
    std::optional<double> pass_rate;
    // The single number a component comparison uses: pass_rate where probes
    // ran, reciprocal rank for rank-quality domains.
    double headline = 0.0;

    friend bool operator==(const ComponentScore&, const ComponentScore&) = default;
};

struct AggregateResult {
    std::vector<DomainScore> domains;        // ordered by path, then engine
    std::vector<ComponentScore> components;  // taxonomy order, then engine
    std::vector<std::string> warnings;
};

// Leaf score = unweighted mean over its queries; component score = unweighted
// mean over its leaves, so heavily probed leaves do not dominate. Supported
// taxonomy leaves that received no queries are omitted with a warning.
AggregateResult aggregate(const std::vector<QueryScore>& rows);

}  // namespace serpgauge::metrics
