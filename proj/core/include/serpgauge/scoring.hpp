#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "serpgauge/queryset.hpp"
#include "serpgauge/textproc.hpp"

namespace serpgauge::scoring {

enum class FeatureKind {
    descriptive_term,
    exclusive_term,
    doc_length,
    url_depth,
    readability,
    shallow_marker,
};

// How a feature turns its observation into X: raw occurrence count, or 1/0
// band membership against the universal-set distribution.
enum class XMode { binary_band, raw_count };

struct ThetaDistribution {
    std::vector<double> samples;  // one observation per universal-set member
    double lo = 0.0;              // band lower bound
    double hi = 0.0;              // band upper bound
    double total = 0.0;           // sum of samples
};

struct FeatureNode {
    FeatureKind kind = FeatureKind::descriptive_term;
    textproc::Part part = textproc::Part::body;
    std::string metric;  // term or marker text; empty for doc-shape features
    XMode x_mode = XMode::binary_band;
    ThetaDistribution theta;
};

// Document -> part -> feature tree with per-part importance. One network per
// query, built from that query's universal set.
struct DecisionNetwork {
    std::string query_id;
    std::array<double, textproc::kAllParts.size()> part_importance{};
    std::vector<FeatureNode> features;

    double importance(textproc::Part part) const {
        return part_importance[static_cast<std::size_t>(part)];
    }
};

// No importance values are prescribed anywhere, so these defaults encode the
// usual intuition: title > url = headings > anchors > meta = body.
std::array<double, textproc::kAllParts.size()> default_part_importance();

// Applies query-set v_overrides (part name -> importance) over the defaults.
std::array<double, textproc::kAllParts.size()> part_importance_with_overrides(
    const std::map<std::string, double>& overrides);

struct NetworkOptions {
    std::array<double, textproc::kAllParts.size()> part_importance = default_part_importance();
    std::vector<std::string> markers;  // optional shallow marker features
};

// Builds the per-query network: term features for every (part, term) pair seen
// anywhere in U, doc-shape features on the body and url parts, and band and
// total statistics from U. Terms are taken from the query as given; callers
// apply bigram enrichment beforehand. Throws InputError when |U| < 3.
DecisionNetwork build_theta(const std::vector<textproc::SegmentedDocument>& universe,
                            const queryset::QuerySpec& query, const NetworkOptions& options = {});

// The candidate-side observation behind a feature: occurrence count for term
// features, document-shape value otherwise.
double feature_observation(const FeatureNode& node, const textproc::SegmentedDocument& document);

double feature_value(const FeatureNode& node, const textproc::SegmentedDocument& document);

// Observation normalized by the universal-set total; 0 when the total is 0.
double feature_weight(const FeatureNode& node, const textproc::SegmentedDocument& document);

// Sum of value * weight * part importance over all features.
double doc_relevancy_score(const DecisionNetwork& network,
                           const textproc::SegmentedDocument& document);

// Linear model feature families. One family per document part (the part's
// share of the relevancy score), three document-shape families, and the
// expected-URL match flag. The reserved ids name shallow signals that would
// need third-party services; they are registered but never computed, and a
// model referencing them scores them as 0 with a warning.
const std::vector<std::string>& feature_family_ids();
const std::vector<std::string>& reserved_family_ids();
bool family_registered(std::string_view id);

struct LinearScoreModel {
    std::map<std::string, double> lambda;
    double z = 0.0;
};

// Coefficient 1 on every part family: the resulting score equals
// doc_relevancy_score, which keeps the two scoring paths interchangeable.
LinearScoreModel unit_network_model();

std::map<std::string, double> feature_families(const DecisionNetwork& network,
                                               const textproc::SegmentedDocument& document,
                                               bool expected_url_match);

// Dot product plus intercept. Families named by the model but absent from the
// feature map contribute 0 and add a warning. Unregistered ids on either side
// throw InputError.
double linear_score(const LinearScoreModel& model, const std::map<std::string, double>& features,
                    std::vector<std::string>* warnings = nullptr);

struct LabeledCandidate {
    std::map<std::string, double> features;
    int grade = 0;
};

struct TuneOptions {
    int max_sweeps = 50;
    double min_improvement = 1e-4;
    int restarts = 5;
};

struct TuneResult {
    LinearScoreModel model;
    double e_train = 0.0;
    int iterations = 0;  // coordinate sweeps summed over restarts
    std::uint64_t seed = 0;
};

// Rank agreement for one query: concordant minus discordant score/grade pairs
// over the number of grade-distinct pairs. NaN when no pair is comparable.
double rank_agreement(const std::vector<double>& scores, const std::vector<int>& grades);

// Mean rank agreement over queries, skipping queries without comparable
// pairs. Throws InputError when nothing is comparable anywhere.
double mean_agreement(const std::vector<std::vector<LabeledCandidate>>& queries,
                      const LinearScoreModel& model);

// Coordinate ascent on the model coefficients (intercept pinned at 0; it
// cannot move within-query order). Each coordinate scans {0} plus a log grid
// up to 10; sweeps stop on < min_improvement gain or at max_sweeps; seeded
// random restarts run after the initial model, which always competes, so the
// result never falls below it. Deterministic for a fixed seed.
TuneResult tune_lambda(const std::vector<std::vector<LabeledCandidate>>& queries,
                       const LinearScoreModel& initial, std::uint64_t seed,
                       const TuneOptions& options = {});

enum class Relevance { relevant, uncertain, irrelevant };
std::string_view relevance_name(Relevance relevance);

struct RelevanceThresholds {
    double hi = 0.5;  // relevant at score >= hi * baseline
    double lo = 0.2;  // irrelevant below lo * baseline
};

struct RelevanceOutcome {
    Relevance relevance = Relevance::uncertain;
    double baseline = 0.0;  // median universal-set self-score
    bool degenerate = false;
};

// Self-scores of the universal set calibrate what "as relevant as U" means:
// each member is scored by a network built from the others.
std::vector<double> loo_self_scores(const std::vector<textproc::SegmentedDocument>& universe,
                                    const queryset::QuerySpec& query,
                                    const NetworkOptions& options = {});

// Thresholds the candidate score against the median self-score. A baseline of
// 0 carries no signal: the outcome degrades to uncertain for positive scores
// and irrelevant otherwise, flagged as degenerate.
RelevanceOutcome relevance_decision(double score, const std::vector<double>& u_self_scores,
                                    const RelevanceThresholds& thresholds = {});

struct StoredModel {
    LinearScoreModel model;
    double e_train = 0.0;
    std::uint64_t seed = 0;
};

// lambda.json round-trip. parse_model validates family ids against the
// registry.
std::string serialize_model(const StoredModel& stored);
StoredModel parse_model(std::string_view json_text);

}  // namespace serpgauge::scoring
