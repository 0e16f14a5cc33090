#include "serpgauge/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <json.hpp>

#include "serpgauge/errors.hpp"
#include "serpgauge/rng.hpp"

namespace serpgauge::scoring {

namespace {

using textproc::Part;
using textproc::SegmentedDocument;

constexpr std::size_t kPartCount = textproc::kAllParts.size();

// Band over the universal-set samples: [min, max] for small sets, and the
// nearest-rank 10th..90th percentile once there are enough members for the
// extremes to be outliers rather than the distribution.
void assign_band(ThetaDistribution& theta) {
    if (theta.samples.empty()) {
        theta.lo = theta.hi = 0.0;
        return;
    }
    std::vector<double> sorted = theta.samples;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    if (n >= 10) {
        const auto rank = [n](double pct) {
            const auto r = static_cast<std::size_t>(std::ceil(pct * static_cast<double>(n)));
            return (r == 0 ? 1 : r) - 1;
        };
        theta.lo = sorted[rank(0.10)];
        theta.hi = sorted[rank(0.90)];
    } else {
        theta.lo = sorted.front();
        theta.hi = sorted.back();
    }
}

double readability_of(const SegmentedDocument& document) {
    return textproc::shallow_features(document).at("readability");
}

double term_count(const SegmentedDocument& document, Part part, const std::string& term) {
    try {
        return static_cast<double>(textproc::count_occurrences(document.part(part), term));
    } catch (const std::invalid_argument&) {
        return 0.0;
    }
}

ThetaDistribution theta_from_samples(std::vector<double> samples) {
    ThetaDistribution theta;
    theta.samples = std::move(samples);
    theta.total = 0.0;
    for (const double sample : theta.samples) theta.total += sample;
    assign_band(theta);
    return theta;
}

void add_term_features(DecisionNetwork& network,
                       const std::vector<SegmentedDocument>& universe,
                       const std::vector<std::string>& terms, FeatureKind kind, XMode x_mode) {
    std::set<std::string> seen;
    for (const auto& term : terms) {
        const auto tokens = textproc::normalize_text(term).tokens;
        if (tokens.empty()) continue;
        std::string key;
        for (const auto& token : tokens) key += token + "\x1f";
        if (!seen.insert(key).second) continue;
        for (const auto part : textproc::kAllParts) {
            std::vector<double> samples;
            samples.reserve(universe.size());
            for (const auto& member : universe) samples.push_back(term_count(member, part, term));
            ThetaDistribution theta = theta_from_samples(std::move(samples));
            if (theta.total <= 0.0) continue;  // term unseen in this part across U
            FeatureNode node;
            node.kind = kind;
            node.part = part;
            node.metric = term;
            node.x_mode = x_mode;
            node.theta = std::move(theta);
            network.features.push_back(std::move(node));
        }
    }
}

DecisionNetwork build_theta_impl(const std::vector<SegmentedDocument>& universe,
                                 const queryset::QuerySpec& query, const NetworkOptions& options,
                                 std::size_t min_universe) {
    if (universe.size() < min_universe)
        throw InputError("universal set for query '" + query.query_id + "' has " +
                         std::to_string(universe.size()) + " documents; at least " +
                         std::to_string(min_universe) + " required");
    DecisionNetwork network;
    network.query_id = query.query_id;
    network.part_importance = options.part_importance;

    add_term_features(network, universe, query.descriptive_terms, FeatureKind::descriptive_term,
                      XMode::binary_band);
    add_term_features(network, universe, query.exclusive_terms, FeatureKind::exclusive_term,
                      XMode::raw_count);

    const auto add_shape = [&](FeatureKind kind, Part part, auto&& value_of) {
        FeatureNode node;
        node.kind = kind;
        node.part = part;
        node.x_mode = XMode::binary_band;
        std::vector<double> samples;
        samples.reserve(universe.size());
        for (const auto& member : universe) samples.push_back(value_of(member));
        node.theta = theta_from_samples(std::move(samples));
        network.features.push_back(std::move(node));
    };
    add_shape(FeatureKind::doc_length, Part::body,
              [](const SegmentedDocument& d) { return static_cast<double>(d.body_length); });
    add_shape(FeatureKind::url_depth, Part::url,
              [](const SegmentedDocument& d) { return static_cast<double>(d.url_depth); });
    add_shape(FeatureKind::readability, Part::body, readability_of);

    for (const auto& marker : options.markers) {
        if (textproc::normalize_text(marker).tokens.empty()) continue;
        std::vector<double> samples;
        samples.reserve(universe.size());
        for (const auto& member : universe)
            samples.push_back(term_count(member, Part::body, marker) > 0.0 ? 1.0 : 0.0);
        ThetaDistribution theta = theta_from_samples(std::move(samples));
        if (theta.total <= 0.0) continue;
        FeatureNode node;
        node.kind = FeatureKind::shallow_marker;
        node.part = Part::body;
        node.metric = marker;
        node.x_mode = XMode::binary_band;
        node.theta = std::move(theta);
        network.features.push_back(std::move(node));
    }
    return network;
}

double value_from_observation(const FeatureNode& node, double observation) {
    if (node.kind == FeatureKind::descriptive_term || node.kind == FeatureKind::exclusive_term) {
        if (node.x_mode == XMode::raw_count) return observation;
        // An absent term never counts as in-band, even when the band reaches 0.
        return observation > 0.0 && observation >= node.theta.lo && observation <= node.theta.hi
                   ? 1.0
                   : 0.0;
    }
    return observation >= node.theta.lo && observation <= node.theta.hi ? 1.0 : 0.0;
}

std::string median_error() { return "relevance baseline needs at least one self-score"; }

}  // namespace

std::array<double, kPartCount> default_part_importance() {
    std::array<double, kPartCount> v{};
    v[static_cast<std::size_t>(Part::url)] = 2.0;
    v[static_cast<std::size_t>(Part::title)] = 3.0;
    v[static_cast<std::size_t>(Part::meta)] = 1.0;
    v[static_cast<std::size_t>(Part::headings)] = 2.0;
    v[static_cast<std::size_t>(Part::body)] = 1.0;
    v[static_cast<std::size_t>(Part::anchors)] = 1.5;
    return v;
}

std::array<double, kPartCount> part_importance_with_overrides(
    const std::map<std::string, double>& overrides) {
    auto v = default_part_importance();
    for (const auto& [name, value] : overrides) {
        const Part part = textproc::part_from_name(name);  // throws on unknown part
        if (!(value >= 0.0) || !std::isfinite(value))
            throw InputError("part importance for '" + name + "' must be a finite number >= 0");
        v[static_cast<std::size_t>(part)] = value;
    }
    return v;
}

DecisionNetwork build_theta(const std::vector<SegmentedDocument>& universe,
                            const queryset::QuerySpec& query, const NetworkOptions& options) {
    return build_theta_impl(universe, query, options, 3);
}

double feature_observation(const FeatureNode& node, const SegmentedDocument& document) {
    switch (node.kind) {
        case FeatureKind::descriptive_term:
        case FeatureKind::exclusive_term:
            return term_count(document, node.part, node.metric);
        case FeatureKind::doc_length:
            return static_cast<double>(document.body_length);
        case FeatureKind::url_depth:
            return static_cast<double>(document.url_depth);
        case FeatureKind::readability:
            return readability_of(document);
        case FeatureKind::shallow_marker:
            return term_count(document, node.part, node.metric) > 0.0 ? 1.0 : 0.0;
    }
    return 0.0;
}

double feature_value(const FeatureNode& node, const SegmentedDocument& document) {
    return value_from_observation(node, feature_observation(node, document));
}

double feature_weight(const FeatureNode& node, const SegmentedDocument& document) {
    if (node.theta.total <= 0.0) return 0.0;
    return feature_observation(node, document) / node.theta.total;
}

double doc_relevancy_score(const DecisionNetwork& network, const SegmentedDocument& document) {
    double score = 0.0;
    for (const auto& node : network.features) {
        const double observation = feature_observation(node, document);
        const double value = value_from_observation(node, observation);
        if (value == 0.0) continue;
        const double weight = node.theta.total > 0.0 ? observation / node.theta.total : 0.0;
        score += value * weight * network.importance(node.part);
    }
    return score;
}

const std::vector<std::string>& feature_family_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> out;
        for (const auto part : textproc::kAllParts) out.emplace_back(textproc::part_name(part));
        out.insert(out.end(), {"body_length", "url_depth", "readability", "url_match"});
        const auto& reserved = reserved_family_ids();
        out.insert(out.end(), reserved.begin(), reserved.end());
        return out;
    }();
    return ids;
}

const std::vector<std::string>& reserved_family_ids() {
    static const std::vector<std::string> ids = {"alexa_rank", "host_age", "publish_time"};
    return ids;
}

bool family_registered(std::string_view id) {
    const auto& ids = feature_family_ids();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

LinearScoreModel unit_network_model() {
    LinearScoreModel model;
    for (const auto part : textproc::kAllParts)
        model.lambda[std::string(textproc::part_name(part))] = 1.0;
    return model;
}

std::map<std::string, double> feature_families(const DecisionNetwork& network,
                                               const SegmentedDocument& document,
                                               bool expected_url_match) {
    std::map<std::string, double> families;
    for (const auto part : textproc::kAllParts)
        families[std::string(textproc::part_name(part))] = 0.0;
    for (const auto& node : network.features) {
        const double observation = feature_observation(node, document);
        const double value = value_from_observation(node, observation);
        if (value == 0.0) continue;
        const double weight = node.theta.total > 0.0 ? observation / node.theta.total : 0.0;
        families[std::string(textproc::part_name(node.part))] +=
            value * weight * network.importance(node.part);
    }
    const auto shallow = textproc::shallow_features(document);
    families["body_length"] = shallow.at("body_length");
    families["url_depth"] = shallow.at("url_depth");
    families["readability"] = shallow.at("readability");
    families["url_match"] = expected_url_match ? 1.0 : 0.0;
    return families;
}

double linear_score(const LinearScoreModel& model, const std::map<std::string, double>& features,
                    std::vector<std::string>* warnings) {
    for (const auto& [id, value] : features) {
        (void)value;
        if (!family_registered(id)) throw InputError("unregistered feature family '" + id + "'");
    }
    double score = model.z;
    for (const auto& [id, coefficient] : model.lambda) {
        if (!family_registered(id)) throw InputError("unregistered feature family '" + id + "'");
        const auto it = features.find(id);
        if (it == features.end()) {
            if (warnings)
                warnings->push_back("feature family '" + id + "' not computed; scored as 0");
            continue;
        }
        score += coefficient * it->second;
    }
    return score;
}

double rank_agreement(const std::vector<double>& scores, const std::vector<int>& grades) {
    if (scores.size() != grades.size())
        throw InputError("rank_agreement: scores and grades must align");
    long concordant = 0;
    long discordant = 0;
    long comparable = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        for (std::size_t j = i + 1; j < scores.size(); ++j) {
            if (grades[i] == grades[j]) continue;
            ++comparable;
            const double ds = scores[i] - scores[j];
            if (ds == 0.0) continue;  // score tie: neither concordant nor discordant
            const bool agree = (ds > 0.0) == (grades[i] > grades[j]);
            if (agree)
                ++concordant;
            else
                ++discordant;
        }
    }
    if (comparable == 0) return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(concordant - discordant) / static_cast<double>(comparable);
}

double mean_agreement(const std::vector<std::vector<LabeledCandidate>>& queries,
                      const LinearScoreModel& model) {
    double sum = 0.0;
    int counted = 0;
    for (const auto& candidates : queries) {
        std::vector<double> scores;
        std::vector<int> grades;
        scores.reserve(candidates.size());
        grades.reserve(candidates.size());
        for (const auto& candidate : candidates) {
            scores.push_back(linear_score(model, candidate.features));
            grades.push_back(candidate.grade);
        }
        const double agreement = rank_agreement(scores, grades);
        if (std::isnan(agreement)) continue;  // single label or uniform grades
        sum += agreement;
        ++counted;
    }
    if (counted == 0)
        throw InputError("expert labels carry no rank signal: no query has two "
                         "distinctly graded results");
    return sum / counted;
}

TuneResult tune_lambda(const std::vector<std::vector<LabeledCandidate>>& queries,
                       const LinearScoreModel& initial, std::uint64_t seed,
                       const TuneOptions& options) {
    std::vector<std::string> families;
    for (const auto& [id, value] : initial.lambda) {
        (void)value;
        families.push_back(id);
    }
    if (families.empty()) {
        const auto& reserved = reserved_family_ids();
        for (const auto& id : feature_family_ids())
            if (std::find(reserved.begin(), reserved.end(), id) == reserved.end())
                families.push_back(id);
    }

    // {0} plus three points per decade across 0.01 .. 10.
    std::vector<double> grid = {0.0};
    for (int k = 0; k <= 9; ++k) grid.push_back(std::pow(10.0, -2.0 + k / 3.0));

    const auto ascend = [&](LinearScoreModel model, int* sweeps_out) {
        double current = mean_agreement(queries, model);
        int sweeps = 0;
        while (sweeps < options.max_sweeps) {
            const double before = current;
            for (const auto& family : families) {
                const double kept = model.lambda[family];
                double best_value = kept;
                double best_e = current;
                for (const double candidate : grid) {
                    if (candidate == kept) continue;
                    model.lambda[family] = candidate;
                    const double e = mean_agreement(queries, model);
                    if (e > best_e) {
                        best_e = e;
                        best_value = candidate;
                    }
                }
                model.lambda[family] = best_value;
                current = best_e;
            }
            ++sweeps;
            if (current - before < options.min_improvement) break;
        }
        *sweeps_out = sweeps;
        return std::make_pair(std::move(model), current);
    };

    TuneResult result;
    result.seed = seed;
    SplitMix64 rng(seed);
    bool have_best = false;
    double best_e = 0.0;
    for (int restart = 0; restart <= options.restarts; ++restart) {
        LinearScoreModel start = initial;
        if (restart > 0) {
            for (const auto& family : families)
                start.lambda[family] = grid[rng.below(grid.size())];
        }
        int sweeps = 0;
        auto [model, e] = ascend(std::move(start), &sweeps);
        result.iterations += sweeps;
        if (!have_best || e > best_e) {
            have_best = true;
            best_e = e;
            result.model = std::move(model);
        }
    }
    result.e_train = best_e;
    return result;
}

std::string_view relevance_name(Relevance relevance) {
    switch (relevance) {
        case Relevance::relevant:
            return "relevant";
        case Relevance::uncertain:
            return "uncertain";
        case Relevance::irrelevant:
            return "irrelevant";
    }
    return "";
}

std::vector<double> loo_self_scores(const std::vector<SegmentedDocument>& universe,
                                    const queryset::QuerySpec& query,
                                    const NetworkOptions& options) {
    if (universe.size() < 3)
        throw InputError("leave-one-out self-scores need at least 3 universal-set documents");
    std::vector<double> scores;
    scores.reserve(universe.size());
    for (std::size_t held_out = 0; held_out < universe.size(); ++held_out) {
        std::vector<SegmentedDocument> rest;
        rest.reserve(universe.size() - 1);
        for (std::size_t i = 0; i < universe.size(); ++i)
            if (i != held_out) rest.push_back(universe[i]);
        // The reduced set may drop below the public minimum of 3; that is the
        // point of leave-one-out, so the internal builder allows it.
        const DecisionNetwork network = build_theta_impl(rest, query, options, 2);
        scores.push_back(doc_relevancy_score(network, universe[held_out]));
    }
    return scores;
}

RelevanceOutcome relevance_decision(double score, const std::vector<double>& u_self_scores,
                                    const RelevanceThresholds& thresholds) {
    if (u_self_scores.empty()) throw InputError(median_error());
    std::vector<double> sorted = u_self_scores;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double baseline =
        n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

    RelevanceOutcome outcome;
    outcome.baseline = baseline;
    if (baseline <= 0.0) {
        outcome.degenerate = true;
        outcome.relevance = score > 0.0 ? Relevance::uncertain : Relevance::irrelevant;
        return outcome;
    }
    if (score >= thresholds.hi * baseline)
        outcome.relevance = Relevance::relevant;
    else if (score < thresholds.lo * baseline)
        outcome.relevance = Relevance::irrelevant;
    else
        outcome.relevance = Relevance::uncertain;
    return outcome;
}

std::string serialize_model(const StoredModel& stored) {
    nlohmann::ordered_json document;
    nlohmann::ordered_json lambda = nlohmann::ordered_json::object();
    for (const auto& [id, value] : stored.model.lambda) lambda[id] = value;
    document["lambda"] = std::move(lambda);
    document["z"] = stored.model.z;
    document["e_train"] = stored.e_train;
    document["seed"] = stored.seed;
    return document.dump(2) + "\n";
}

StoredModel parse_model(std::string_view json_text) {
    nlohmann::json document;
    try {
        document = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& error) {
        throw InputError(std::string("model file is not valid JSON: ") + error.what());
    }
    if (!document.is_object() || !document.contains("lambda") || !document["lambda"].is_object())
        throw InputError("model file must be an object with a 'lambda' map");
    StoredModel stored;
    for (const auto& [id, value] : document["lambda"].items()) {
        if (!family_registered(id))
            throw InputError("model names unregistered feature family '" + id + "'");
        if (!value.is_number() || !std::isfinite(value.get<double>()))
            throw InputError("coefficient for '" + id + "' must be a finite number");
        stored.model.lambda[id] = value.get<double>();
    }
    if (document.contains("z")) {
        if (!document["z"].is_number() || !std::isfinite(document["z"].get<double>()))
            throw InputError("intercept z must be a finite number");
        stored.model.z = document["z"].get<double>();
    }
    if (document.contains("e_train") && document["e_train"].is_number())
        stored.e_train = document["e_train"].get<double>();
    if (document.contains("seed") && document["seed"].is_number_unsigned())
        stored.seed = document["seed"].get<std::uint64_t>();
    return stored;
}

}  // namespace serpgauge::scoring
