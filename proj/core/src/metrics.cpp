#include "serpgauge/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "serpgauge/errors.hpp"
#include "serpgauge/queryset.hpp"

namespace serpgauge::metrics {

namespace {

using scoring::Relevance;

// Mean over the optional values that exist; empty when none do.
std::optional<double> optional_mean(const std::vector<std::optional<double>>& values) {
    double sum = 0.0;
    int count = 0;
    for (const auto& value : values) {
        if (!value) continue;
        sum += *value;
        ++count;
    }
    if (count == 0) return std::nullopt;
    return sum / count;
}

}  // namespace

void check_ranks(const JudgedSerp& serp) {
    for (std::size_t i = 0; i < serp.entries.size(); ++i) {
        if (serp.entries[i].rank != static_cast<int>(i) + 1)
            throw InputError("judged SERP for query '" + serp.query_id +
                             "' has non-contiguous ranks");
    }
}

double reciprocal_rank(const JudgedSerp& serp) {
    check_ranks(serp);
    for (const auto& entry : serp.entries)
        if (entry.judgment == Relevance::relevant) return 1.0 / entry.rank;
    return 0.0;
}

double signed_reciprocal_rank(const JudgedSerp& serp) {
    check_ranks(serp);
    for (const auto& entry : serp.entries) {
        if (entry.judgment == Relevance::relevant) return 1.0 / entry.rank;
        if (entry.judgment == Relevance::irrelevant) return -1.0;
    }
    return 0.0;
}

int accuracy_at_k(const JudgedSerp& serp, int k) {
    if (k < 1) throw InputError("accuracy_at_k needs k >= 1");
    check_ranks(serp);
    for (const auto& entry : serp.entries)
        if (entry.rank <= k && entry.judgment == Relevance::relevant) return 1;
    return 0;
}

double probe_pass_rate(const JudgedSerp& serp, int k) {
    if (k < 1) throw InputError("probe_pass_rate needs k >= 1");
    check_ranks(serp);
    if (serp.entries.empty()) return 0.0;
    const int considered = std::min<int>(k, static_cast<int>(serp.entries.size()));
    int hits = 0;
    for (const auto& entry : serp.entries)
        if (entry.rank <= considered && entry.judgment == Relevance::relevant) ++hits;
    return static_cast<double>(hits) / considered;
}

AggregateResult aggregate(const std::vector<QueryScore>& rows) {
    AggregateResult result;

    std::map<std::pair<std::string, std::string>, std::vector<const QueryScore*>> by_leaf;
    std::set<std::string> engines;
    for (const auto& row : rows) {
        if (!queryset::find_domain(row.domain_path))
            throw InputError("query '" + row.query_id + "' maps to unknown domain '" +
                             row.domain_path + "'");
        by_leaf[{row.domain_path, row.engine_id}].push_back(&row);
        engines.insert(row.engine_id);
    }

    std::set<std::string> covered_leaves;
    for (const auto& [key, leaf_rows] : by_leaf) {
        covered_leaves.insert(key.first);
        DomainScore leaf;
        leaf.domain_path = key.first;
        leaf.engine_id = key.second;
        leaf.n_queries = static_cast<int>(leaf_rows.size());
        double accuracy_sum = 0.0;
        std::vector<std::optional<double>> mrr, signed_mrr, pass_rate;
        for (const QueryScore* row : leaf_rows) {
            accuracy_sum += row->accuracy;
            mrr.push_back(row->mrr);
            signed_mrr.push_back(row->signed_mrr);
            pass_rate.push_back(row->pass_rate);
        }
        leaf.accuracy = accuracy_sum / leaf.n_queries;
        leaf.mrr = optional_mean(mrr);
        leaf.signed_mrr = optional_mean(signed_mrr);
        leaf.pass_rate = optional_mean(pass_rate);
        result.domains.push_back(std::move(leaf));
    }

    for (const auto& path : queryset::taxonomy_leaves()) {
        const auto* node = queryset::find_domain(path);
        if (node && !node->supported) continue;
        if (!covered_leaves.count(path))
            result.warnings.push_back("domain '" + path + "' received no queries; omitted");
    }

    // Component rollups: leaf-uniform means per engine, taxonomy order.
    for (const auto& component : queryset::component_ids()) {
        const auto leaf_paths = queryset::taxonomy_leaves(component);
        for (const auto& engine : engines) {
            ComponentScore rollup;
            rollup.component = component;
            rollup.engine_id = engine;
            double accuracy_sum = 0.0;
            std::vector<std::optional<double>> mrr, signed_mrr, pass_rate;
            for (const auto& path : leaf_paths) {
                const auto it = by_leaf.find({path, engine});
                if (it == by_leaf.end()) continue;
                const auto leaf_it =
                    std::find_if(result.domains.begin(), result.domains.end(),
                                 [&](const DomainScore& d) {
                                     return d.domain_path == path && d.engine_id == engine;
                                 });
                ++rollup.n_leaves;
                rollup.n_queries += leaf_it->n_queries;
                accuracy_sum += leaf_it->accuracy;
                mrr.push_back(leaf_it->mrr);
                signed_mrr.push_back(leaf_it->signed_mrr);
                pass_rate.push_back(leaf_it->pass_rate);
            }
            if (rollup.n_leaves == 0) continue;
            rollup.accuracy = accuracy_sum / rollup.n_leaves;
            rollup.mrr = optional_mean(mrr);
            rollup.signed_mrr = optional_mean(signed_mrr);
            rollup.pass_rate = optional_mean(pass_rate);
            rollup.headline = rollup.pass_rate ? *rollup.pass_rate
                                               : rollup.mrr ? *rollup.mrr : rollup.accuracy;
            result.components.push_back(std::move(rollup));
        }
    }
    return result;
}

}  // namespace serpgauge::metrics
