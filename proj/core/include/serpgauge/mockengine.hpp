#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "serpgauge/cache.hpp"
#include "serpgauge/engines.hpp"
#include "serpgauge/queryset.hpp"
#include "serpgauge/textproc.hpp"

namespace serpgauge::mock {

// One simulated engine deficiency. Each flag breaks exactly one processing
// step, which maps to exactly one taxonomy component, so score drops localize.
enum class Defect {
    no_digit_folding,      // normalizer: number forms match only literally
    no_char_folding,       // normalizer: written-form variants match only literally
    no_compound_split,     // tokenizer: joined compounds stay joined
    no_spell_correction,   // spell_correction: typos stay typos
    no_synonym_expansion,  // query_expansion: no synonym/abbreviation growth
    shuffled_rank,         // ranking: result order is scrambled
};

using DefectSet = std::set<Defect>;

std::string_view defect_name(Defect defect);
Defect defect_from_name(std::string_view name);  // throws InputError
// The taxonomy component a defect degrades.
std::string_view defect_component(Defect defect);
// Comma list ("no_digit_folding,shuffled_rank"); empty means none.
DefectSet parse_defects(std::string_view list);
const std::vector<Defect>& all_defects();

struct MockDocument {
    int id = 0;
    std::string url;
    std::string title;
    std::string meta;
    std::string heading;
    std::string body;
    std::string html;  // rendered page, exactly what the cache will serve
    textproc::SegmentedDocument segmented;
    std::map<std::string, std::size_t> token_counts;  // over all parts
};

struct MockCorpus {
    std::uint64_t seed = 0;
    std::vector<MockDocument> documents;
};

// Deterministic corpus with planted documents for every bundled query: pages
// carrying the evidence forms probes look for, literal-only decoys that a
// defective engine falls back to, navigation targets, and universal-set pages
// with controlled term counts. Throws InputError when size < 100.
MockCorpus build_corpus(std::uint64_t seed, int size);

// The synthetic query-set the corpus is planted for: probes across every
// supported analyzer leaf plus navigational, trend, known-item, and
// semi-informational ranking queries.
queryset::QuerySet bundled_queryset();

// Baseline ranking is descending total term frequency of the processed query
// over all document parts, ties by document id; score-zero documents are not
// returned. Active defects disable their processing step.
Serp mock_search(const MockCorpus& corpus, const DefectSet& defects, std::string_view query_text,
                 int count);

std::string render_page(const MockDocument& document);

struct EmitResult {
    std::string engine_id;
    int serps = 0;
    int pages = 0;
};

// Writes SERPs for every bundled query plus every corpus page through the
// standard fixture layout, so the real pipeline replays the mock offline.
EmitResult emit_fixtures(const MockCorpus& corpus, const DefectSet& defects,
                         const std::string& engine_id, FixtureCache& cache);

// Engine id convention used by the CLI: "mock" for no defects, otherwise
// "mock" + "_<flag>" per active flag, in enum order.
std::string engine_id_for(const DefectSet& defects);

}  // namespace serpgauge::mock
