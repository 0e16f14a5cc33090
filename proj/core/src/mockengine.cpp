#include "serpgauge/mockengine.hpp"

#include <algorithm>
#include <sstream>

#include "serpgauge/errors.hpp"
#include "serpgauge/rng.hpp"

namespace serpgauge::mock {

namespace {

using queryset::QuerySpec;
using queryset::QueryType;

enum class MapKind { digit, character, compound, spell, expansion };

// One analyzer probe: the query carries the literal surface form, the planted
// evidence documents carry only the processed form. An engine that performs
// the processing step retrieves the evidence documents; one that matches
// literally retrieves the decoys. Literal vocabularies are disjoint across
// map kinds, so disabling one step cannot leak into another component.
struct ProbeSpec {
    const char* query_id;
    const char* domain_path;
    MapKind map;
    const char* literal;    // single post-normalization token
    const char* processed;  // space-joined token unit the engine should reach
    const char* query_text;
};

const std::vector<ProbeSpec>& probe_specs() {
    static const std::vector<ProbeSpec> specs = {
        // Number forms: literal digits versus written-out words.
        {"norm_card_1", "normalizer/numbers/cardinal", MapKind::digit, "2", "دو",
         "خرید 2 بلیط"},
        {"norm_card_2", "normalizer/numbers/cardinal", MapKind::digit, "7", "هفت",
         "7 روش مفید"},
        {"norm_ord_1", "normalizer/numbers/ordinal", MapKind::digit, "3ام", "سوم",
         "فصل 3ام رمان"},
        {"norm_cost_1", "normalizer/numbers/cost_benefit", MapKind::digit, "50", "پنجاه",
         "قیمت 50 تومان"},
        {"norm_time_1", "normalizer/numbers/time", MapKind::digit, "8", "هشت",
         "ساعت 8 صبح"},
        {"norm_date_1", "normalizer/numbers/date", MapKind::digit, "1404", "هزاروچهارصدوچهار",
         "سال 1404 شمسی"},
        {"norm_pop_1", "normalizer/numbers/population", MapKind::digit, "85", "هشتادوپنج",
         "جمعیت 85 میلیونی"},
        // Written forms the bundled folding table does not cover, so only an
        // engine-side normalizer can bridge them.
        {"norm_hamzeh_1", "normalizer/written_forms/hamzeh", MapKind::character, "أسماء", "اسما",
         "فهرست أسماء کامل"},
        {"norm_rep_1", "normalizer/written_forms/char_repetition", MapKind::character,
         "سلاااام", "سلام", "پیام سلاااام دوستانه"},
        {"norm_pos_1", "normalizer/written_forms/char_position", MapKind::character,
         "ﻛتاب", "کتاب", "معرفی ﻛتاب جدید"},
        {"norm_homo_all_1", "normalizer/homophones/all_live", MapKind::character, "طهران",
         "تهران", "نقشه طهران قدیم"},
        {"norm_homo_one_1", "normalizer/homophones/one_live", MapKind::character, "اتلیه",
         "آتلیه", "بهترین اتلیه عکاسی"},
        // Joined terms and phrases.
        {"tok_joint_1", "tokenizer/joint_terms", MapKind::compound, "دانشبنیان", "دانش بنیان",
         "شرکت دانشبنیان موفق"},
        {"tok_joint_2", "tokenizer/joint_terms", MapKind::compound, "ماهیتابه", "ماهی تابه",
         "خرازی ماهیتابه نسوز"},
        {"tok_verb2_1", "tokenizer/phrases/two_part_verbs", MapKind::compound, "میرود",
         "می‌رود", "او میرود فردا"},
        {"tok_verb2_2", "tokenizer/phrases/two_part_verbs", MapKind::compound, "برمیگردد",
         "برمی‌گردد", "کی برمیگردد امشب"},
        {"tok_verbn_1", "tokenizer/phrases/multi_part_verbs", MapKind::compound,
         "ازدستدادهاند", "از‌دست‌داده‌اند", "آنها ازدستدادهاند چیزی"},
        {"tok_verbn_2", "tokenizer/phrases/multi_part_verbs", MapKind::compound,
         "بهکاربردهاند", "به‌کار‌برده‌اند", "ابزار بهکاربردهاند درست"},
        {"tok_ne_1", "tokenizer/phrases/named_entities", MapKind::compound, "دانشگاهشریف",
         "دانشگاه شریف", "رتبه دانشگاهشریف جهانی"},
        {"tok_ne_2", "tokenizer/phrases/named_entities", MapKind::compound, "بیمارستانمهر",
         "بیمارستان مهر", "آدرس بیمارستانمهر مرکزی"},
        // Typos per spell-correction aspect.
        {"spell_lex_1", "spell_correction/lexicon", MapKind::spell, "فرهنک", "فرهنگ",
         "معنی فرهنک لغت"},
        {"spell_lex_2", "spell_correction/lexicon", MapKind::spell, "مدرصه", "مدرسه",
         "ثبت مدرصه ابتدایی"},
        {"spell_infl_1", "spell_correction/inflection", MapKind::spell, "رفتنند", "رفتند",
         "همه رفتنند خانه"},
        {"spell_infl_2", "spell_correction/inflection", MapKind::spell, "درختانها", "درختان",
         "باغ درختانها سبز"},
        {"spell_hom_1", "spell_correction/homonyms", MapKind::spell, "خاهش", "خواهش",
         "یک خاهش مهم"},
        {"spell_hom_2", "spell_correction/homonyms", MapKind::spell, "صواب", "ثواب",
         "کار صواب نیک"},
        {"spell_freq_1", "spell_correction/word_frequency", MapKind::spell, "ممنن", "ممنون",
         "خیلی ممنن عزیز"},
        {"spell_freq_2", "spell_correction/word_frequency", MapKind::spell, "سپاص", "سپاس",
         "با سپاص فراوان"},
        {"spell_kbd_1", "spell_correction/keyboard_order", MapKind::spell, "پنچره", "پنجره",
         "شیشه پنچره بزرگ"},
        {"spell_kbd_2", "spell_correction/keyboard_order", MapKind::spell, "زمسحان", "زمستان",
         "فصل زمسحان سرد"},
        // Expansion: the query keeps its own term and gains the expansion.
        {"exp_syn_1", "query_expansion/synonyms", MapKind::expansion, "خودرو", "اتومبیل",
         "بیمه خودرو ارزان"},
        {"exp_syn_2", "query_expansion/synonyms", MapKind::expansion, "پزشک", "دکتر",
         "نوبت پزشک متخصص"},
        {"exp_syn_3", "query_expansion/synonyms", MapKind::expansion, "رایانه", "کامپیوتر",
         "تعمیر رایانه حرفه‌ای"},
        {"exp_abbr_1", "query_expansion/abbreviations", MapKind::expansion, "ai", "هوشمصنوعی",
         "دوره ai مقدماتی"},
        {"exp_abbr_2", "query_expansion/abbreviations", MapKind::expansion, "ml",
         "یادگیریماشین", "کلاس ml آنلاین"},
        {"exp_abbr_3", "query_expansion/abbreviations", MapKind::expansion, "db", "پایگاهداده",
         "طراحی db ساده"},
    };
    return specs;
}

struct TargetSpec {
    const char* query_id;
    const char* domain_path;
    QueryType type;
    const char* brand;  // single token planted in the target document
    const char* host;   // latin host of the target site
    const char* query_text;
};

const std::vector<TargetSpec>& target_specs() {
    static const std::vector<TargetSpec> specs = {
        {"rank_nav_1", "ranking/navigational", QueryType::navigational, "زرین", "zarrin.mock",
         "فروشگاه زرین"},
        {"rank_nav_2", "ranking/navigational", QueryType::navigational, "آینده‌نو",
         "ayandeno.mock", "بانک آینده‌نو"},
        {"rank_nav_3", "ranking/navigational", QueryType::navigational, "چکاوک",
         "chakavak.mock", "سایت چکاوک"},
        {"rank_nav_4", "ranking/navigational", QueryType::navigational, "رایمون",
         "raymon.mock", "پرتال رایمون"},
        {"rank_nav_5", "ranking/navigational", QueryType::navigational, "نگارین",
         "negarin.mock", "مجله نگارین"},
        {"rank_trend_1", "ranking/trend_single_url", QueryType::trend_single_url, "مهرگان",
         "mehregan.mock", "جشنواره مهرگان"},
        {"rank_trend_2", "ranking/trend_single_url", QueryType::trend_single_url, "تیرگان",
         "tirgan.mock", "رویداد تیرگان"},
        {"rank_trend_3", "ranking/trend_single_url", QueryType::trend_single_url, "سپندار",
         "sepandar.mock", "همایش سپندار"},
    };
    return specs;
}

struct KnownSpec {
    const char* query_id;
    QueryType type;
    const char* term_a;
    const char* term_b;
    const char* query_text;
};

const std::vector<KnownSpec>& known_specs() {
    static const std::vector<KnownSpec> specs = {
        {"rank_known_1", QueryType::known_item, "کوانتوم", "فوتون", "پژوهش کوانتوم فوتون"},
        {"rank_known_2", QueryType::known_item, "ژنوم", "کروموزوم", "نقشه ژنوم کروموزوم"},
        {"rank_known_3", QueryType::known_item, "اقلیم", "بارش", "تغییر اقلیم بارش"},
        {"rank_known_4", QueryType::known_item, "سیارک", "مدار", "رصد سیارک مدار"},
        {"rank_semi_1", QueryType::semi_informational, "آبگوشت", "دیزی", "طرز آبگوشت دیزی"},
        {"rank_semi_2", QueryType::semi_informational, "موزاییک", "کاشی", "نصب موزاییک کاشی"},
    };
    return specs;
}

constexpr int kEvidenceDocs = 6;
constexpr int kDecoyDocs = 4;
constexpr int kNavDecoyDocs = 9;
constexpr int kUniverseDocs = 5;
constexpr int kKnownDecoyDocs = 7;
constexpr int kPlantedDocs = kEvidenceDocs + kDecoyDocs +
                             8 /* nav+trend targets */ + kNavDecoyDocs + kUniverseDocs +
                             kKnownDecoyDocs;

std::vector<std::string> tokens_of(std::string_view text) {
    return textproc::normalize_text(text).tokens;
}

// Deterministic per-(seed, doc, unit) frequency draw.
std::uint64_t draw(std::uint64_t seed, int doc_id, std::string_view unit, std::uint64_t lo,
                   std::uint64_t hi) {
    SplitMix64 rng(mix_seed(seed, fnv1a64(std::to_string(doc_id) + "|" + std::string(unit))));
    return lo + rng.below(hi - lo + 1);
}

struct BodyBuilder {
    std::vector<std::vector<std::string>> units;

    void add(const std::string& unit_text, std::uint64_t repeats) {
        const auto unit = tokens_of(unit_text);
        for (std::uint64_t i = 0; i < repeats; ++i) units.push_back(unit);
    }

    std::size_t token_count() const {
        std::size_t n = 0;
        for (const auto& unit : units) n += unit.size();
        return n;
    }

    // Filler vocabulary shared by every document; never queried.
    void fill_to(std::size_t target, SplitMix64& rng) {
        while (token_count() < target)
            units.push_back({"واژه" + std::to_string(rng.below(400))});
    }

    std::string flatten(SplitMix64& rng, bool sentence_marks) {
        for (std::size_t i = units.size(); i > 1; --i)
            std::swap(units[i - 1], units[rng.below(i)]);
        std::string body;
        std::size_t since_mark = 0;
        for (const auto& unit : units) {
            for (const auto& token : unit) {
                if (!body.empty()) body.push_back(' ');
                body.append(token);
                if (sentence_marks && ++since_mark >= 9) {
                    body.push_back('.');
                    since_mark = 0;
                }
            }
        }
        return body;
    }
};

MockDocument finish_document(int id, std::string url, std::string body) {
    MockDocument document;
    document.id = id;
    document.url = std::move(url);
    document.title = "سند ش" + std::to_string(id);
    document.meta = "توضیح ش" + std::to_string(id);
    document.heading = "بخش ش" + std::to_string(id);
    document.body = std::move(body);
    document.html = render_page(document);
    document.segmented = textproc::segment_html(document.html, document.url);
    for (const auto part : textproc::kAllParts)
        for (const auto& token : document.segmented.part(part).tokens)
            ++document.token_counts[token];
    return document;
}

const std::map<std::string, std::vector<std::string>>& map_for(MapKind kind) {
    static const auto build = [](MapKind wanted) {
        std::map<std::string, std::vector<std::string>> table;
        for (const auto& probe : probe_specs()) {
            if (probe.map != wanted) continue;
            table[tokens_of(probe.literal).front()] = tokens_of(probe.processed);
        }
        return table;
    };
    static const std::map<std::string, std::vector<std::string>> digit = build(MapKind::digit);
    static const std::map<std::string, std::vector<std::string>> character =
        build(MapKind::character);
    static const std::map<std::string, std::vector<std::string>> compound =
        build(MapKind::compound);
    static const std::map<std::string, std::vector<std::string>> spell = build(MapKind::spell);
    static const std::map<std::string, std::vector<std::string>> expansion =
        build(MapKind::expansion);
    switch (kind) {
        case MapKind::digit:
            return digit;
        case MapKind::character:
            return character;
        case MapKind::compound:
            return compound;
        case MapKind::spell:
            return spell;
        case MapKind::expansion:
            return expansion;
    }
    return digit;
}

void apply_replace(std::vector<std::string>& tokens, MapKind kind) {
    const auto& table = map_for(kind);
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (auto& token : tokens) {
        const auto it = table.find(token);
        if (it == table.end()) {
            out.push_back(std::move(token));
        } else {
            out.insert(out.end(), it->second.begin(), it->second.end());
        }
    }
    tokens = std::move(out);
}

void apply_expand(std::vector<std::string>& tokens) {
    const auto& table = map_for(MapKind::expansion);
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (auto& token : tokens) {
        const auto it = table.find(token);
        out.push_back(std::move(token));
        if (it != table.end()) out.insert(out.end(), it->second.begin(), it->second.end());
    }
    tokens = std::move(out);
}

std::string first_sentence(const std::string& body) {
    const auto dot = body.find('.');
    std::string sentence = dot == std::string::npos ? body : body.substr(0, dot);
    if (sentence.size() > 160) {
        std::size_t cut = 160;
        // Never split a UTF-8 sequence.
        while (cut > 0 && (static_cast<unsigned char>(sentence[cut]) & 0xC0) == 0x80) --cut;
        sentence.resize(cut);
    }
    return sentence;
}

}  // namespace

std::string_view defect_name(Defect defect) {
    switch (defect) {
        case Defect::no_digit_folding:
            return "no_digit_folding";
        case Defect::no_char_folding:
            return "no_char_folding";
        case Defect::no_compound_split:
            return "no_compound_split";
        case Defect::no_spell_correction:
            return "no_spell_correction";
        case Defect::no_synonym_expansion:
            return "no_synonym_expansion";
        case Defect::shuffled_rank:
            return "shuffled_rank";
    }
    return "";
}

Defect defect_from_name(std::string_view name) {
    for (const auto defect : all_defects())
        if (defect_name(defect) == name) return defect;
    throw InputError("unknown defect flag '" + std::string(name) + "'");
}

std::string_view defect_component(Defect defect) {
    switch (defect) {
        case Defect::no_digit_folding:
        case Defect::no_char_folding:
            return "normalizer";
        case Defect::no_compound_split:
            return "tokenizer";
        case Defect::no_spell_correction:
            return "spell_correction";
        case Defect::no_synonym_expansion:
            return "query_expansion";
        case Defect::shuffled_rank:
            return "ranking";
    }
    return "";
}

const std::vector<Defect>& all_defects() {
    static const std::vector<Defect> defects = {
        Defect::no_digit_folding,     Defect::no_char_folding,      Defect::no_compound_split,
        Defect::no_spell_correction,  Defect::no_synonym_expansion, Defect::shuffled_rank,
    };
    return defects;
}

DefectSet parse_defects(std::string_view list) {
    DefectSet defects;
    std::size_t start = 0;
    while (start <= list.size()) {
        auto end = list.find(',', start);
        if (end == std::string_view::npos) end = list.size();
        auto item = list.substr(start, end - start);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) defects.insert(defect_from_name(item));
        start = end + 1;
    }
    return defects;
}

std::string engine_id_for(const DefectSet& defects) {
    if (defects.empty()) return "mock";
    std::string id = "mock";
    for (const auto defect : defects) id += "_" + std::string(defect_name(defect));
    return id;
}

MockCorpus build_corpus(std::uint64_t seed, int size) {
    if (size < 100) throw InputError("corpus size must be at least 100");
    MockCorpus corpus;
    corpus.seed = seed;
    corpus.documents.reserve(static_cast<std::size_t>(size));
    int next_id = 0;

    const auto doc_rng = [&](int id) { return SplitMix64(mix_seed(seed, fnv1a64("doc" + std::to_string(id)))); };

    // Evidence documents: the processed form of every probe, prominently.
    for (int i = 0; i < kEvidenceDocs; ++i) {
        const int id = next_id++;
        auto rng = doc_rng(id);
        BodyBuilder body;
        for (const auto& probe : probe_specs())
            body.add(probe.processed, draw(seed, id, probe.processed, 6, 10));
        body.fill_to(body.token_count() + 40, rng);
        corpus.documents.push_back(finish_document(
            id, "https://corpus.mock/d" + std::to_string(id), body.flatten(rng, true)));
    }
    // Decoy documents: the literal forms only, sparsely.
    for (int i = 0; i < kDecoyDocs; ++i) {
        const int id = next_id++;
        auto rng = doc_rng(id);
        BodyBuilder body;
        for (const auto& probe : probe_specs())
            body.add(probe.literal, draw(seed, id, probe.literal, 1, 3));
        body.fill_to(body.token_count() + 10, rng);
        corpus.documents.push_back(finish_document(
            id, "https://corpus.mock/d" + std::to_string(id), body.flatten(rng, true)));
    }
    // Navigation and trend targets, one site each.
    for (const auto& target : target_specs()) {
        const int id = next_id++;
        auto rng = doc_rng(id);
        BodyBuilder body;
        body.add(target.brand, draw(seed, id, target.brand, 9, 12));
        body.fill_to(body.token_count() + 30, rng);
        corpus.documents.push_back(finish_document(id, std::string("https://") + target.host + "/",
                                                   body.flatten(rng, true)));
    }
    // Shared navigation decoys: every brand, faintly.
    for (int i = 0; i < kNavDecoyDocs; ++i) {
        const int id = next_id++;
        auto rng = doc_rng(id);
        BodyBuilder body;
        for (const auto& target : target_specs())
            body.add(target.brand, draw(seed, id, target.brand, 1, 2));
        body.fill_to(body.token_count() + 10, rng);
        corpus.documents.push_back(finish_document(
            id, "https://corpus.mock/d" + std::to_string(id), body.flatten(rng, true)));
    }
    // Universal-set pages: controlled term counts and uniform shape, so the
    // band statistics drawn from them are tight.
    for (int i = 0; i < kUniverseDocs; ++i) {
        const int id = next_id++;
        auto rng = doc_rng(id);
        BodyBuilder body;
        for (const auto& known : known_specs()) {
            body.add(known.term_a, draw(seed, id, known.term_a, 8, 12));
            body.add(known.term_b, draw(seed, id, known.term_b, 8, 12));
        }
        body.fill_to(170 + draw(seed, id, "len", 0, 10), rng);
        corpus.documents.push_back(finish_document(
            id, "https://corpus.mock/k/u/d" + std::to_string(id), body.flatten(rng, true)));
    }
    // Known-item decoys: terms present but far out of band, divergent shape.
    for (int i = 0; i < kKnownDecoyDocs; ++i) {
        const int id = next_id++;
        auto rng = doc_rng(id);
        BodyBuilder body;
        for (const auto& known : known_specs()) {
            body.add(known.term_a, 1);
            body.add(known.term_b, 1);
        }
        body.fill_to(40, rng);
        corpus.documents.push_back(finish_document(
            id, "https://corpus.mock/x" + std::to_string(id), body.flatten(rng, false)));
    }
    // Background filler.
    while (next_id < size) {
        const int id = next_id++;
        auto rng = doc_rng(id);
        BodyBuilder body;
        body.fill_to(25 + rng.below(20), rng);
        corpus.documents.push_back(finish_document(
            id, "https://corpus.mock/d" + std::to_string(id), body.flatten(rng, true)));
    }
    return corpus;
}

queryset::QuerySet bundled_queryset() {
    queryset::QuerySet set;
    set.version = 1;
    for (const auto& probe : probe_specs()) {
        QuerySpec query;
        query.query_id = probe.query_id;
        query.domain_path = probe.domain_path;
        query.component = query.domain_path.substr(0, query.domain_path.find('/'));
        query.query_text = probe.query_text;
        query.query_type = QueryType::analyzer_probe;
        query.evidence_terms = {probe.processed};
        set.queries.push_back(std::move(query));
    }
    for (const auto& target : target_specs()) {
        QuerySpec query;
        query.query_id = target.query_id;
        query.domain_path = target.domain_path;
        query.component = "ranking";
        query.query_text = target.query_text;
        query.query_type = target.type;
        query.expected_urls = {std::string("https://") + target.host + "/"};
        set.queries.push_back(std::move(query));
    }
    std::vector<std::string> u_set;
    const int first_universe = kEvidenceDocs + kDecoyDocs + 8 + kNavDecoyDocs;
    for (int i = 0; i < kUniverseDocs; ++i)
        u_set.push_back("https://corpus.mock/k/u/d" + std::to_string(first_universe + i));
    for (const auto& known : known_specs()) {
        QuerySpec query;
        query.query_id = known.query_id;
        query.domain_path = "ranking/known_items";
        query.component = "ranking";
        query.query_text = known.query_text;
        query.query_type = known.type;
        query.descriptive_terms = {known.term_a, known.term_b};
        query.u_set = u_set;
        set.queries.push_back(std::move(query));
    }
    return set;
}

std::string render_page(const MockDocument& document) {
    std::ostringstream page;
    page << "<html><head><title>" << document.title << "</title>\n"
         << "<meta name=\"description\" content=\"" << document.meta << "\">\n"
         << "</head><body>\n<h1>" << document.heading << "</h1>\n<p>" << document.body
         << "</p>\n</body></html>\n";
    return page.str();
}

Serp mock_search(const MockCorpus& corpus, const DefectSet& defects, std::string_view query_text,
                 int count) {
    std::vector<std::string> tokens = tokens_of(query_text);
    if (!defects.count(Defect::no_digit_folding)) apply_replace(tokens, MapKind::digit);
    if (!defects.count(Defect::no_char_folding)) apply_replace(tokens, MapKind::character);
    if (!defects.count(Defect::no_compound_split)) apply_replace(tokens, MapKind::compound);
    if (!defects.count(Defect::no_spell_correction)) apply_replace(tokens, MapKind::spell);
    if (!defects.count(Defect::no_synonym_expansion)) apply_expand(tokens);

    std::vector<std::pair<std::uint64_t, int>> scored;  // (score, doc id)
    for (const auto& document : corpus.documents) {
        std::uint64_t score = 0;
        for (const auto& token : tokens) {
            const auto it = document.token_counts.find(token);
            if (it != document.token_counts.end()) score += it->second;
        }
        if (score > 0) scored.emplace_back(score, document.id);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    if (static_cast<int>(scored.size()) > count) scored.resize(static_cast<std::size_t>(count));

    Serp serp;
    serp.engine_id = engine_id_for(defects);
    serp.requested_count = count;
    serp.retrieved_at_ms = 0;
    for (const auto& [score, doc_id] : scored) {
        (void)score;
        const MockDocument& document = corpus.documents[static_cast<std::size_t>(doc_id)];
        SerpEntry entry;
        entry.url = document.url;
        entry.title = document.title;
        entry.snippet = first_sentence(document.body);
        serp.entries.push_back(std::move(entry));
    }
    if (defects.count(Defect::shuffled_rank)) {
        SplitMix64 rng(mix_seed(corpus.seed, fnv1a64(query_text)));
        for (std::size_t i = serp.entries.size(); i > 1; --i)
            std::swap(serp.entries[i - 1], serp.entries[rng.below(i)]);
    }
    for (std::size_t i = 0; i < serp.entries.size(); ++i)
        serp.entries[i].rank = static_cast<int>(i) + 1;
    return serp;
}

EmitResult emit_fixtures(const MockCorpus& corpus, const DefectSet& defects,
                         const std::string& engine_id, FixtureCache& cache) {
    EmitResult result;
    result.engine_id = engine_id;
    const auto queries = bundled_queryset();
    for (const auto& query : queries.queries) {
        Serp serp = mock_search(corpus, defects, query.query_text, 10);
        serp.engine_id = engine_id;
        serp.query_id = query.query_id;
        cache.store_serp_text(engine_id, query.query_id, serialize_serp(serp));
        ++result.serps;
    }
    for (const auto& document : corpus.documents) {
        PageRecord record;
        record.url = document.url;
        record.final_url = document.url;
        record.status = 200;
        record.retrieved_at_ms = 0;
        record.body = document.html;
        cache.store_page(record);
        ++result.pages;
    }
    return result;
}

}  // namespace serpgauge::mock
