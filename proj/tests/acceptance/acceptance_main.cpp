// Acceptance gate: end-to-end checks over the assembled system, one PASS or
// FAIL line per criterion. Exits nonzero when any criterion fails.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "serpgauge/errors.hpp"
#include "serpgauge/metrics.hpp"
#include "serpgauge/pipeline.hpp"
#include "serpgauge/queryset.hpp"
#include "serpgauge/report.hpp"
#include "serpgauge/rng.hpp"
#include "serpgauge/scoring.hpp"
#include "serpgauge/stats.hpp"
#include "serpgauge/textproc.hpp"

using namespace serpgauge;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report_line(const char* name, bool pass, const std::string& detail) {
    std::printf("%s %s%s%s\n", pass ? "PASS" : "FAIL", name, detail.empty() ? "" : ": ",
                detail.c_str());
    if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool close_rel(double a, double b, double tolerance) {
    const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    return std::fabs(a - b) <= tolerance * scale;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const char* tag) {
        path = fs::temp_directory_path() /
               (std::string("serpgauge-accept-") + tag + "-" + std::to_string(::getpid()));
        std::error_code discard;
        fs::remove_all(path, discard);
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code discard;
        fs::remove_all(path, discard);
    }
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// ---- scoring identity over random networks ----

const std::vector<std::string>& vocabulary() {
    static const std::vector<std::string> kWords = {"سیب",  "انار", "گلابی", "به",   "آلو",
                                                    "توت",  "مویز", "خرما",  "انجیر", "زغال"};
    return kWords;
}

std::string token_run(SplitMix64& rng, int max_repeats) {
    std::string out;
    for (const auto& word : vocabulary()) {
        const int repeats = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_repeats)));
        for (int i = 0; i < repeats; ++i) {
            out += word;
            out.push_back(' ');
        }
    }
    return out;
}

textproc::SegmentedDocument random_document(SplitMix64& rng, const std::string& url) {
    std::string html = "<html><head><title>" + token_run(rng, 3) + "</title>";
    html += "<meta name=\"description\" content=\"" + token_run(rng, 3) + "\">";
    html += "</head><body><h2>" + token_run(rng, 3) + "</h2><p>" + token_run(rng, 5) + "</p>";
    html += "<a href=\"/x\">" + token_run(rng, 2) + "</a></body></html>";
    return textproc::segment_html(html, url);
}

// The scoring rule restated from scratch: observation, band or raw value,
// set-total weight, part importance. Shares nothing with the library's
// accumulation path.
double independent_score(const scoring::DecisionNetwork& network,
                         const textproc::SegmentedDocument& document) {
    double total = 0.0;
    for (const auto& node : network.features) {
        double observation = 0.0;
        switch (node.kind) {
            case scoring::FeatureKind::descriptive_term:
            case scoring::FeatureKind::exclusive_term:
                try {
                    observation = static_cast<double>(
                        textproc::count_occurrences(document.part(node.part), node.metric));
                } catch (const std::invalid_argument&) {
                    observation = 0.0;
                }
                break;
            case scoring::FeatureKind::doc_length:
                observation = static_cast<double>(document.body_length);
                break;
            case scoring::FeatureKind::url_depth:
                observation = static_cast<double>(document.url_depth);
                break;
            case scoring::FeatureKind::readability:
                observation = textproc::shallow_features(document).at("readability");
                break;
            case scoring::FeatureKind::shallow_marker:
                observation =
                    textproc::count_occurrences(document.part(node.part), node.metric) > 0 ? 1.0
                                                                                           : 0.0;
                break;
        }
        double x = 0.0;
        if (node.kind == scoring::FeatureKind::descriptive_term ||
            node.kind == scoring::FeatureKind::exclusive_term) {
            if (node.x_mode == scoring::XMode::raw_count)
                x = observation;
            else
                x = (observation > 0.0 && observation >= node.theta.lo &&
                     observation <= node.theta.hi)
                        ? 1.0
                        : 0.0;
        } else {
            x = (observation >= node.theta.lo && observation <= node.theta.hi) ? 1.0 : 0.0;
        }
        const double w = node.theta.total > 0.0 ? observation / node.theta.total : 0.0;
        total += x * w * network.importance(node.part);
    }
    return total;
}

bool criterion_network_identity(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    SplitMix64 rng(20260821);
    double worst = 0.0;
    for (int round = 0; round < 1000; ++round) {
        std::vector<textproc::SegmentedDocument> universe;
        const int members = 3 + static_cast<int>(rng.below(4));
        for (int m = 0; m < members; ++m) {
            std::string url = "https://u" + std::to_string(round) + ".ir";
            const int depth = static_cast<int>(rng.below(4));
            for (int d = 0; d < depth; ++d) url += "/s" + std::to_string(d);
            universe.push_back(random_document(rng, url));
        }

        queryset::QuerySpec query;
        query.query_id = "r" + std::to_string(round);
        const int n_terms = 1 + static_cast<int>(rng.below(8));
        for (int t = 0; t < n_terms; ++t) {
            const auto& word = vocabulary()[rng.below(vocabulary().size())];
            if (rng.below(2) == 0)
                query.descriptive_terms.push_back(word);
            else
                query.exclusive_terms.push_back(word);
        }

        scoring::NetworkOptions options;
        for (auto& importance : options.part_importance)
            importance = static_cast<double>(rng.below(17)) / 4.0;  // 0 .. 4 in steps of .25

        const auto network = scoring::build_theta(universe, query, options);
        const auto candidate = random_document(rng, "https://c.ir/p/" + std::to_string(round));
        const double fast = scoring::doc_relevancy_score(network, candidate);
        const double slow = independent_score(network, candidate);
        worst = std::max(worst, std::fabs(fast - slow));
        if (!close_rel(fast, slow, 1e-12)) {
            detail = "mismatch at round " + std::to_string(round) + ": " + std::to_string(fast) +
                     " vs " + std::to_string(slow);
            return false;
        }
    }
    const double elapsed = seconds_since(start);
    if (elapsed >= 5.0) {
        detail = "too slow: " + std::to_string(elapsed) + "s";
        return false;
    }
    std::ostringstream out;
    out << "1000 random networks agree within 1e-12 (worst gap " << worst << ", "
        << elapsed << "s)";
    detail = out.str();
    return true;
}

// ---- hand-checked network values ----

textproc::SegmentedDocument doc_with(const std::string& url, const std::string& word, int count) {
    std::string body = "<body><p>";
    for (int i = 0; i < count; ++i) {
        body += word;
        body.push_back(' ');
    }
    body += "</p></body>";
    return textproc::segment_html(body, url);
}

const scoring::FeatureNode* body_term_node(const scoring::DecisionNetwork& network,
                                           const std::string& metric) {
    for (const auto& node : network.features)
        if (node.part == textproc::Part::body && node.metric == metric &&
            (node.kind == scoring::FeatureKind::descriptive_term ||
             node.kind == scoring::FeatureKind::exclusive_term))
            return &node;
    return nullptr;
}

bool criterion_hand_values(std::string& detail) {
    queryset::QuerySpec query;
    query.query_id = "hand";
    query.descriptive_terms = {"سیب"};

    {
        const std::vector<textproc::SegmentedDocument> universe = {
            doc_with("https://u.ir/1", "سیب", 2), doc_with("https://u.ir/2", "سیب", 3),
            doc_with("https://u.ir/3", "سیب", 5)};
        const auto network = scoring::build_theta(universe, query);
        const auto* node = body_term_node(network, "سیب");
        if (!node || node->theta.total != 10.0) {
            detail = "set total expected 10";
            return false;
        }
        const auto candidate = doc_with("https://c.ir/x", "سیب", 2);
        if (scoring::feature_weight(*node, candidate) != 0.2) {
            detail = "weight 2/10 expected exactly 0.2";
            return false;
        }
    }
    {
        scoring::FeatureNode empty;
        empty.kind = scoring::FeatureKind::descriptive_term;
        empty.part = textproc::Part::body;
        empty.metric = "غایب";
        if (scoring::feature_weight(empty, doc_with("https://c.ir/y", "غایب", 3)) != 0.0) {
            detail = "zero set total must weigh 0";
            return false;
        }
    }
    {
        const std::vector<textproc::SegmentedDocument> universe = {
            doc_with("https://u.ir/1", "سیب", 4), doc_with("https://u.ir/2", "انار", 1),
            doc_with("https://u.ir/3", "انار", 1)};
        const auto network = scoring::build_theta(universe, query);
        const auto* node = body_term_node(network, "سیب");
        const auto candidate = doc_with("https://c.ir/z", "سیب", 4);
        if (!node || scoring::feature_weight(*node, candidate) != 1.0) {
            detail = "matching the single carrier must weigh 1.0";
            return false;
        }
    }
    {
        const std::vector<textproc::SegmentedDocument> universe = {
            doc_with("https://u.ir/1", "سیب", 10), doc_with("https://u.ir/2", "سیب", 12),
            doc_with("https://u.ir/3", "سیب", 15)};
        const auto network = scoring::build_theta(universe, query);
        const auto* node = body_term_node(network, "سیب");
        if (!node || node->theta.lo != 10.0 || node->theta.hi != 15.0) {
            detail = "band over {10,12,15} expected [10,15]";
            return false;
        }
        const struct {
            int count;
            double value;
        } cases[] = {{9, 0.0}, {10, 1.0}, {12, 1.0}, {15, 1.0}, {16, 0.0}};
        for (const auto& c : cases) {
            const auto candidate = doc_with("https://c.ir/b", "سیب", c.count);
            if (scoring::feature_value(*node, candidate) != c.value) {
                detail = "band membership wrong at count " + std::to_string(c.count);
                return false;
            }
        }
    }
    detail = "set-total weights, zero-total guard, and band membership hold exactly";
    return true;
}

// ---- coefficient recovery on planted preferences ----

double gaussian(SplitMix64& rng) {
    // Box-Muller over two uniforms in (0, 1]
    const double u1 =
        (static_cast<double>(rng.next() >> 11) + 1.0) / 9007199254740993.0;
    const double u2 = static_cast<double>(rng.next() >> 11) / 9007199254740992.0;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
}

std::vector<std::vector<scoring::LabeledCandidate>> planted_queries(std::uint64_t seed,
                                                                    int n_queries) {
    const std::map<std::string, double> lambda_star = {
        {"title", 2.0}, {"url", 1.0}, {"headings", 0.5}, {"anchors", 0.25}, {"meta", 1.5}};
    SplitMix64 rng(seed);
    std::vector<std::vector<scoring::LabeledCandidate>> queries;
    for (int q = 0; q < n_queries; ++q) {
        std::vector<std::pair<double, scoring::LabeledCandidate>> scored;
        for (int c = 0; c < 10; ++c) {
            scoring::LabeledCandidate candidate;
            double utility = 0.0;
            for (const auto& [family, weight] : lambda_star) {
                const double x = static_cast<double>(rng.next() >> 11) / 9007199254740992.0;
                candidate.features[family] = x;
                utility += weight * x;
            }
            utility += 0.01 * gaussian(rng);
            scored.emplace_back(utility, std::move(candidate));
        }
        std::sort(scored.begin(), scored.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });
        std::vector<scoring::LabeledCandidate> group;
        for (std::size_t i = 0; i < scored.size(); ++i) {
            scored[i].second.grade = i < 2 ? 3 : i < 5 ? 2 : i < 8 ? 1 : 0;
            group.push_back(std::move(scored[i].second));
        }
        queries.push_back(std::move(group));
    }
    return queries;
}

bool criterion_weight_recovery(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    const auto all = planted_queries(404, 20);  // 20 queries x 10 candidates = 200
    const std::vector<std::vector<scoring::LabeledCandidate>> train(all.begin(),
                                                                    all.begin() + 10);
    const std::vector<std::vector<scoring::LabeledCandidate>> held(all.begin() + 10, all.end());

    scoring::LinearScoreModel initial;
    for (const char* family : {"title", "url", "headings", "anchors", "meta"})
        initial.lambda[family] = 0.0;

    const auto fitted = scoring::tune_lambda(train, initial, 2024);
    const double held_e = scoring::mean_agreement(held, fitted.model);

    const auto refit = scoring::tune_lambda(train, initial, 2024);
    if (refit.model.lambda != fitted.model.lambda || refit.e_train != fitted.e_train) {
        detail = "refit with the same seed diverged";
        return false;
    }
    const double elapsed = seconds_since(start);
    if (elapsed >= 10.0) {
        detail = "too slow: " + std::to_string(elapsed) + "s";
        return false;
    }
    std::ostringstream out;
    out << "held-out agreement " << held_e << " (train " << fitted.e_train << ", " << elapsed
        << "s)";
    detail = out.str();
    return held_e >= 0.95;
}

// ---- judged serp fixture table ----

metrics::JudgedSerp judged(const std::string& pattern) {
    metrics::JudgedSerp serp;
    serp.query_id = "q";
    serp.engine_id = "e";
    int rank = 1;
    for (const char c : pattern) {
        metrics::JudgedEntry entry;
        entry.rank = rank++;
        entry.judgment = c == 'R'   ? scoring::Relevance::relevant
                         : c == 'I' ? scoring::Relevance::irrelevant
                                    : scoring::Relevance::uncertain;
        serp.entries.push_back(entry);
    }
    return serp;
}

bool criterion_judged_table(std::string& detail) {
    struct Case {
        const char* pattern;
        double rr;
        double signed_rr;
        int acc10;
        double pass10;
    };
    const Case table[] = {
        {"R", 1.0, 1.0, 1, 1.0},
        {"IR", 0.5, -1.0, 1, 0.5},
        {"UR", 0.5, 0.5, 1, 0.5},
        {"III", 0.0, -1.0, 0, 0.0},
        {"", 0.0, 0.0, 0, 0.0},
        {"UU", 0.0, 0.0, 0, 0.0},
        {"RIR", 1.0, 1.0, 1, 2.0 / 3.0},
        {"UIR", 1.0 / 3.0, -1.0, 1, 1.0 / 3.0},
        {"RRR", 1.0, 1.0, 1, 1.0},
        {"IURIR", 1.0 / 3.0, -1.0, 1, 2.0 / 5.0},
        {"URI", 0.5, 0.5, 1, 1.0 / 3.0},
        {"UUUUUUR", 1.0 / 7.0, 1.0 / 7.0, 1, 1.0 / 7.0},
        {"UUUUUUUUUURU", 1.0 / 11.0, 1.0 / 11.0, 0, 0.0},
        {"RURRI", 1.0, 1.0, 1, 3.0 / 5.0},
    };
    int checked = 0;
    for (const auto& c : table) {
        const auto serp = judged(c.pattern);
        if (metrics::reciprocal_rank(serp) != c.rr ||
            metrics::signed_reciprocal_rank(serp) != c.signed_rr ||
            metrics::accuracy_at_k(serp, 10) != c.acc10 ||
            metrics::probe_pass_rate(serp, 10) != c.pass10) {
            detail = std::string("row '") + c.pattern + "' disagrees with the hand computation";
            return false;
        }
        ++checked;
    }
    detail = std::to_string(checked) +
             " judged SERPs match exactly, penalty and uncertain-skip rows included";
    return true;
}

// ---- sample size closed form ----

double quantile_by_bisection(double p) {
    double lo = -12.0, hi = 12.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double cdf = 0.5 * std::erfc(-mid / std::sqrt(2.0));
        (cdf < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

bool criterion_sample_size(std::string& detail) {
    if (queryset::required_sample_size({0.95, 0.05, 0.5}) != 385) {
        detail = "the textbook request (0.95, 0.05, 0.5) must yield 385";
        return false;
    }
    SplitMix64 rng(606);
    for (int round = 0; round < 100; ++round) {
        const double confidence = 0.5 + 0.49 * (static_cast<double>(rng.below(1000)) / 999.0);
        const double margin = 0.01 + 0.49 * (static_cast<double>(rng.below(1000)) / 999.0);
        const double proportion = 0.05 + 0.9 * (static_cast<double>(rng.below(1000)) / 999.0);
        const int via_library = queryset::required_sample_size({confidence, margin, proportion});
        const double z = quantile_by_bisection(0.5 + confidence / 2.0);
        const int via_formula =
            static_cast<int>(std::ceil(z * z * proportion * (1.0 - proportion) /
                                       (margin * margin)));
        if (via_library != via_formula) {
            detail = "disagrees with the independent formula at confidence " +
                     std::to_string(confidence);
            return false;
        }
        // tighter demands can never shrink the test set
        if (queryset::required_sample_size({confidence, margin / 2.0, proportion}) < via_library ||
            queryset::required_sample_size(
                {confidence + (1.0 - confidence) / 2.0, margin, proportion}) < via_library) {
            detail = "monotonicity violated";
            return false;
        }
    }
    detail = "385 plus 100 random requests match the closed form and stay monotone";
    return true;
}

// ---- defect localization and replay determinism (shared workspace) ----

struct MockRun {
    TempDir dir{"mock"};
    fs::path queryset_path;
    pipeline::EvaluateOutcome outcome_a;
    double emit_seconds = 0.0;
    double eval_seconds = 0.0;
    bool ready = false;
    std::string error;

    MockRun() {
        try {
            const auto start = std::chrono::steady_clock::now();
            for (const auto& defects :
                 {mock::DefectSet{}, mock::DefectSet{mock::Defect::no_digit_folding},
                  mock::DefectSet{mock::Defect::no_char_folding},
                  mock::DefectSet{mock::Defect::no_compound_split},
                  mock::DefectSet{mock::Defect::no_spell_correction},
                  mock::DefectSet{mock::Defect::no_synonym_expansion},
                  mock::DefectSet{mock::Defect::shuffled_rank}}) {
                pipeline::MockConfig config;
                config.seed = 42;
                config.size = 120;
                config.defects = defects;
                config.out_dir = dir.path;
                queryset_path = pipeline::run_mock(config).queryset_path;
            }
            emit_seconds = seconds_since(start);

            const auto eval_start = std::chrono::steady_clock::now();
            outcome_a = pipeline::run_evaluate(evaluate_config("a", 4));
            eval_seconds = seconds_since(eval_start);
            ready = true;
        } catch (const Error& e) {
            error = e.what();
        }
    }

    pipeline::RunConfig evaluate_config(const char* tag, int workers) const {
        pipeline::RunConfig config;
        config.queryset_path = queryset_path;
        config.engines_dir = dir.path / "engines";
        config.cache_dir = dir.path / "cache";
        config.out_dir = dir.path / "out" / tag;
        config.offline = true;
        config.workers = workers;
        return config;
    }
};

double headline_of(const report::RunReport& run_report, const std::string& engine,
                   const std::string& component) {
    for (const auto& row : run_report.components)
        if (row.engine_id == engine && row.component == component) return row.headline;
    throw Error("component row not found: " + engine + " " + component);
}

bool criterion_defect_localization(MockRun& run, std::string& detail) {
    if (!run.ready) {
        detail = run.error;
        return false;
    }
    const auto& run_report = run.outcome_a.report;
    std::ostringstream drops;
    double worst_drop = 1e9;
    for (const auto defect : mock::all_defects()) {
        const std::string engine = mock::engine_id_for({defect});
        const std::string own(mock::defect_component(defect));
        const double drop =
            headline_of(run_report, "mock", own) - headline_of(run_report, engine, own);
        worst_drop = std::min(worst_drop, drop);
        drops << " " << mock::defect_name(defect) << "=" << drop;
        if (drop < 0.2) {
            detail = std::string(mock::defect_name(defect)) + " dropped its component by only " +
                     std::to_string(drop);
            return false;
        }
        for (const auto& other : queryset::component_ids()) {
            if (other == own) continue;
            if (headline_of(run_report, "mock", other) != headline_of(run_report, engine, other)) {
                detail = std::string(mock::defect_name(defect)) + " leaked into " + other;
                return false;
            }
        }
    }
    const double elapsed = run.emit_seconds + run.eval_seconds;
    if (elapsed >= 60.0) {
        detail = "too slow: " + std::to_string(elapsed) + "s";
        return false;
    }
    std::ostringstream out;
    out << "each flag moved only its own component (drops:" << drops.str() << "; "
        << elapsed << "s)";
    detail = out.str();
    return true;
}

bool criterion_replay_identity(MockRun& run, std::string& detail) {
    if (!run.ready) {
        detail = run.error;
        return false;
    }
    const auto start = std::chrono::steady_clock::now();
    pipeline::run_evaluate(run.evaluate_config("b", 1));
    const double elapsed = seconds_since(start);

    const auto dir_a = run.dir.path / "out" / "a";
    const auto dir_b = run.dir.path / "out" / "b";
    std::vector<fs::path> files = {"report.json", "report.csv"};
    for (const auto& entry : fs::directory_iterator(dir_a / "charts"))
        files.push_back(fs::path("charts") / entry.path().filename());
    int compared = 0;
    for (const auto& name : files) {
        if (slurp(dir_a / name) != slurp(dir_b / name)) {
            detail = name.string() + " differs between repeated offline runs";
            return false;
        }
        ++compared;
    }
    if (elapsed >= 60.0) {
        detail = "too slow: " + std::to_string(elapsed) + "s";
        return false;
    }
    std::ostringstream out;
    out << compared << " output files byte-identical across reruns and worker counts ("
        << elapsed << "s)";
    detail = out.str();
    return true;
}

// ---- text normalization properties ----

bool criterion_normalize_properties(std::string& detail) {
    static const char* kUnits[] = {"سیب",  "انار",   "كيف", "۱۲۳", "abc", "می‌رود",
                                   "علي",  "٤٥",     "ﻛتاب", "Caf", "أصل", "x7"};
    static const char* kJoiners[] = {" ", "، ", ". ", "؟ ", "\t", "  ", "! "};
    static const char* kTokens[] = {"سیب", "انار", "کیف", "123", "abc", "علی", "45"};
    SplitMix64 rng(808);
    for (int round = 0; round < 10000; ++round) {
        std::string raw;
        const int units = 3 + static_cast<int>(rng.below(10));
        for (int u = 0; u < units; ++u) {
            raw += kUnits[rng.below(12)];
            raw += kJoiners[rng.below(7)];
        }
        const auto once = textproc::normalize_text(raw);
        const auto twice = textproc::normalize_text(once.folded);
        if (once.folded != twice.folded || once.tokens != twice.tokens) {
            detail = "normalization not idempotent on: " + raw;
            return false;
        }
        const std::string a = kTokens[rng.below(7)];
        const std::string b = kTokens[rng.below(7)];
        const auto pair_count = textproc::count_occurrences(once, a + " " + b);
        if (pair_count > textproc::count_occurrences(once, a) ||
            pair_count > textproc::count_occurrences(once, b)) {
            detail = "bigram '" + a + " " + b + "' outnumbers a unigram in: " + raw;
            return false;
        }
    }
    detail = "10000 generated inputs: fold twice = fold once, bigrams never outnumber unigrams";
    return true;
}

}  // namespace

int main() {
    std::string detail;

    detail.clear();
    report_line("network-score-identity", criterion_network_identity(detail), detail);

    detail.clear();
    report_line("network-hand-values", criterion_hand_values(detail), detail);

    detail.clear();
    report_line("planted-weight-recovery", criterion_weight_recovery(detail), detail);

    detail.clear();
    report_line("judged-serp-table", criterion_judged_table(detail), detail);

    detail.clear();
    report_line("sample-size-closed-form", criterion_sample_size(detail), detail);

    MockRun mock_run;
    detail.clear();
    report_line("defect-localization", criterion_defect_localization(mock_run, detail), detail);

    detail.clear();
    report_line("offline-replay-identity", criterion_replay_identity(mock_run, detail), detail);

    detail.clear();
    report_line("normalization-properties", criterion_normalize_properties(detail), detail);

    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
