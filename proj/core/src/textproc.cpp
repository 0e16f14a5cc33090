#include "serpgauge/textproc.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

#include "serpgauge/errors.hpp"
#include "serpgauge/html.hpp"
#include "serpgauge/unicode.hpp"
#include "serpgauge/url.hpp"

#include "serpgauge/folding_table_data.inc"

namespace serpgauge::textproc {

namespace {

struct FoldingTable {
    int version = 0;
    // (base, combining mark) -> (composed, rule name)
    std::map<std::pair<char32_t, char32_t>, std::pair<char32_t, std::string>> compose;
    // codepoint -> (replacement, rule name)
    std::map<char32_t, std::pair<char32_t, std::string>> fold;
};

char32_t parse_hex_cp(const std::string& field) {
    return static_cast<char32_t>(std::stoul(field, nullptr, 16));
}

FoldingTable parse_folding_table(std::string_view text) {
    FoldingTable table;
    std::istringstream lines{std::string(text)};
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string kind;
        fields >> kind;
        if (kind == "version") {
            fields >> table.version;
        } else if (kind == "compose") {
            std::string base, mark, out, name;
            fields >> base >> mark >> out >> name;
            table.compose[{parse_hex_cp(base), parse_hex_cp(mark)}] = {parse_hex_cp(out), name};
        } else if (kind == "fold") {
            std::string from, to, name;
            fields >> from >> to >> name;
            table.fold[parse_hex_cp(from)] = {parse_hex_cp(to), name};
        } else {
            throw InputError("folding table: unknown record '" + kind + "'");
        }
    }
    return table;
}

const FoldingTable& folding_table() {
    static const FoldingTable table = parse_folding_table(kCharFoldingTableV1);
    return table;
}

void record_rule(std::vector<std::string>& trace, const std::string& name) {
    if (std::find(trace.begin(), trace.end(), name) == trace.end()) trace.push_back(name);
}

std::size_t count_sentence_marks(std::string_view raw) {
    const auto decoded = unicode::decode_utf8(raw);
    std::size_t count = 0;
    for (const auto cp : decoded.codepoints) {
        switch (cp) {
            case '.':
            case '!':
            case '?':
            case 0x61F:   // Arabic question mark
            case 0x6D4:   // Arabic full stop
            case 0x2026:  // ellipsis
                ++count;
                break;
            default:
                break;
        }
    }
    return count;
}

}  // namespace

int folding_table_version() { return folding_table().version; }

NormalizedText normalize_text(std::string_view raw, const NormalizeOptions& options) {
    const FoldingTable& table = folding_table();
    NormalizedText out;
    out.raw.assign(raw);

    auto decoded = unicode::decode_utf8(raw);

    // Canonical composition of (base, combining mark) pairs.
    std::vector<char32_t> composed;
    composed.reserve(decoded.codepoints.size());
    for (const auto cp : decoded.codepoints) {
        if (!composed.empty()) {
            const auto it = table.compose.find({composed.back(), cp});
            if (it != table.compose.end()) {
                composed.back() = it->second.first;
                if (options.record_trace) record_rule(out.trace, it->second.second);
                continue;
            }
        }
        composed.push_back(cp);
    }

    // Folding and Latin lowercasing, per codepoint.
    for (auto& cp : composed) {
        const auto it = table.fold.find(cp);
        if (it != table.fold.end()) {
            cp = it->second.first;
            if (options.record_trace) record_rule(out.trace, it->second.second);
        } else {
            cp = unicode::lowercase_latin(cp);
        }
    }

    // Whitespace collapse for the folded form; token split on whitespace and
    // punctuation. ZWNJ stays inside tokens.
    std::string token;
    bool pending_space = false;
    const auto flush_token = [&] {
        if (token.empty()) return;
        // A token carrying only ZWNJ has no content.
        bool only_zwnj = true;
        for (const auto tcp : unicode::decode_utf8(token).codepoints) {
            if (tcp != unicode::kZwnj) {
                only_zwnj = false;
                break;
            }
        }
        if (!only_zwnj) out.tokens.push_back(token);
        token.clear();
    };
    for (const auto cp : composed) {
        if (unicode::is_whitespace(cp)) {
            flush_token();
            pending_space = !out.folded.empty();
            continue;
        }
        if (pending_space) {
            out.folded.push_back(' ');
            pending_space = false;
        }
        unicode::append_utf8(out.folded, cp);
        if (unicode::is_separator_punct(cp)) {
            flush_token();
        } else {
            unicode::append_utf8(token, cp);
        }
    }
    flush_token();
    return out;
}

std::string_view part_name(Part part) {
    switch (part) {
        case Part::url:
            return "url";
        case Part::title:
            return "title";
        case Part::meta:
            return "meta";
        case Part::headings:
            return "headings";
        case Part::body:
            return "body";
        case Part::anchors:
            return "anchors";
    }
    return "";
}

Part part_from_name(std::string_view name) {
    for (const auto part : kAllParts)
        if (part_name(part) == name) return part;
    throw InputError("unknown document part '" + std::string(name) + "'");
}

SegmentedDocument segment_html(std::string_view html_bytes, std::string_view url,
                               std::int64_t fetched_at_ms) {
    const auto decoded = unicode::decode_utf8(html_bytes);
    std::size_t nul_count = 0;
    for (const auto cp : decoded.codepoints)
        if (cp == 0) ++nul_count;
    if (!html_bytes.empty() &&
        (decoded.invalid_bytes * 2 > html_bytes.size() || nul_count * 8 > html_bytes.size())) {
        throw SegmentationError(std::string(url), "payload is not UTF-8 text");
    }
    const std::string text = unicode::encode_utf8(decoded.codepoints);
    const html::Document document = html::Document::parse(text);

    std::string title_text;
    std::string meta_text;
    std::string headings_text;
    std::string anchors_text;
    int body_index = -1;

    const auto append_with_space = [](std::string& dest, const std::string& piece) {
        if (piece.empty()) return;
        if (!dest.empty()) dest.push_back(' ');
        dest.append(piece);
    };

    for (int i = 0; i < document.size(); ++i) {
        const html::Node& node = document.node(i);
        if (node.kind != html::Node::Kind::element) continue;
        if (node.tag == "title" && title_text.empty()) {
            title_text = document.text_beneath(i);
        } else if (node.tag == "meta" && meta_text.empty()) {
            const auto* name = node.attr("name");
            const auto* content = node.attr("content");
            if (name && content) {
                std::string lowered(*name);
                std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                               [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
                if (lowered == "description") meta_text = *content;
            }
        } else if (node.tag == "h1" || node.tag == "h2" || node.tag == "h3") {
            append_with_space(headings_text, document.text_beneath(i));
        } else if (node.tag == "a") {
            append_with_space(anchors_text, document.text_beneath(i));
        } else if (node.tag == "body" && body_index < 0) {
            body_index = i;
        }
    }

    static const std::vector<std::string> kBoilerplate = {"script", "style",    "nav",
                                                          "footer", "noscript", "template"};
    std::vector<std::string> body_skip = kBoilerplate;
    if (body_index < 0) body_skip.push_back("head");
    const std::string body_text =
        document.text_beneath(body_index < 0 ? document.root() : body_index, body_skip);

    SegmentedDocument out;
    out.url.assign(url);
    out.fetched_at_ms = fetched_at_ms;

    std::string url_text;
    int depth = 0;
    try {
        const auto parsed = parse_url(normalize_url(url));
        url_text = parsed.host;
        std::replace(url_text.begin(), url_text.end(), '.', ' ');
        for (const auto& segment : split_path_segments(parsed.path)) {
            url_text.push_back(' ');
            url_text.append(segment);
            ++depth;
        }
    } catch (const InputError&) {
        url_text.assign(url);
    }

    out.part(Part::url) = normalize_text(url_text);
    out.part(Part::title) = normalize_text(title_text);
    out.part(Part::meta) = normalize_text(meta_text);
    out.part(Part::headings) = normalize_text(headings_text);
    out.part(Part::body) = normalize_text(body_text);
    out.part(Part::anchors) = normalize_text(anchors_text);
    out.body_length = out.part(Part::body).tokens.size();
    out.url_depth = depth;
    return out;
}

std::size_t count_occurrences(const NormalizedText& part, std::string_view metric_term) {
    const auto needle = normalize_text(metric_term).tokens;
    if (needle.empty())
        throw std::invalid_argument("count_occurrences: metric term normalizes to zero tokens");
    const auto& haystack = part.tokens;
    if (needle.size() > haystack.size()) return 0;
    if (needle.size() == 1) {
        return static_cast<std::size_t>(std::count(haystack.begin(), haystack.end(), needle[0]));
    }
    std::size_t count = 0;
    for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
        if (std::equal(needle.begin(), needle.end(), haystack.begin() + static_cast<long>(i)))
            ++count;
    }
    return count;
}

std::map<std::string, double> shallow_features(const SegmentedDocument& document,
                                               const ShallowOptions& options) {
    std::map<std::string, double> out;
    const auto& body = document.part(Part::body);
    out["body_length"] = static_cast<double>(document.body_length);
    out["url_depth"] = static_cast<double>(document.url_depth);
    if (body.tokens.empty()) {
        out["readability"] = 0.0;
    } else {
        const auto marks = count_sentence_marks(body.raw);
        out["readability"] = static_cast<double>(body.tokens.size()) /
                             static_cast<double>(std::max<std::size_t>(1, marks));
    }
    for (const auto& marker : options.markers) {
        const auto needle = normalize_text(marker).tokens;
        double value = 0.0;
        if (!needle.empty()) value = count_occurrences(body, marker) > 0 ? 1.0 : 0.0;
        out["marker:" + marker] = value;
    }
    return out;
}

const std::vector<std::string>& reserved_shallow_features() {
    static const std::vector<std::string> kReserved = {"alexa_rank", "host_age", "publish_time"};
    return kReserved;
}

}  // namespace serpgauge::textproc
