#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace serpgauge::textproc {

struct NormalizeOptions {
    bool record_trace = false;
};

/// Output of normalize_text. `folded` is the text after composition, folding,
/// lowercasing and whitespace collapse; re-normalizing it (or the tokens
/// joined with spaces) reproduces `tokens`.
struct NormalizedText {
    std::string raw;
    std::string folded;
    std::vector<std::string> tokens;
    std::vector<std::string> trace;  // applied folding rule names, when requested
};

NormalizedText normalize_text(std::string_view raw, const NormalizeOptions& options = {});

/// Version tag of the embedded folding table.
int folding_table_version();

enum class Part : int { url = 0, title, meta, headings, body, anchors };

inline constexpr std::array<Part, 6> kAllParts = {Part::url,      Part::title, Part::meta,
                                                  Part::headings, Part::body,  Part::anchors};

std::string_view part_name(Part part);
Part part_from_name(std::string_view name);

struct SegmentedDocument {
    std::string url;
    std::int64_t fetched_at_ms = 0;  // caller-supplied; not derived from content
    std::array<NormalizedText, 6> parts;
    std::size_t body_length = 0;  // token count of the body part
    int url_depth = 0;            // non-empty path segments

    const NormalizedText& part(Part p) const { return parts[static_cast<std::size_t>(p)]; }
    NormalizedText& part(Part p) { return parts[static_cast<std::size_t>(p)]; }
};

/// Splits an HTML payload into the six document parts. Throws
/// SegmentationError when the payload does not decode as text.
SegmentedDocument segment_html(std::string_view html_bytes, std::string_view url,
                               std::int64_t fetched_at_ms = 0);

/// Occurrences of metric term `m` in a part: token frequency for single-token
/// terms, overlapping window count for multi-token terms. Matching is on
/// normalized tokens. Throws std::invalid_argument when `m` normalizes to
/// zero tokens.
std::size_t count_occurrences(const NormalizedText& part, std::string_view metric_term);

struct ShallowOptions {
    std::vector<std::string> markers;  // feature "marker:<m>" = 1 iff m occurs in body
};

/// Shallow features need no universal set: body_length, url_depth,
/// readability (mean sentence length proxy) and configured marker occurrence.
std::map<std::string, double> shallow_features(const SegmentedDocument& document,
                                               const ShallowOptions& options = {});

/// Feature ids reserved for shallow features that require third-party data
/// and are never computed here; scorers treat them as 0 and warn.
const std::vector<std::string>& reserved_shallow_features();

}  // namespace serpgauge::textproc
