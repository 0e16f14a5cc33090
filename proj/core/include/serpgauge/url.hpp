#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace serpgauge {

struct ParsedUrl {
    std::string scheme;
    std::string host;
    int port = -1;  // -1 when the URL names no explicit port
    std::string path;
    std::string query;
    std::string fragment;
};

// Splits an absolute http(s) URL into its pieces. Throws InputError when the
// input has no scheme or no host.
ParsedUrl parse_url(std::string_view url);

// Canonical form used wherever two URLs are compared or keyed: lowercased
// scheme and host, leading "www." stripped, default ports dropped, fragment
// dropped, trailing slash trimmed, query kept as-is. Idempotent.
std::string normalize_url(std::string_view url);

// Path components between slashes, empties skipped. "/a//b/" yields {a, b}.
std::vector<std::string> split_path_segments(std::string_view path);

// Resolves an href or Location value against the URL of the page that carried
// it: absolute references pass through, "/x" is origin-relative, anything
// else is relative to the base path's directory.
std::string resolve_reference(const std::string& base, const std::string& reference);

}  // namespace serpgauge
