#include "serpgauge/url.hpp"

#include <cctype>

#include "serpgauge/errors.hpp"

namespace serpgauge {

namespace {

std::string to_lower_ascii(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (const char c : text) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

}  // namespace

ParsedUrl parse_url(std::string_view url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string_view::npos || scheme_end == 0)
        throw InputError("URL has no scheme: '" + std::string(url) + "'");
    ParsedUrl out;
    out.scheme = to_lower_ascii(url.substr(0, scheme_end));
    std::string_view rest = url.substr(scheme_end + 3);

    const auto fragment_at = rest.find('#');
    if (fragment_at != std::string_view::npos) {
        out.fragment.assign(rest.substr(fragment_at + 1));
        rest = rest.substr(0, fragment_at);
    }
    const auto query_at = rest.find('?');
    if (query_at != std::string_view::npos) {
        out.query.assign(rest.substr(query_at + 1));
        rest = rest.substr(0, query_at);
    }
    const auto path_at = rest.find('/');
    std::string_view authority = rest;
    if (path_at != std::string_view::npos) {
        out.path.assign(rest.substr(path_at));
        authority = rest.substr(0, path_at);
    }
    // Userinfo is accepted but discarded; it never participates in identity.
    const auto userinfo_at = authority.find('@');
    if (userinfo_at != std::string_view::npos) authority = authority.substr(userinfo_at + 1);

    const auto port_at = authority.rfind(':');
    if (port_at != std::string_view::npos) {
        const auto port_text = authority.substr(port_at + 1);
        int port = 0;
        bool numeric = !port_text.empty();
        for (const char c : port_text) {
            if (!std::isdigit(static_cast<unsigned char>(c))) {
                numeric = false;
                break;
            }
            port = port * 10 + (c - '0');
        }
        if (!numeric) throw InputError("URL has a malformed port: '" + std::string(url) + "'");
        out.port = port;
        authority = authority.substr(0, port_at);
    }
    out.host = to_lower_ascii(authority);
    while (!out.host.empty() && out.host.back() == '.') out.host.pop_back();
    if (out.host.empty()) throw InputError("URL has no host: '" + std::string(url) + "'");
    return out;
}

std::string normalize_url(std::string_view url) {
    ParsedUrl parsed = parse_url(url);
    if ((parsed.scheme == "http" && parsed.port == 80) ||
        (parsed.scheme == "https" && parsed.port == 443)) {
        parsed.port = -1;
    }
    // Repeated strip keeps the operation idempotent for hosts like www.www.x.
    while (parsed.host.rfind("www.", 0) == 0 && parsed.host.size() > 4)
        parsed.host.erase(0, 4);

    std::string path = parsed.path;
    while (path.size() > 1 && path.back() == '/') path.pop_back();
    if (path == "/") path.clear();

    std::string out = parsed.scheme + "://" + parsed.host;
    if (parsed.port >= 0) out += ":" + std::to_string(parsed.port);
    out += path;
    if (!parsed.query.empty()) out += "?" + parsed.query;
    return out;
}

std::string resolve_reference(const std::string& base, const std::string& reference) {
    if (reference.rfind("http://", 0) == 0 || reference.rfind("https://", 0) == 0)
        return reference;
    const ParsedUrl parsed = parse_url(base);
    std::string origin = parsed.scheme + "://" + parsed.host;
    if (parsed.port >= 0) origin += ":" + std::to_string(parsed.port);
    if (!reference.empty() && reference[0] == '/') return origin + reference;
    std::string dir = parsed.path;
    const auto slash = dir.rfind('/');
    dir = slash == std::string::npos ? "/" : dir.substr(0, slash + 1);
    return origin + dir + reference;
}

std::vector<std::string> split_path_segments(std::string_view path) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= path.size()) {
        auto end = path.find('/', start);
        if (end == std::string_view::npos) end = path.size();
        if (end > start) out.emplace_back(path.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

}  // namespace serpgauge
