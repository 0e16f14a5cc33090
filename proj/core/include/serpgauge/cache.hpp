#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace serpgauge {

std::string sha256_hex(std::string_view bytes);

struct PageRecord {
    std::string url;        // normalized request URL, the cache key
    std::string final_url;  // where redirects ended up
    int status = 0;
    std::int64_t retrieved_at_ms = 0;
    std::string body;
};

// On-disk fixture store:
//   <root>/serp/<engine_id>/<query_id>.json
//   <root>/pages/<sha256 of normalized url>.bin  (+ sidecar .meta.json)
// Entries are append-only. A key is written at most once: the first writer
// lands its bytes atomically and later writers observe the existing entry, so
// concurrent recorders cannot tear or clobber fixtures.
class FixtureCache {
public:
    explicit FixtureCache(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }

    bool has_serp(std::string_view engine_id, std::string_view query_id) const;
    std::optional<std::string> load_serp_text(std::string_view engine_id,
                                              std::string_view query_id) const;
    // Returns true when this call created the entry.
    bool store_serp_text(std::string_view engine_id, std::string_view query_id,
                         std::string_view json_text);

    bool has_page(std::string_view url) const;
    std::optional<PageRecord> load_page(std::string_view url) const;
    bool store_page(const PageRecord& record);

    // Content address of a URL: sha256 of its normalized form.
    static std::string page_key(std::string_view url);

    std::filesystem::path serp_path(std::string_view engine_id, std::string_view query_id) const;
    std::filesystem::path page_body_path(std::string_view url) const;

private:
    std::filesystem::path root_;
};

}  // namespace serpgauge
