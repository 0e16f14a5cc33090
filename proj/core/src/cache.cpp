#include "serpgauge/cache.hpp"

#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "serpgauge/errors.hpp"
#include "serpgauge/url.hpp"

namespace serpgauge {

namespace {

// Keys become file names; anything outside a safe set is replaced and a short
// content hash is appended so distinct keys cannot collide after cleaning.
std::string safe_name(std::string_view key) {
    std::string cleaned;
    cleaned.reserve(key.size());
    bool replaced = false;
    for (const char c : key) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
        if (ok) {
            cleaned.push_back(c);
        } else {
            cleaned.push_back('_');
            replaced = true;
        }
    }
    if (cleaned.empty() || replaced) cleaned += "-" + sha256_hex(key).substr(0, 8);
    return cleaned;
}

std::optional<std::string> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Atomic first-writer-wins publish: the bytes land under a temporary name and
// are linked into place; link(2) fails with EEXIST when someone else already
// published the key.
bool publish_file(const std::filesystem::path& target, std::string_view bytes) {
    std::filesystem::create_directories(target.parent_path());
    static std::atomic<std::uint64_t> counter{0};
    const std::filesystem::path temp =
        target.parent_path() /
        (".tmp-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + "-" +
         target.filename().string());
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cache: cannot write " + temp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw Error("cache: short write to " + temp.string());
    }
    const int rc = ::link(temp.c_str(), target.c_str());
    const int saved_errno = errno;
    std::error_code discard;
    std::filesystem::remove(temp, discard);
    if (rc == 0) return true;
    if (saved_errno == EEXIST) return false;
    throw Error("cache: cannot publish " + target.string());
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int digest_len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx, digest, &digest_len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw Error("sha256 digest failed");
    }
    EVP_MD_CTX_free(ctx);
    static const char* kHex = "0123456789abcdef";
    std::string out;
    out.reserve(digest_len * 2);
    for (unsigned int i = 0; i < digest_len; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0xF]);
    }
    return out;
}

FixtureCache::FixtureCache(std::filesystem::path root) : root_(std::move(root)) {}

std::filesystem::path FixtureCache::serp_path(std::string_view engine_id,
                                              std::string_view query_id) const {
    return root_ / "serp" / safe_name(engine_id) / (safe_name(query_id) + ".json");
}

std::string FixtureCache::page_key(std::string_view url) {
    return sha256_hex(normalize_url(url));
}

std::filesystem::path FixtureCache::page_body_path(std::string_view url) const {
    return root_ / "pages" / (page_key(url) + ".bin");
}

bool FixtureCache::has_serp(std::string_view engine_id, std::string_view query_id) const {
    return std::filesystem::exists(serp_path(engine_id, query_id));
}

std::optional<std::string> FixtureCache::load_serp_text(std::string_view engine_id,
                                                        std::string_view query_id) const {
    return read_file(serp_path(engine_id, query_id));
}

bool FixtureCache::store_serp_text(std::string_view engine_id, std::string_view query_id,
                                   std::string_view json_text) {
    return publish_file(serp_path(engine_id, query_id), json_text);
}

bool FixtureCache::has_page(std::string_view url) const {
    const auto body = page_body_path(url);
    auto meta = body;
    meta.replace_extension(".meta.json");
    return std::filesystem::exists(body) && std::filesystem::exists(meta);
}

std::optional<PageRecord> FixtureCache::load_page(std::string_view url) const {
    const auto body_path = page_body_path(url);
    auto meta_path = body_path;
    meta_path.replace_extension(".meta.json");
    const auto body = read_file(body_path);
    const auto meta_text = read_file(meta_path);
    if (!body || !meta_text) return std::nullopt;
    PageRecord record;
    record.body = *body;
    try {
        const auto meta = nlohmann::json::parse(*meta_text);
        record.url = meta.value("url", std::string(url));
        record.final_url = meta.value("final_url", record.url);
        record.status = meta.value("status", 0);
        record.retrieved_at_ms = meta.value("retrieved_at_ms", std::int64_t{0});
    } catch (const nlohmann::json::exception& error) {
        throw Error("cache: corrupt page metadata " + meta_path.string() + ": " + error.what());
    }
    return record;
}

bool FixtureCache::store_page(const PageRecord& record) {
    const auto body_path = page_body_path(record.url);
    auto meta_path = body_path;
    meta_path.replace_extension(".meta.json");
    nlohmann::ordered_json meta;
    meta["url"] = normalize_url(record.url);
    meta["final_url"] = record.final_url;
    meta["status"] = record.status;
    meta["retrieved_at_ms"] = record.retrieved_at_ms;
    const bool wrote_body = publish_file(body_path, record.body);
    publish_file(meta_path, meta.dump(2) + "\n");
    return wrote_body;
}

}  // namespace serpgauge
