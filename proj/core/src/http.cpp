#include "serpgauge/http.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "serpgauge/errors.hpp"
#include "serpgauge/url.hpp"

namespace serpgauge {

std::int64_t SystemClock::now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void SystemClock::sleep_ms(std::int64_t duration_ms) {
    if (duration_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(duration_ms));
}

std::string url_encode_component(std::string_view text) {
    static const char* kHex = "0123456789ABCDEF";
    std::string out;
    out.reserve(text.size());
    for (const unsigned char c : text) {
        const bool unreserved = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                                (c >= '0' && c <= '9') || c == '-' || c == '.' || c == '_' ||
                                c == '~';
        if (unreserved) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(kHex[c >> 4]);
            out.push_back(kHex[c & 0xF]);
        }
    }
    return out;
}

struct HttpClient::Impl {
    std::string proxy_host;
    int proxy_port = 0;
    std::string user_agent = "serpgauge/0.1";
};

HttpClient::HttpClient(Clock& clock, HttpOptions options)
    : impl_(std::make_unique<Impl>()), clock_(clock), options_(options) {
    if (const char* ua = std::getenv("SERPGAUGE_UA"); ua && *ua) impl_->user_agent = ua;
    if (const char* proxy = std::getenv("SERPGAUGE_PROXY"); proxy && *proxy) {
        std::string text = proxy;
        if (text.find("://") == std::string::npos) text = "http://" + text;
        try {
            const ParsedUrl parsed = parse_url(text);
            impl_->proxy_host = parsed.host;
            impl_->proxy_port = parsed.port > 0 ? parsed.port : 8080;
        } catch (const InputError&) {
            throw InputError("SERPGAUGE_PROXY is not a host:port or URL: '" + std::string(proxy) +
                             "'");
        }
    }
}

HttpClient::~HttpClient() = default;

namespace {

struct Attempt {
    int status = 0;
    std::string body;
    std::string location;
    bool size_capped = false;
    bool transport_failed = false;
    std::string error;
};

std::string origin_of(const ParsedUrl& url) {
    std::string origin = url.scheme + "://" + url.host;
    if (url.port >= 0) origin += ":" + std::to_string(url.port);
    return origin;
}

std::string request_target(const ParsedUrl& url) {
    std::string target = url.path.empty() ? "/" : url.path;
    if (!url.query.empty()) target += "?" + url.query;
    return target;
}

}  // namespace

HttpResponse HttpClient::get(const std::string& url) {
    std::string current = url;
    for (int redirects = 0; redirects <= options_.max_redirects; ++redirects) {
        const ParsedUrl parsed = parse_url(current);
        if (parsed.scheme != "http" && parsed.scheme != "https")
            throw TransportError("unsupported scheme '" + parsed.scheme + "' for " + current);

        Attempt attempt;
        for (int tries = 0; tries <= options_.max_retries; ++tries) {
            if (tries > 0)
                clock_.sleep_ms(options_.backoff_base_ms * (std::int64_t{1} << (tries - 1)));
            attempt = Attempt{};
            httplib::Client client(origin_of(parsed));
            client.set_connection_timeout(0, options_.timeout_ms * 1000);
            client.set_read_timeout(0, options_.timeout_ms * 1000);
            client.set_write_timeout(0, options_.timeout_ms * 1000);
            client.set_follow_location(false);
            if (!impl_->proxy_host.empty())
                client.set_proxy(impl_->proxy_host, impl_->proxy_port);
            httplib::Headers headers = {{"User-Agent", impl_->user_agent}};

            std::string body;
            auto result = client.Get(
                request_target(parsed), headers,
                [&](const httplib::Response& response) {
                    attempt.status = response.status;
                    if (response.has_header("Location"))
                        attempt.location = response.get_header_value("Location");
                    return true;
                },
                [&](const char* data, size_t length) {
                    if (body.size() + length > options_.max_body_bytes) {
                        attempt.size_capped = true;
                        return false;
                    }
                    body.append(data, length);
                    return true;
                });
            attempt.body = std::move(body);
            if (attempt.size_capped)
                throw TransportError("size cap exceeded (" +
                                     std::to_string(options_.max_body_bytes) + " bytes) for " +
                                     current);
            if (!result && attempt.status == 0) {
                attempt.transport_failed = true;
                attempt.error = httplib::to_string(result.error());
                continue;  // network-level failure: retry
            }
            if (attempt.status >= 200 && attempt.status < 400) break;
            // Retry non-success statuses as transient.
        }
        if (attempt.transport_failed)
            throw TransportError("transport failure for " + current + " after " +
                                 std::to_string(options_.max_retries + 1) + " attempts: " +
                                 attempt.error);
        if (attempt.status >= 300 && attempt.status < 400 && !attempt.location.empty()) {
            current = resolve_reference(current, attempt.location);
            continue;
        }
        if (attempt.status < 200 || attempt.status >= 300)
            throw TransportError("status " + std::to_string(attempt.status) + " for " + current +
                                 " after " + std::to_string(options_.max_retries + 1) +
                                 " attempts");
        HttpResponse response;
        response.status = attempt.status;
        response.body = std::move(attempt.body);
        response.final_url = current;
        return response;
    }
    throw TransportError("too many redirects for " + url);
}

}  // namespace serpgauge
