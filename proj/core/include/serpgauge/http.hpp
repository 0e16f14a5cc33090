#pragma once

#include <cstdint>
#include <memory>
#include <string>

namespace serpgauge {

// Time source behind politeness delays and retry backoff. Injected so tests
// can drive it without waiting.
class Clock {
public:
    virtual ~Clock() = default;
    virtual std::int64_t now_ms() = 0;
    virtual void sleep_ms(std::int64_t duration_ms) = 0;
};

class SystemClock : public Clock {
public:
    std::int64_t now_ms() override;
    void sleep_ms(std::int64_t duration_ms) override;
};

// Advances only when slept. now_ms starts at 0.
class FakeClock : public Clock {
public:
    std::int64_t now_ms() override { return now_; }
    void sleep_ms(std::int64_t duration_ms) override {
        if (duration_ms > 0) now_ += duration_ms;
    }
    void advance_ms(std::int64_t duration_ms) { now_ += duration_ms; }

private:
    std::int64_t now_ = 0;
};

struct HttpOptions {
    std::int64_t timeout_ms = 15000;
    int max_retries = 3;
    std::int64_t backoff_base_ms = 1000;  // doubles per retry
    std::size_t max_body_bytes = 5 * 1024 * 1024;
    int max_redirects = 5;
};

struct HttpResponse {
    int status = 0;
    std::string body;
    std::string final_url;  // terminus of any redirect chain
};

// Minimal GET client. Redirects are followed manually so the final URL is
// known; bodies larger than the cap, exhausted retries, and non-success
// statuses each raise TransportError with a distinguishing message. Honors
// SERPGAUGE_PROXY and SERPGAUGE_UA from the environment.
class HttpClient {
public:
    explicit HttpClient(Clock& clock, HttpOptions options = {});
    ~HttpClient();

    HttpResponse get(const std::string& url);

    const HttpOptions& options() const { return options_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    Clock& clock_;
    HttpOptions options_;
};

// Percent-encodes everything outside the unreserved set, byte-wise.
std::string url_encode_component(std::string_view text);

}  // namespace serpgauge
