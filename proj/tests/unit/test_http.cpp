#include <cstdlib>
#include <string>
#include <thread>

#include <doctest.h>
#include <httplib.h>

#include "serpgauge/errors.hpp"
#include "serpgauge/http.hpp"

using namespace serpgauge;

namespace {

// Loopback server driving the client under test.
struct TestServer {
    httplib::Server server;
    int port = 0;
    std::thread thread;

    TestServer() {
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~TestServer() {
        server.stop();
        thread.join();
    }
    std::string url(const std::string& path) const {
        return "http://127.0.0.1:" + std::to_string(port) + path;
    }
};

}  // namespace

TEST_CASE("plain fetches return status, body, and final url") {
    TestServer ts;
    ts.server.Get("/ok", [](const httplib::Request&, httplib::Response& response) {
        response.set_content("<p>سلام</p>", "text/html");
    });
    FakeClock clock;
    HttpClient client(clock);
    const auto response = client.get(ts.url("/ok"));
    CHECK(response.status == 200);
    CHECK(response.body == "<p>سلام</p>");
    CHECK(response.final_url == ts.url("/ok"));
}

TEST_CASE("late failure statuses surface after the retry budget") {
    TestServer ts;
    int hits = 0;
    ts.server.Get("/gone", [&](const httplib::Request&, httplib::Response& response) {
        ++hits;
        response.status = 404;
    });
    FakeClock clock;
    HttpOptions options;
    options.max_retries = 2;
    HttpClient client(clock, options);
    CHECK_THROWS_WITH_AS(client.get(ts.url("/gone")), doctest::Contains("status 404"),
                         TransportError);
    CHECK(hits == 3);  // non-success statuses count as transient
}

TEST_CASE("redirect chains are followed and recorded") {
    TestServer ts;
    ts.server.Get("/a", [](const httplib::Request&, httplib::Response& response) {
        response.status = 302;
        response.set_header("Location", "/b");
    });
    ts.server.Get("/b", [&](const httplib::Request&, httplib::Response& response) {
        response.status = 301;
        response.set_header("Location", ts.url("/c"));
    });
    ts.server.Get("/c", [](const httplib::Request&, httplib::Response& response) {
        response.set_content("landed", "text/plain");
    });
    FakeClock clock;
    HttpClient client(clock);
    const auto response = client.get(ts.url("/a"));
    CHECK(response.status == 200);
    CHECK(response.body == "landed");
    CHECK(response.final_url == ts.url("/c"));
}

TEST_CASE("redirect loops are cut off") {
    TestServer ts;
    ts.server.Get("/loop", [](const httplib::Request&, httplib::Response& response) {
        response.status = 302;
        response.set_header("Location", "/loop");
    });
    FakeClock clock;
    HttpClient client(clock);
    CHECK_THROWS_WITH_AS(client.get(ts.url("/loop")), doctest::Contains("too many redirects"),
                         TransportError);
}

TEST_CASE("oversized bodies are refused, not truncated") {
    TestServer ts;
    ts.server.Get("/big", [](const httplib::Request&, httplib::Response& response) {
        response.set_content(std::string(2000, 'x'), "text/plain");
    });
    FakeClock clock;
    HttpOptions options;
    options.max_body_bytes = 1000;
    HttpClient client(clock, options);
    CHECK_THROWS_WITH_AS(client.get(ts.url("/big")), doctest::Contains("size cap"),
                         TransportError);
    CHECK(HttpOptions{}.max_body_bytes == 5 * 1024 * 1024);
}

TEST_CASE("connection failures back off exponentially before giving up") {
    // grab a free port, then close it so connections are refused
    int dead_port = 0;
    {
        httplib::Server probe;
        dead_port = probe.bind_to_any_port("127.0.0.1");
    }
    FakeClock clock;
    HttpOptions options;
    options.max_retries = 3;
    HttpClient client(clock, options);
    CHECK_THROWS_WITH_AS(client.get("http://127.0.0.1:" + std::to_string(dead_port) + "/x"),
                         doctest::Contains("after 4 attempts"), TransportError);
    CHECK(clock.now_ms() == 1000 + 2000 + 4000);
}

TEST_CASE("the user agent is taken from the environment") {
    TestServer ts;
    std::string seen;
    ts.server.Get("/ua", [&](const httplib::Request& request, httplib::Response& response) {
        seen = request.get_header_value("User-Agent");
        response.set_content("ok", "text/plain");
    });
    ::setenv("SERPGAUGE_UA", "probe-agent/1.0", 1);
    FakeClock clock;
    HttpClient client(clock);
    ::unsetenv("SERPGAUGE_UA");
    client.get(ts.url("/ua"));
    CHECK(seen == "probe-agent/1.0");
}

TEST_CASE("non-web schemes are rejected up front") {
    FakeClock clock;
    HttpClient client(clock);
    CHECK_THROWS_WITH_AS(client.get("ftp://a.ir/x"), doctest::Contains("unsupported scheme"),
                         TransportError);
}

TEST_CASE("component encoding is byte-wise and conservative") {
    CHECK(url_encode_component("aZ09-._~") == "aZ09-._~");
    CHECK(url_encode_component("a b") == "a%20b");
    CHECK(url_encode_component("a/b?c") == "a%2Fb%3Fc");
    CHECK(url_encode_component("ف") == "%D9%81");
}
