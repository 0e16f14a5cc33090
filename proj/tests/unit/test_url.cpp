#include <doctest.h>

#include "serpgauge/errors.hpp"
#include "serpgauge/rng.hpp"
#include "serpgauge/url.hpp"

using namespace serpgauge;

TEST_CASE("parse_url splits the pieces") {
    const auto parsed = parse_url("HTTPS://User:Pw@Example.COM.:8443/a/b?x=1&y=2#frag");
    CHECK(parsed.scheme == "https");
    CHECK(parsed.host == "example.com");  // lowercased, trailing dot trimmed, userinfo dropped
    CHECK(parsed.port == 8443);
    CHECK(parsed.path == "/a/b");
    CHECK(parsed.query == "x=1&y=2");
    CHECK(parsed.fragment == "frag");
}

TEST_CASE("parse_url rejects junk") {
    CHECK_THROWS_AS(parse_url("not a url"), InputError);
    CHECK_THROWS_AS(parse_url("http://"), InputError);
    CHECK_THROWS_AS(parse_url("http://host:12ab/x"), InputError);
    CHECK_NOTHROW(parse_url("http://host"));
}

TEST_CASE("normalize_url applies the canonical form") {
    CHECK(normalize_url("HTTP://WWW.Example.COM:80/a/") == "http://example.com/a");
    CHECK(normalize_url("https://example.com:443/") == "https://example.com");
    CHECK(normalize_url("https://example.com") == "https://example.com");
    CHECK(normalize_url("https://example.com/#top") == "https://example.com");
    CHECK(normalize_url("https://example.com/a?b=1#frag") == "https://example.com/a?b=1");
    CHECK(normalize_url("http://host:8080/x") == "http://host:8080/x");
}

TEST_CASE("normalize_url strips front matter but keeps the query verbatim") {
    // %-escapes and parameter order stay untouched: the query is opaque.
    CHECK(normalize_url("https://e.com/p?b=2&a=%2F&A=x") == "https://e.com/p?b=2&a=%2F&A=x");
    CHECK(normalize_url("https://www.www.e.com/p") == "https://e.com/p");
}

TEST_CASE("normalize_url is idempotent over generated inputs") {
    static const char* kSchemes[] = {"http", "HTTP", "https", "HTTPS"};
    static const char* kHosts[] = {"Example.com", "www.example.com", "WWW.Sub.Example.COM",
                                   "a.b.c.ir", "www.site.ir."};
    static const char* kPorts[] = {"", ":80", ":443", ":8080"};
    static const char* kPaths[] = {"", "/", "/a", "/a/", "/a/b/c", "/a//b/"};
    static const char* kQueries[] = {"", "?q=x", "?a=1&b=2", "?Q=%2F"};
    static const char* kFragments[] = {"", "#f", "#a/b"};
    SplitMix64 rng(20260821);
    for (int i = 0; i < 3000; ++i) {
        const std::string url = std::string(kSchemes[rng.below(4)]) + "://" + kHosts[rng.below(5)] +
                                kPorts[rng.below(4)] + kPaths[rng.below(6)] +
                                kQueries[rng.below(4)] + kFragments[rng.below(3)];
        const std::string once = normalize_url(url);
        CHECK(normalize_url(once) == once);
    }
}

TEST_CASE("url aliases collapse to one normal form") {
    const char* aliases[] = {
        "http://www.site.ir/page/",
        "HTTP://SITE.IR:80/page",
        "http://site.ir./page#x",
    };
    const std::string expect = "http://site.ir/page";
    for (const auto* alias : aliases) CHECK(normalize_url(alias) == expect);
}

TEST_CASE("split_path_segments drops empties") {
    CHECK(split_path_segments("/a/b/c") == std::vector<std::string>{"a", "b", "c"});
    CHECK(split_path_segments("//a//b/") == std::vector<std::string>{"a", "b"});
    CHECK(split_path_segments("/") == std::vector<std::string>{});
    CHECK(split_path_segments("") == std::vector<std::string>{});
}

TEST_CASE("resolve_reference handles the three href shapes") {
    const std::string base = "https://e.com/dir/page.html";
    CHECK(resolve_reference(base, "https://other.com/x") == "https://other.com/x");
    CHECK(resolve_reference(base, "/rooted?q=1") == "https://e.com/rooted?q=1");
    CHECK(resolve_reference(base, "sibling.html") == "https://e.com/dir/sibling.html");
}
