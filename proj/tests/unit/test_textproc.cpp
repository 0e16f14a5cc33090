#include <algorithm>
#include <stdexcept>

#include <doctest.h>

#include "serpgauge/errors.hpp"
#include "serpgauge/rng.hpp"
#include "serpgauge/textproc.hpp"

using namespace serpgauge;
using textproc::normalize_text;
using textproc::Part;

TEST_CASE("arabic letter variants fold to their persian forms") {
    CHECK(normalize_text("كيف").folded == "کیف");
    CHECK(normalize_text("علي").folded == "علی");
    CHECK(normalize_text("مدرسة").folded == "مدرسه");
    CHECK(normalize_text("موسى").folded == "موسی");
}

TEST_CASE("eastern digits fold to ascii") {
    CHECK(normalize_text("۱۲۳").folded == "123");
    CHECK(normalize_text("٤٥٦").folded == "456");
    CHECK(normalize_text("سال ۱۴۰۲").tokens == std::vector<std::string>{"سال", "1402"});
}

TEST_CASE("hamza marks compose before folding") {
    // alef + combining hamza above is the same token as precomposed alef-hamza
    const auto composed = normalize_text("أحمد");
    const auto precomposed = normalize_text("أحمد");
    CHECK(composed.tokens == precomposed.tokens);
    const auto madda = normalize_text("آب");
    CHECK(madda.folded == normalize_text("آب").folded);
}

TEST_CASE("latin text lowercases, other scripts pass through") {
    CHECK(normalize_text("AbC xYZ").folded == "abc xyz");
    CHECK(normalize_text("CafÉ").folded == "café");
}

TEST_CASE("whitespace collapses and separators split tokens") {
    const auto text = normalize_text("  a \t b\n\nc  ");
    CHECK(text.folded == "a b c");
    CHECK(text.tokens == std::vector<std::string>{"a", "b", "c"});
    CHECK(normalize_text("کتاب، قلم").tokens == std::vector<std::string>{"کتاب", "قلم"});
    CHECK(normalize_text("a.b,c").tokens == std::vector<std::string>{"a", "b", "c"});
    CHECK(normalize_text("«نقل» (قول)").tokens == std::vector<std::string>{"نقل", "قول"});
}

TEST_CASE("zwnj binds tokens and never separates them") {
    const auto verb = normalize_text("می‌رود");
    REQUIRE(verb.tokens.size() == 1);
    CHECK(verb.tokens[0] == "می‌رود");
    // a run of bare ZWNJ carries nothing
    CHECK(normalize_text("a ‌ b").tokens == std::vector<std::string>{"a", "b"});
    CHECK(normalize_text("‌‌").tokens.empty());
}

TEST_CASE("normalization is idempotent") {
    for (const char* sample : {"كيف حالك؟", "سال ۱۴۰۲ بود", "Mixed متن 123", "می‌رود"}) {
        const auto once = normalize_text(sample);
        const auto twice = normalize_text(once.folded);
        CHECK(twice.folded == once.folded);
        CHECK(twice.tokens == once.tokens);
    }
}

TEST_CASE("trace names each rule once, in first-use order") {
    textproc::NormalizeOptions options;
    options.record_trace = true;
    const auto traced = normalize_text("كك يي ۱", options);
    CHECK(traced.trace == std::vector<std::string>{"arabic-kaf", "arabic-yeh", "digit-farsi-1"});
    CHECK(normalize_text("كك").trace.empty());  // off by default
}

TEST_CASE("folding table reports its version") { CHECK(textproc::folding_table_version() == 1); }

TEST_CASE("count_occurrences counts tokens and windows") {
    const auto text = normalize_text("x y x y x");
    CHECK(textproc::count_occurrences(text, "x") == 3);
    CHECK(textproc::count_occurrences(text, "y") == 2);
    CHECK(textproc::count_occurrences(text, "x y") == 2);
    CHECK(textproc::count_occurrences(text, "y x") == 2);
    CHECK(textproc::count_occurrences(text, "x y x") == 2);  // windows overlap
    CHECK(textproc::count_occurrences(text, "z") == 0);
    CHECK(textproc::count_occurrences(text, "X") == 3);  // term normalizes too
    CHECK_THROWS_AS(textproc::count_occurrences(text, "،"), std::invalid_argument);
}

TEST_CASE("bigram count never exceeds either unigram count") {
    static const char* kWords[] = {"سیب", "انار", "x", "y", "123"};
    SplitMix64 rng(11);
    for (int round = 0; round < 500; ++round) {
        std::string raw;
        for (int i = 0; i < 12; ++i) {
            raw += kWords[rng.below(5)];
            raw.push_back(' ');
        }
        const auto text = normalize_text(raw);
        const std::string a = kWords[rng.below(5)];
        const std::string b = kWords[rng.below(5)];
        const auto pair_count = textproc::count_occurrences(text, a + " " + b);
        CHECK(pair_count <= textproc::count_occurrences(text, a));
        CHECK(pair_count <= textproc::count_occurrences(text, b));
    }
}

namespace {

const char* kSampleHtml =
    "<html><head><title>عنوان صفحه</title>"
    "<META NAME=\"Description\" CONTENT=\"شرح کوتاه\">"
    "<style>p{color:red}</style></head>"
    "<body><nav>منوی سایت</nav>"
    "<h1>تیتر اصلی</h1><h2>تیتر دوم</h2><h4>چهارم</h4>"
    "<p>متن بدنه اول. متن دوم!</p>"
    "<a href=\"/x\">پیوند یک</a>"
    "<script>var hidden = 1;</script>"
    "<footer>پانوشت</footer></body></html>";

}  // namespace

TEST_CASE("segment_html routes content into the six parts") {
    const auto doc = textproc::segment_html(kSampleHtml, "https://news.site.ir/tech/2024");
    CHECK(doc.part(Part::title).tokens == std::vector<std::string>{"عنوان", "صفحه"});
    CHECK(doc.part(Part::meta).tokens == std::vector<std::string>{"شرح", "کوتاه"});
    const auto& headings = doc.part(Part::headings).tokens;
    CHECK(std::count(headings.begin(), headings.end(), "تیتر") == 2);
    CHECK(std::count(headings.begin(), headings.end(), "چهارم") == 0);  // h4 is not a heading part
    CHECK(doc.part(Part::anchors).tokens == std::vector<std::string>{"پیوند", "یک"});
    const auto& body = doc.part(Part::body).tokens;
    CHECK(std::count(body.begin(), body.end(), "بدنه") == 1);
    CHECK(std::count(body.begin(), body.end(), "hidden") == 0);  // script skipped
    CHECK(std::count(body.begin(), body.end(), "منوی") == 0);    // nav skipped
    CHECK(std::count(body.begin(), body.end(), "پانوشت") == 0);  // footer skipped
    CHECK(doc.part(Part::url).tokens ==
          std::vector<std::string>{"news", "site", "ir", "tech", "2024"});
    CHECK(doc.url_depth == 2);
    CHECK(doc.body_length == static_cast<int>(body.size()));
}

TEST_CASE("segment_html survives head-only and bodyless payloads") {
    const auto doc = textproc::segment_html("<p>محتوا بدون اسکلت</p>", "https://e.ir/");
    CHECK(!doc.part(Part::body).tokens.empty());
    CHECK(doc.url_depth == 0);
}

TEST_CASE("segment_html rejects payloads that are not text") {
    std::string binary;
    for (int i = 0; i < 400; ++i) binary.push_back(static_cast<char>(0xC0));  // truncated UTF-8
    CHECK_THROWS_AS(textproc::segment_html(binary, "https://e.ir/"), SegmentationError);
    std::string nuls = "<p>ok</p>";
    nuls.append(200, '\0');
    CHECK_THROWS_AS(textproc::segment_html(nuls, "https://e.ir/"), SegmentationError);
}

TEST_CASE("shallow features follow their definitions") {
    std::string body = "<p>";
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 10; ++j) body += "واژه ";
        body += ". ";
    }
    body += "</p>";
    const auto doc = textproc::segment_html(body, "https://h.ir/x");
    const auto features = textproc::shallow_features(doc, {});
    CHECK(features.at("body_length") == 40.0);
    CHECK(features.at("readability") == doctest::Approx(10.0));
    CHECK(features.at("url_depth") == 1.0);

    const auto empty_doc = textproc::segment_html("<p></p>", "https://h.ir/");
    const auto empty_features = textproc::shallow_features(empty_doc, {});
    CHECK(empty_features.at("body_length") == 0.0);
    CHECK(empty_features.at("readability") == 0.0);
}

TEST_CASE("markers report presence in the body") {
    const auto doc = textproc::segment_html("<p>شامل نشانه است</p>", "https://h.ir/");
    textproc::ShallowOptions options;
    options.markers = {"نشانه", "غایب"};
    const auto features = textproc::shallow_features(doc, options);
    CHECK(features.at("marker:نشانه") == 1.0);
    CHECK(features.at("marker:غایب") == 0.0);
}

TEST_CASE("segmentation is deterministic") {
    const auto a = textproc::segment_html(kSampleHtml, "https://news.site.ir/tech/2024");
    const auto b = textproc::segment_html(kSampleHtml, "https://news.site.ir/tech/2024");
    for (const auto part : textproc::kAllParts) {
        CHECK(a.part(part).folded == b.part(part).folded);
        CHECK(a.part(part).tokens == b.part(part).tokens);
    }
}
