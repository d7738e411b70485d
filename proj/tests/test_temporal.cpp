#include <doctest.h>

#include "temporal_vectors.hpp"
#include "timeflow/extract.hpp"

using namespace timeflow;
using namespace timeflow::extract;

using testing::d;
using testing::kMonday;

TEST_CASE("hand-worked temporal vectors") {
    for (const auto& v : testing::temporal_vectors()) {
        CAPTURE(v.text);
        CAPTURE(to_string(v.order));
        auto r = extract_temporal(v.text, v.reference, v.order);
        REQUIRE(r.hits.size() == 1);
        const auto& h = r.hits[0];
        CHECK(h.surface == v.surface);
        CHECK(std::string_view(v.text).substr(h.begin, h.end - h.begin) == h.surface);
        CHECK(h.interval.start == v.start);
        CHECK(h.interval.end == v.end);
    }
}

TEST_CASE("ordinal and partial forms agree") {
    auto a = extract_temporal("On the first of September", kMonday);
    auto b = extract_temporal("01/09", kMonday);
    REQUIRE(a.hits.size() == 1);
    REQUIRE(b.hits.size() == 1);
    CHECK(a.hits[0].interval == b.hits[0].interval);
}

TEST_CASE("impossible dates produce no hit") {
    CHECK(extract_temporal("29-02-2017", {}).hits.empty());
    CHECK(extract_temporal("31 April 2017", {}).hits.empty());
    CHECK(extract_temporal("32/01/2017", {}).hits.empty());
}

TEST_CASE("forms needing a reference date warn without one") {
    auto r = extract_temporal("tomorrow, or on the first of September, or next week", std::nullopt);
    CHECK(r.hits.empty());
    REQUIRE(r.warnings.size() == 3);
    for (const auto& w : r.warnings) CHECK(w.code == "temporal-unresolved");
}

TEST_CASE("several expressions keep document order") {
    std::string s = "Between 2004-07-10 and 20 May 2013, then tomorrow.";
    auto r = extract_temporal(s, kMonday);
    REQUIRE(r.hits.size() == 3);
    CHECK(r.hits[0].interval.start == d(2004, 7, 10));
    CHECK(r.hits[1].interval.start == d(2013, 5, 20));
    CHECK(r.hits[2].interval.start == d(2017, 10, 17));
    CHECK(r.hits[0].end <= r.hits[1].begin);
}

TEST_CASE("named periods") {
    NamedPeriodTable t;
    NamedPeriod summer;
    summer.phrase = "summer holidays";
    summer.recurring = true;
    summer.start_month = 7;
    summer.start_day = 15;
    summer.end_month = 8;
    summer.end_day = 31;
    NamedPeriod winter = summer;
    winter.phrase = "winter break";
    winter.start_month = 12;
    winter.start_day = 20;
    winter.end_month = 1;
    winter.end_day = 5;
    NamedPeriod fixed;
    fixed.phrase = "the parliamentary inquiry";
    fixed.fixed = {d(2020, 7, 1), d(2020, 12, 17)};
    t.periods = {summer, winter, fixed};

    auto r = extract_temporal("After the Summer Holidays and the winter break, the parliamentary inquiry.", kMonday,
                              DateOrder::dmy, t);
    REQUIRE(r.hits.size() == 3);
    CHECK(r.hits[0].interval == DateInterval{d(2017, 7, 15), d(2017, 8, 31)});
    CHECK(r.hits[1].interval == DateInterval{d(2017, 12, 20), d(2018, 1, 5)});
    CHECK(r.hits[2].interval == fixed.fixed);
    CHECK(extract_temporal("summer holidays", std::nullopt, DateOrder::dmy, t).warnings.size() == 1);
}

TEST_CASE("locale names map to part orders") {
    CHECK(parse_date_order("nl-NL") == DateOrder::dmy);
    CHECK(parse_date_order("en-US") == DateOrder::mdy);
    CHECK(parse_date_order("ymd") == DateOrder::ymd);
    CHECK_FALSE(parse_date_order("klingon"));
}
