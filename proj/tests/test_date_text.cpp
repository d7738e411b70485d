#include <doctest.h>

#include <random>

#include "timeflow/date.hpp"
#include "timeflow/text.hpp"

using namespace timeflow;

namespace {

bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int month_length(int y, int m) {
    static constexpr int len[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return m == 2 && leap(y) ? 29 : len[m - 1];
}

// Day count since 1970-01-01 by walking whole years and months.
long naive_days(int y, int m, int d) {
    long n = 0;
    for (int yy = 1970; yy < y; ++yy) n += leap(yy) ? 366 : 365;
    for (int yy = y; yy < 1970; ++yy) n -= leap(yy) ? 366 : 365;
    for (int mm = 1; mm < m; ++mm) n += month_length(y, mm);
    return n + d - 1;
}

}  // namespace

TEST_CASE("day arithmetic agrees with a naive calendar walk") {
    std::mt19937 rng(1);
    std::uniform_int_distribution<int> year(1900, 2100), month(1, 12);
    for (int i = 0; i < 500; ++i) {
        int y = year(rng), m = month(rng);
        int dd = std::uniform_int_distribution<int>(1, month_length(y, m))(rng);
        auto date = Date::from_ymd(y, static_cast<unsigned>(m), static_cast<unsigned>(dd));
        REQUIRE(date);
        CHECK(date->days_since_epoch() == naive_days(y, m, dd));
        CHECK(date->year() == y);
        CHECK(date->month() == static_cast<unsigned>(m));
        CHECK(date->day() == static_cast<unsigned>(dd));
    }
}

TEST_CASE("invalid calendar dates are rejected") {
    CHECK_FALSE(Date::from_ymd(2017, 2, 29));
    CHECK(Date::from_ymd(2016, 2, 29));
    CHECK_FALSE(Date::from_ymd(1900, 2, 29));
    CHECK(Date::from_ymd(2000, 2, 29));
    CHECK_FALSE(Date::from_ymd(2017, 13, 1));
    CHECK_FALSE(Date::from_ymd(2017, 4, 31));
}

TEST_CASE("ISO parsing is strict") {
    CHECK(Date::parse_iso("2017-03-08")->iso() == "2017-03-08");
    CHECK_FALSE(Date::parse_iso("2017-3-8"));
    CHECK_FALSE(Date::parse_iso("2017-03-08x"));
    CHECK_FALSE(Date::parse_iso("2017-02-30"));
    CHECK_FALSE(Date::parse_iso(""));
}

TEST_CASE("weekdays and intervals") {
    CHECK(Date::from_ymd(2017, 10, 16)->iso_weekday() == 1);  // a Monday
    CHECK(Date::from_ymd(2017, 10, 22)->iso_weekday() == 7);
    DateInterval a{*Date::from_ymd(2017, 1, 1), *Date::from_ymd(2017, 1, 10)};
    DateInterval b{*Date::from_ymd(2017, 1, 10), *Date::from_ymd(2017, 2, 1)};
    DateInterval c{*Date::from_ymd(2017, 1, 11), *Date::from_ymd(2017, 2, 1)};
    CHECK(a.intersects(b));
    CHECK_FALSE(a.intersects(c));
    CHECK(a.length_days() == 10);
    CHECK(a.hull(c) == DateInterval{a.start, c.end});
}

TEST_CASE("tokens keep byte offsets and accented words") {
    std::string s = "Zo hadden we het niet bedoeld, één keer.";
    auto toks = text::tokenize(s);
    REQUIRE(toks.size() == 8);
    for (const auto& t : toks) {
        CHECK(s.substr(t.begin, t.end - t.begin) == t.view);
    }
    CHECK(toks[6].view == "één");
}

TEST_CASE("sentence splitting respects abbreviations and initials") {
    std::string s = "Mr. Jansen wrote to J. Frederik. The answer came. 2017 was late!\n\nNew paragraph here";
    auto spans = text::split_sentences(s);
    std::vector<std::string> got;
    for (const auto& sp : spans) got.push_back(s.substr(sp.begin, sp.end - sp.begin));
    CHECK(got == std::vector<std::string>{"Mr. Jansen wrote to J. Frederik.", "The answer came.",
                                          "2017 was late!", "New paragraph here"});
}

TEST_CASE("bounded search is case-insensitive and whole-word") {
    std::string s = "CAF team, caf-team and the caffeine CAF";
    auto hits = text::find_bounded(s, "caf");
    std::vector<std::size_t> begins;
    for (const auto& h : hits) begins.push_back(h.begin);
    CHECK(begins == std::vector<std::size_t>{0, 10, 36});
}

TEST_CASE("slugs and normalization") {
    CHECK(text::slug("Tax Authorities") == "tax-authorities");
    CHECK(text::slug("  CAF 11 / team ") == "caf-11-team");
    CHECK(text::normalize_for_similarity("  A  b\n\tC ") == "a b c");
    CHECK(text::iequals("Belastingdienst", "BELASTINGDIENST"));
    CHECK(text::trim("\t x \n") == "x");
}
