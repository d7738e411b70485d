#include "timeflow/date.hpp"

#include <charconv>
#include <cstdio>

namespace timeflow {

namespace chr = std::chrono;

std::optional<Date> Date::from_ymd(int y, unsigned m, unsigned d) {
    chr::year_month_day ymd{chr::year{y}, chr::month{m}, chr::day{d}};
    if (!ymd.ok()) {
        return std::nullopt;
    }
    return Date(chr::sys_days{ymd});
}

std::optional<Date> Date::parse_iso(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        return std::nullopt;
    }
    auto num = [&](size_t pos, size_t len, int& out) {
        auto first = text.data() + pos;
        auto [ptr, ec] = std::from_chars(first, first + len, out);
        return ec == std::errc() && ptr == first + len;
    };
    int y = 0, m = 0, d = 0;
    if (!num(0, 4, y) || !num(5, 2, m) || !num(8, 2, d)) {
        return std::nullopt;
    }
    return from_ymd(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

std::string Date::iso() const {
    chr::year_month_day ymd{days_};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

int Date::year() const { return static_cast<int>(chr::year_month_day{days_}.year()); }
unsigned Date::month() const { return static_cast<unsigned>(chr::year_month_day{days_}.month()); }
unsigned Date::day() const { return static_cast<unsigned>(chr::year_month_day{days_}.day()); }

unsigned Date::iso_weekday() const { return chr::weekday{days_}.iso_encoding(); }

}  // namespace timeflow
