#pragma once

#include <algorithm>
#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace timeflow {

/// Calendar day. All time anchors in a chronology have day granularity.
class Date {
public:
    Date() = default;
    explicit Date(std::chrono::sys_days days) : days_(days) {}

    /// Returns nullopt when the triple is not a valid Gregorian date.
    static std::optional<Date> from_ymd(int year, unsigned month, unsigned day);

    /// Strict "YYYY-MM-DD".
    static std::optional<Date> parse_iso(std::string_view text);

    std::string iso() const;

    int year() const;
    unsigned month() const;
    unsigned day() const;

    /// ISO weekday, Monday = 1 ... Sunday = 7.
    unsigned iso_weekday() const;

    Date plus_days(long n) const { return Date(days_ + std::chrono::days(n)); }
    long days_since_epoch() const { return days_.time_since_epoch().count(); }
    std::chrono::sys_days sys_days() const { return days_; }

    friend long operator-(const Date& a, const Date& b) {
        return (a.days_ - b.days_).count();
    }
    friend auto operator<=>(const Date&, const Date&) = default;

private:
    std::chrono::sys_days days_{};
};

/// Closed day interval [start, end].
struct DateInterval {
    Date start;
    Date end;

    static DateInterval day(Date d) { return {d, d}; }

    bool valid() const { return start <= end; }
    bool intersects(const DateInterval& o) const { return start <= o.end && o.start <= end; }
    bool contains(Date d) const { return start <= d && d <= end; }
    DateInterval hull(const DateInterval& o) const {
        return {std::min(start, o.start), std::max(end, o.end)};
    }
    long length_days() const { return end - start + 1; }

    friend auto operator<=>(const DateInterval&, const DateInterval&) = default;
};

}  // namespace timeflow
