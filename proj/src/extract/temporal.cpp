#include <algorithm>
#include <array>
#include <regex>

#include "timeflow/extract.hpp"
#include "timeflow/text.hpp"

namespace timeflow::extract {

std::optional<DateOrder> parse_date_order(std::string_view locale) {
    auto l = text::lower(locale);
    if (l == "dmy" || l == "d-m-y" || l == "nl" || l == "nl-nl" || l == "en-gb") {
        return DateOrder::dmy;
    }
    if (l == "mdy" || l == "m-d-y" || l == "en-us") {
        return DateOrder::mdy;
    }
    if (l == "ymd" || l == "y-m-d") {
        return DateOrder::ymd;
    }
    return std::nullopt;
}

std::string_view to_string(DateOrder order) {
    switch (order) {
    case DateOrder::dmy: return "dmy";
    case DateOrder::mdy: return "mdy";
    case DateOrder::ymd: return "ymd";
    }
    return "dmy";
}

namespace {

struct MonthName {
    std::string_view name;
    unsigned month;
};

// Longest spellings first so alternation prefers them.
constexpr std::array<MonthName, 33> kMonths = {{
    {"september", 9}, {"february", 2}, {"februari", 2}, {"november", 11}, {"december", 12}, {"augustus", 8},
    {"january", 1},   {"januari", 1},   {"october", 10}, {"oktober", 10},  {"august", 8},    {"march", 3},
    {"maart", 3},     {"april", 4},     {"june", 6},     {"juni", 6},      {"july", 7},      {"juli", 7},
    {"sept", 9},      {"may", 5},       {"mei", 5},      {"jan", 1},       {"feb", 2},       {"mar", 3},
    {"apr", 4},       {"jun", 6},       {"jul", 7},      {"aug", 8},       {"sep", 9},       {"oct", 10},
    {"okt", 10},      {"nov", 11},      {"dec", 12},
}};

constexpr std::array<std::string_view, 31> kOrdinalWords = {
    "first",          "second",         "third",         "fourth",        "fifth",        "sixth",
    "seventh",        "eighth",         "ninth",         "tenth",         "eleventh",     "twelfth",
    "thirteenth",     "fourteenth",     "fifteenth",     "sixteenth",     "seventeenth",  "eighteenth",
    "nineteenth",     "twentieth",      "twenty-first",  "twenty-second", "twenty-third", "twenty-fourth",
    "twenty-fifth",   "twenty-sixth",   "twenty-seventh", "twenty-eighth", "twenty-ninth", "thirtieth",
    "thirty-first",
};

std::string month_alternation() {
    std::string out;
    for (const auto& m : kMonths) {
        out += (out.empty() ? "" : "|") + std::string(m.name);
    }
    return "(" + out + ")";
}

std::string ordinal_alternation() {
    std::vector<std::string_view> words(kOrdinalWords.begin(), kOrdinalWords.end());
    std::sort(words.begin(), words.end(), [](auto a, auto b) { return a.size() > b.size(); });
    std::string out;
    for (auto w : words) {
        out += std::string(w) + "|";
    }
    return "(" + out + "\\d{1,2}(?:st|nd|rd|th))";
}

unsigned month_number(std::string_view name) {
    for (const auto& m : kMonths) {
        if (m.name == name) {
            return m.month;
        }
    }
    return 0;
}

unsigned ordinal_number(std::string_view word) {
    for (unsigned i = 0; i < kOrdinalWords.size(); ++i) {
        if (kOrdinalWords[i] == word) {
            return i + 1;
        }
    }
    unsigned n = 0;
    for (char c : word) {
        if (c < '0' || c > '9') {
            break;
        }
        n = n * 10 + static_cast<unsigned>(c - '0');
    }
    return n;
}

int expand_year(const std::string& digits) {
    int y = std::stoi(digits);
    if (digits.size() == 2) {
        return y >= kTwoDigitYearPivot ? 1900 + y : 2000 + y;
    }
    return y;
}

struct Candidate {
    std::size_t begin;
    std::size_t end;
    int priority;
    std::optional<DateInterval> interval;  // nullopt: recognized but unresolvable
    std::string why;
};

struct Patterns {
    std::regex iso{R"(\b(\d{4})-(\d{1,2})-(\d{1,2})\b)"};
    std::regex numeric{R"(\b(\d{1,4})([-/.])(\d{1,2})\2(\d{2}|\d{4})\b)"};
    std::regex ordinal_of{"\\b" + ordinal_alternation() + "\\s+of\\s+" + month_alternation() +
                          "(?:,?\\s+(\\d{4}))?\\b"};
    std::regex month_day{"\\b" + month_alternation() + "\\.?\\s+(\\d{1,2})(?:st|nd|rd|th)?(?:,?\\s+(\\d{4}))?\\b"};
    std::regex day_month{"\\b(\\d{1,2})(?:st|nd|rd|th)?\\s+(?:of\\s+)?" + month_alternation() +
                         "(?:,?\\s+(\\d{4}))?\\b"};
    std::regex partial{R"(\b(\d{1,2})/(\d{1,2})\b)"};
    std::regex relative_day{R"(\b(today|tomorrow|yesterday)\b)"};
    std::regex relative_week{R"(\b(next|last|this)\s+week\b)"};
};

const Patterns& patterns() {
    static const Patterns p;
    return p;
}

template <typename F>
void scan(const std::string& lowered, const std::regex& re, F&& on_match) {
    for (auto it = std::sregex_iterator(lowered.begin(), lowered.end(), re); it != std::sregex_iterator(); ++it) {
        on_match(*it);
    }
}

}  // namespace

TemporalResult extract_temporal(std::string_view input, std::optional<Date> reference, DateOrder order,
                                const NamedPeriodTable& periods) {
    TemporalResult result;
    const std::string lowered = text::lower(input);
    const auto& p = patterns();
    std::vector<Candidate> cands;

    auto add_day = [&](std::size_t b, std::size_t e, int prio, std::optional<int> year, unsigned month, unsigned day) {
        if (!year) {
            if (!reference) {
                cands.push_back({b, e, prio, std::nullopt, "needs a reference date for its year"});
                return;
            }
            year = reference->year();
        }
        if (auto d = Date::from_ymd(*year, month, day)) {
            cands.push_back({b, e, prio, DateInterval::day(*d), {}});
        }
    };
    auto pos = [](const std::smatch& m) { return static_cast<std::size_t>(m.position(0)); };
    auto end = [](const std::smatch& m) { return static_cast<std::size_t>(m.position(0) + m.length(0)); };

    scan(lowered, p.iso, [&](const std::smatch& m) {
        add_day(pos(m), end(m), 0, std::stoi(m[1]), std::stoul(m[2]), std::stoul(m[3]));
    });
    scan(lowered, p.numeric, [&](const std::smatch& m) {
        std::string a = m[1], b = m[3], c = m[4];
        if (a.size() == 4) {
            add_day(pos(m), end(m), 1, std::stoi(a), std::stoul(b), std::stoul(c));
            return;
        }
        if (a.size() > 2) {
            return;
        }
        switch (order) {
        case DateOrder::dmy:
            add_day(pos(m), end(m), 1, expand_year(c), std::stoul(b), std::stoul(a));
            break;
        case DateOrder::mdy:
            add_day(pos(m), end(m), 1, expand_year(c), std::stoul(a), std::stoul(b));
            break;
        case DateOrder::ymd:
            if (c.size() <= 2) {
                add_day(pos(m), end(m), 1, expand_year(a), std::stoul(b), std::stoul(c));
            }
            break;
        }
    });
    auto opt_year = [](const std::ssub_match& s) -> std::optional<int> {
        return s.matched ? std::optional<int>(std::stoi(s.str())) : std::nullopt;
    };
    scan(lowered, p.ordinal_of, [&](const std::smatch& m) {
        add_day(pos(m), end(m), 2, opt_year(m[3]), month_number(m[2].str()), ordinal_number(m[1].str()));
    });
    scan(lowered, p.month_day, [&](const std::smatch& m) {
        add_day(pos(m), end(m), 3, opt_year(m[3]), month_number(m[1].str()), std::stoul(m[2]));
    });
    scan(lowered, p.day_month, [&](const std::smatch& m) {
        add_day(pos(m), end(m), 3, opt_year(m[3]), month_number(m[2].str()), std::stoul(m[1]));
    });
    scan(lowered, p.partial, [&](const std::smatch& m) {
        unsigned x = std::stoul(m[1]), y = std::stoul(m[2]);
        bool dm = order == DateOrder::dmy;
        add_day(pos(m), end(m), 5, std::nullopt, dm ? y : x, dm ? x : y);
    });
    scan(lowered, p.relative_day, [&](const std::smatch& m) {
        if (!reference) {
            cands.push_back({pos(m), end(m), 4, std::nullopt, "relative expression needs a reference date"});
            return;
        }
        long delta = m[1] == "today" ? 0 : m[1] == "tomorrow" ? 1 : -1;
        cands.push_back({pos(m), end(m), 4, DateInterval::day(reference->plus_days(delta)), {}});
    });
    scan(lowered, p.relative_week, [&](const std::smatch& m) {
        if (!reference) {
            cands.push_back({pos(m), end(m), 4, std::nullopt, "relative expression needs a reference date"});
            return;
        }
        long shift = m[1] == "next" ? 7 : m[1] == "last" ? -7 : 0;
        Date monday = reference->plus_days(1 - static_cast<long>(reference->iso_weekday()) + shift);
        cands.push_back({pos(m), end(m), 4, DateInterval{monday, monday.plus_days(6)}, {}});
    });
    for (const auto& period : periods.periods) {
        for (const auto& span : text::find_bounded(input, period.phrase)) {
            if (!period.recurring) {
                cands.push_back({span.begin, span.end, 2, period.fixed, {}});
                continue;
            }
            if (!reference) {
                cands.push_back({span.begin, span.end, 2, std::nullopt, "named period needs a reference year"});
                continue;
            }
            auto s = Date::from_ymd(reference->year(), period.start_month, period.start_day);
            auto e = Date::from_ymd(reference->year() + (period.end_month < period.start_month ? 1 : 0),
                                    period.end_month, period.end_day);
            if (s && e) {
                cands.push_back({span.begin, span.end, 2, DateInterval{*s, *e}, {}});
            }
        }
    }

    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        return std::tuple(a.begin, b.end, a.priority) < std::tuple(b.begin, a.end, b.priority);
    });
    std::size_t covered = 0;
    for (const auto& c : cands) {
        if (c.begin < covered) {
            continue;
        }
        covered = c.end;
        std::string surface(input.substr(c.begin, c.end - c.begin));
        if (!c.interval) {
            result.warnings.push_back({Diagnostic::Severity::warning, "temporal-unresolved", surface,
                                       "skipped '" + surface + "': " + c.why});
            continue;
        }
        result.hits.push_back({c.begin, c.end, std::move(surface), *c.interval});
    }
    return result;
}

}  // namespace timeflow::extract
