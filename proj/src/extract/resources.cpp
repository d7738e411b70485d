#include <cstdio>

#include "timeflow/extract.hpp"
#include "timeflow/interchange.hpp"

namespace timeflow::extract {

namespace {

template <typename F>
auto guarded(const char* what, F&& f) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed ") + what + ": " + e.what());
    }
}

// "MM-DD" for recurring periods.
bool parse_month_day(const std::string& s, unsigned& month, unsigned& day) {
    return s.size() == 5 && s[2] == '-' && std::sscanf(s.c_str(), "%2u-%2u", &month, &day) == 2 &&
           Date::from_ymd(2000, month, day).has_value();
}

DateInterval anchor_from(const nlohmann::json& j) {
    if (j.is_string()) {
        return DateInterval::day(j.get<Date>());
    }
    return j.get<DateInterval>();
}

}  // namespace

Gazetteer parse_gazetteer(const nlohmann::json& j) {
    return guarded("gazetteer", [&] {
        Gazetteer g;
        for (const auto& e : j.at("entities")) {
            GazetteerEntry entry;
            entry.name = e.at("name").get<std::string>();
            auto kind = e.value("kind", "organization");
            auto parsed = parse_entity_kind(kind);
            if (!parsed) {
                throw ParseError("unknown entity kind '" + kind + "'");
            }
            entry.kind = *parsed;
            entry.aliases = e.value("aliases", std::vector<std::string>{});
            entry.pinned = e.value("pinned", false);
            g.entries.push_back(std::move(entry));
        }
        if (auto v = g.validate(); !v.empty()) {
            throw ValidationError(std::move(v));
        }
        return g;
    });
}

SubjectLexicon parse_subject_lexicon(const nlohmann::json& j) {
    return guarded("subject lexicon", [&] {
        SubjectLexicon l;
        for (const auto& s : j.at("subjects")) {
            l.subjects.push_back({s.at("label").get<std::string>(), s.value("terms", std::vector<std::string>{})});
        }
        l.tfidf = j.value("mode", "lexicon") == "tfidf";
        l.cosine_threshold = j.value("cosine_threshold", 0.5);
        if (auto v = l.validate(); !v.empty()) {
            throw ValidationError(std::move(v));
        }
        return l;
    });
}

std::vector<Violation> NamedPeriodTable::validate() const {
    std::vector<Violation> out;
    for (const auto& p : periods) {
        if (p.phrase.empty()) {
            out.push_back({"periods", "period-phrase", "empty phrase"});
        }
        if (!p.recurring && !p.fixed.valid()) {
            out.push_back({p.phrase, "interval-order", "period start after end"});
        }
    }
    return out;
}

NamedPeriodTable parse_named_periods(const nlohmann::json& j) {
    return guarded("named period table", [&] {
        NamedPeriodTable t;
        for (const auto& p : j.at("periods")) {
            NamedPeriod period;
            period.phrase = p.at("phrase").get<std::string>();
            auto start = p.at("start").get<std::string>();
            auto end = p.at("end").get<std::string>();
            if (parse_month_day(start, period.start_month, period.start_day) &&
                parse_month_day(end, period.end_month, period.end_day)) {
                period.recurring = true;
            } else {
                period.fixed = DateInterval{p.at("start").get<Date>(), p.at("end").get<Date>()};
            }
            t.periods.push_back(std::move(period));
        }
        if (auto v = t.validate(); !v.empty()) {
            throw ValidationError(std::move(v));
        }
        return t;
    });
}

EventAnnotations parse_event_annotations(const nlohmann::json& j) {
    return guarded("event annotations", [&] {
        EventAnnotations a;
        a.auto_accept_candidates = j.value("auto_accept_candidates", false);
        for (const auto& e : j.at("events")) {
            EventAnnotation ev;
            ev.id = e.at("id").get<std::string>();
            ev.title = e.at("title").get<std::string>();
            ev.description = e.value("description", "");
            ev.anchor = anchor_from(e.at("anchor"));
            ev.objects = e.at("objects").get<std::vector<std::string>>();
            if (ev.objects.empty()) {
                throw ParseError("event annotation '" + ev.id + "' lists no objects");
            }
            a.events.push_back(std::move(ev));
        }
        return a;
    });
}

nlohmann::json to_json(const Gazetteer& g) {
    nlohmann::json entities = nlohmann::json::array();
    for (const auto& e : g.entries) {
        entities.push_back({{"name", e.name}, {"kind", to_string(e.kind)}, {"aliases", e.aliases}, {"pinned", e.pinned}});
    }
    return {{"entities", entities}};
}

nlohmann::json to_json(const SubjectLexicon& l) {
    nlohmann::json subjects = nlohmann::json::array();
    for (const auto& s : l.subjects) {
        subjects.push_back({{"label", s.label}, {"terms", s.terms}});
    }
    return {{"subjects", subjects}, {"mode", l.tfidf ? "tfidf" : "lexicon"}, {"cosine_threshold", l.cosine_threshold}};
}

nlohmann::json to_json(const NamedPeriodTable& t) {
    nlohmann::json periods = nlohmann::json::array();
    char buf[8];
    for (const auto& p : t.periods) {
        if (p.recurring) {
            std::snprintf(buf, sizeof buf, "%02u-%02u", p.start_month, p.start_day);
            std::string start = buf;
            std::snprintf(buf, sizeof buf, "%02u-%02u", p.end_month, p.end_day);
            periods.push_back({{"phrase", p.phrase}, {"start", start}, {"end", std::string(buf)}});
        } else {
            periods.push_back({{"phrase", p.phrase}, {"start", p.fixed.start}, {"end", p.fixed.end}});
        }
    }
    return {{"periods", periods}};
}

nlohmann::json to_json(const EventAnnotations& a) {
    nlohmann::json events = nlohmann::json::array();
    for (const auto& e : a.events) {
        events.push_back({{"id", e.id},
                          {"title", e.title},
                          {"description", e.description},
                          {"anchor", e.anchor},
                          {"objects", e.objects}});
    }
    return {{"events", events}, {"auto_accept_candidates", a.auto_accept_candidates}};
}

}  // namespace timeflow::extract
