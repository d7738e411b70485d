#include <algorithm>
#include <cctype>
#include <map>

#include "timeflow/extract.hpp"
#include "timeflow/text.hpp"

namespace timeflow::extract {

std::string entity_id(std::string_view canonical_name) { return "entity:" + text::slug(canonical_name); }

std::vector<Violation> Gazetteer::validate() const {
    std::vector<Violation> out;
    std::map<std::string, std::size_t> names;
    std::map<std::string, EntityKind> surfaces;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        if (e.name.empty()) {
            out.push_back({"gazetteer", "gazetteer-name", "entry without a canonical name"});
            continue;
        }
        if (!names.emplace(text::lower(e.name), i).second) {
            out.push_back({e.name, "gazetteer-unique", "canonical name '" + e.name + "' is listed twice"});
        }
        std::vector<std::string> forms{e.name};
        forms.insert(forms.end(), e.aliases.begin(), e.aliases.end());
        for (const auto& f : forms) {
            auto [it, inserted] = surfaces.emplace(text::lower(f), e.kind);
            if (!inserted && it->second != e.kind) {
                out.push_back({e.name, "gazetteer-alias-conflict",
                               "surface '" + f + "' names entities of different kinds"});
            }
        }
    }
    return out;
}

std::vector<EntityMention> extract_entities(std::string_view input, const Gazetteer& gazetteer) {
    struct Hit {
        text::Span span;
        std::size_t entry;
        bool alias;
    };
    std::vector<Hit> hits;
    for (std::size_t i = 0; i < gazetteer.entries.size(); ++i) {
        const auto& e = gazetteer.entries[i];
        for (const auto& s : text::find_bounded(input, e.name)) {
            hits.push_back({s, i, false});
        }
        for (const auto& alias : e.aliases) {
            for (const auto& s : text::find_bounded(input, alias)) {
                hits.push_back({s, i, true});
            }
        }
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        return std::tuple(a.span.begin, b.span.end, a.entry, a.alias) <
               std::tuple(b.span.begin, a.span.end, b.entry, b.alias);
    });

    std::vector<EntityMention> out;
    std::size_t covered = 0;
    for (const auto& h : hits) {
        if (h.span.begin < covered) {
            continue;
        }
        covered = h.span.end;
        const auto& e = gazetteer.entries[h.entry];
        out.push_back({entity_id(e.name), e.name, e.kind, h.span.begin, h.span.end,
                       std::string(input.substr(h.span.begin, h.span.end - h.span.begin)), h.alias, false});
    }

    // Capitalized runs outside the gazetteer hits.
    auto inside_hit = [&](const text::Token& t) {
        return std::any_of(out.begin(), out.end(), [&](const EntityMention& m) {
            return t.begin < m.end && m.begin < t.end;
        });
    };
    auto tokens = text::tokenize(input);
    std::vector<EntityMention> candidates;
    std::size_t i = 0;
    while (i < tokens.size()) {
        auto capitalized = [&](std::size_t k) {
            return std::isupper(static_cast<unsigned char>(tokens[k].view.front())) && !inside_hit(tokens[k]);
        };
        if (!capitalized(i)) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < tokens.size() && capitalized(j)) {
            auto gap = input.substr(tokens[j - 1].end, tokens[j].begin - tokens[j - 1].end);
            if (gap != " ") {
                break;
            }
            ++j;
        }
        if (j - i >= 2) {
            std::string surface(input.substr(tokens[i].begin, tokens[j - 1].end - tokens[i].begin));
            candidates.push_back({"", surface, EntityKind::organization, tokens[i].begin, tokens[j - 1].end, surface,
                                  false, true});
        }
        i = j;
    }
    out.insert(out.end(), candidates.begin(), candidates.end());
    std::sort(out.begin(), out.end(), [](const EntityMention& a, const EntityMention& b) { return a.begin < b.begin; });
    return out;
}

}  // namespace timeflow::extract
