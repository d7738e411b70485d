#include <algorithm>
#include <map>
#include <set>

#include "timeflow/extract.hpp"
#include "timeflow/text.hpp"

namespace timeflow::extract {

namespace {

constexpr std::size_t kCandidateTitleBytes = 80;

std::string shorten(std::string_view s) {
    if (s.size() <= kCandidateTitleBytes) {
        return std::string(s);
    }
    auto cut = s.rfind(' ', kCandidateTitleBytes);
    if (cut == std::string_view::npos || cut == 0) {
        cut = kCandidateTitleBytes;
        while (cut > 0 && (static_cast<unsigned char>(s[cut]) & 0xc0) == 0x80) {
            --cut;
        }
    }
    return std::string(s.substr(0, cut)) + "...";
}

}  // namespace

EventProposals propose_events(const std::vector<InformationObject>& objects, const EventAnnotations& annotations,
                              const std::vector<ObjectFindings>& findings) {
    std::set<std::string> known;
    for (const auto& o : objects) {
        known.insert(o.id);
    }

    EventProposals out;
    for (const auto& a : annotations.events) {
        std::vector<std::string> members;
        for (const auto& oid : a.objects) {
            if (!oid.empty() && oid.back() == '*') {
                auto prefix = std::string_view(oid).substr(0, oid.size() - 1);
                auto first = members.size();
                for (auto it = known.lower_bound(std::string(prefix)); it != known.end() && it->starts_with(prefix);
                     ++it) {
                    members.push_back(*it);
                }
                if (members.size() == first) {
                    throw Error("event annotation '" + a.id + "' pattern '" + oid + "' matches no object");
                }
                continue;
            }
            if (!known.count(oid)) {
                throw Error("event annotation '" + a.id + "' references unknown object '" + oid + "'");
            }
            members.push_back(oid);
        }
        Concept c;
        c.id = a.id;
        c.provenance = Provenance::asserted;
        Event e;
        e.title = a.title;
        e.description = a.description;
        e.anchor = a.anchor;
        e.constitutive_objects = std::move(members);
        std::sort(e.constitutive_objects.begin(), e.constitutive_objects.end());
        e.constitutive_objects.erase(std::unique(e.constitutive_objects.begin(), e.constitutive_objects.end()),
                                     e.constitutive_objects.end());
        c.value = std::move(e);
        out.accepted.push_back(std::move(c));
    }

    std::map<std::string, const InformationObject*> by_id;
    for (const auto& o : objects) {
        by_id[o.id] = &o;
    }
    for (const auto& f : findings) {
        auto it = by_id.find(f.object_id);
        if (it == by_id.end() || f.temporal.empty()) {
            continue;
        }
        const auto& body = it->second->body;
        for (const auto& sentence : text::split_sentences(body)) {
            auto inside = [&](std::size_t b, std::size_t e) { return b >= sentence.begin && e <= sentence.end; };
            auto expr = std::find_if(f.temporal.begin(), f.temporal.end(),
                                     [&](const TemporalHit& h) { return inside(h.begin, h.end); });
            if (expr == f.temporal.end()) {
                continue;
            }
            bool has_entity = std::any_of(f.entities.begin(), f.entities.end(), [&](const EntityMention& m) {
                return !m.candidate && inside(m.begin, m.end);
            });
            if (!has_entity) {
                continue;
            }
            std::string_view sentence_text = std::string_view(body).substr(sentence.begin, sentence.end - sentence.begin);
            Concept c;
            c.id = "candidate:" + f.object_id + ":" + std::to_string(sentence.begin);
            c.provenance = Provenance::derived;
            Event e;
            e.title = shorten(sentence_text);
            e.description = std::string(sentence_text);
            e.anchor = expr->interval;
            e.constitutive_objects = {f.object_id};
            c.value = std::move(e);
            (annotations.auto_accept_candidates ? out.accepted : out.candidates).push_back(std::move(c));
        }
    }
    return out;
}

}  // namespace timeflow::extract
