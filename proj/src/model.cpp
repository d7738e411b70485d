#include "timeflow/model.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace timeflow {

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error([&] {
          std::string msg = "validation failed";
          for (const auto& v : violations) {
              msg += "\n  " + v.subject + ": " + v.message;
          }
          return msg;
      }()),
      violations_(std::move(violations)) {}

Level level_of(EndpointKind a, EndpointKind b) {
    if (a == EndpointKind::object && b == EndpointKind::object) {
        return Level::TT;
    }
    if (a == EndpointKind::concept_node && b == EndpointKind::concept_node) {
        return Level::EE;
    }
    return Level::TE;
}

bool is_group_a(RelationType type) {
    switch (type) {
    case RelationType::TemporalSemantic:
    case RelationType::Subject:
    case RelationType::Entity:
    case RelationType::Causal:
    case RelationType::Correspondence:
        return true;
    default:
        return false;
    }
}

bool admissible(RelationType type, Level level) {
    if (is_group_a(type)) {
        return true;
    }
    switch (type) {
    case RelationType::Succession:
    case RelationType::ReferencesTo:
        return level == Level::TT;
    case RelationType::ConsistsOf:
        return level == Level::TE;
    default:
        return false;
    }
}

std::string admissibility_message(RelationType type, Level level) {
    std::string allowed = type == RelationType::ConsistsOf ? "TE" : "TT";
    std::string group = type == RelationType::ConsistsOf ? "Group C" : "Group B";
    return std::string(to_string(type)) + " admissible only at " + allowed + " (" + group + " relation), found " +
           std::string(to_string(level));
}

bool inherently_directed(RelationType type) {
    switch (type) {
    case RelationType::Causal:
    case RelationType::Succession:
    case RelationType::ReferencesTo:
    case RelationType::ConsistsOf:
        return true;
    default:
        return false;
    }
}

std::string relation_id(RelationType type, const Endpoint& from, const Endpoint& to) {
    std::string id{to_string(type)};
    id += ':';
    if (inherently_directed(type)) {
        id += from.id + "->" + to.id;
    } else {
        const auto& [a, b] = std::minmax(from.id, to.id);
        id += a + "--" + b;
    }
    return id;
}

Relation make_relation(RelationType type, Endpoint from, Endpoint to, std::vector<Evidence> evidence,
                       Provenance provenance) {
    Relation r;
    r.type = type;
    r.directed = inherently_directed(type);
    if (!r.directed && to < from) {
        std::swap(from, to);
    }
    r.from = std::move(from);
    r.to = std::move(to);
    r.id = relation_id(type, r.from, r.to);
    std::sort(evidence.begin(), evidence.end());
    evidence.erase(std::unique(evidence.begin(), evidence.end()), evidence.end());
    r.evidence = std::move(evidence);
    r.provenance = provenance;
    return r;
}

const InformationObject* Chronology::find_object(std::string_view id) const {
    for (const auto& o : objects) {
        if (o.id == id) {
            return &o;
        }
    }
    return nullptr;
}

const Concept* Chronology::find_concept(std::string_view id) const {
    for (const auto& c : concepts) {
        if (c.id == id) {
            return &c;
        }
    }
    return nullptr;
}

const Event* Chronology::find_event(std::string_view id) const {
    const Concept* c = find_concept(id);
    return c ? c->event() : nullptr;
}

std::vector<const Concept*> Chronology::events() const {
    std::vector<const Concept*> out;
    for (const auto& c : concepts) {
        if (c.is_event()) {
            out.push_back(&c);
        }
    }
    std::sort(out.begin(), out.end(), [](const Concept* a, const Concept* b) {
        return std::pair(a->event()->ordinal, a->id) < std::pair(b->event()->ordinal, b->id);
    });
    return out;
}

std::string event_text(const Event& event) { return event.title + "\n" + event.description; }

std::optional<std::string> host_text(const Chronology& chronology, std::string_view id) {
    if (const auto* o = chronology.find_object(id)) {
        return o->body;
    }
    if (const auto* e = chronology.find_event(id)) {
        return event_text(*e);
    }
    return std::nullopt;
}

namespace {

void check_evidence(const Chronology& c, const std::string& owner, const Evidence& ev,
                    std::vector<Violation>& out) {
    auto text = host_text(c, ev.holder);
    if (!text) {
        out.push_back({owner, "evidence-holder", "evidence holder '" + ev.holder + "' is not an object or event"});
        return;
    }
    if (ev.begin > ev.end || ev.end > text->size() ||
        std::string_view(*text).substr(ev.begin, ev.end - ev.begin) != ev.text) {
        out.push_back({owner, "evidence-span",
                       "evidence '" + ev.text + "' does not match " + ev.holder + " at [" +
                           std::to_string(ev.begin) + "," + std::to_string(ev.end) + ")"});
    }
}

}  // namespace

std::vector<Violation> validate(const Chronology& c, ValidateOptions options) {
    std::vector<Violation> out;
    std::unordered_map<std::string, EndpointKind> ids;

    for (const auto& o : c.objects) {
        if (!ids.emplace(o.id, EndpointKind::object).second) {
            out.push_back({o.id, "unique-id", "duplicate id '" + o.id + "'"});
        }
    }
    for (const auto& k : c.concepts) {
        if (!ids.emplace(k.id, EndpointKind::concept_node).second) {
            out.push_back({k.id, "unique-id", "duplicate id '" + k.id + "'"});
        }
    }

    auto check_link = [&](const InformationObject& o, const std::optional<ObjectLink>& link, const char* field) {
        if (!link || link->external) {
            return;
        }
        if (link->target == o.id) {
            out.push_back({o.id, "self-link", std::string(field) + " refers to the object itself"});
        } else if (!c.find_object(link->target)) {
            out.push_back({o.id, "link-resolves", std::string(field) + " target '" + link->target + "' not found"});
        }
    };
    for (const auto& o : c.objects) {
        check_link(o, o.in_reply_to, "in_reply_to");
        check_link(o, o.forwarded_from, "forwarded_from");
        for (const auto& a : o.attachments) {
            if (a.object_id && !c.find_object(*a.object_id)) {
                out.push_back({o.id, "link-resolves", "attachment target '" + *a.object_id + "' not found"});
            }
        }
    }

    std::set<std::pair<std::string, std::string>> consists_of;
    for (const auto& r : c.relations) {
        if (r.type == RelationType::ConsistsOf) {
            consists_of.emplace(r.from.id, r.to.id);
        }
    }

    std::vector<const Concept*> events;
    for (const auto& k : c.concepts) {
        if (const auto* e = k.event()) {
            events.push_back(&k);
            if (!e->anchor) {
                out.push_back({k.id, "event-anchor", "event has no time anchor"});
            } else if (!e->anchor->valid()) {
                out.push_back({k.id, "interval-order", "event anchor start after end"});
            }
            if (e->constitutive_objects.empty()) {
                out.push_back({k.id, "event-constitutive", "event has no constitutive objects"});
            }
            for (const auto& oid : e->constitutive_objects) {
                if (!c.find_object(oid)) {
                    out.push_back({k.id, "event-constitutive", "constitutive object '" + oid + "' not found"});
                } else if (options.require_consists_of_mirror && !consists_of.count({k.id, oid})) {
                    out.push_back({k.id, "consists-of-mirror", "no ConsistsOf relation to '" + oid + "'"});
                }
            }
            for (const auto& aid : e->annotations) {
                if (!c.find_concept(aid)) {
                    out.push_back({k.id, "annotation-resolves", "annotation '" + aid + "' not found"});
                }
            }
        } else if (const auto* t = std::get_if<TemporalExpression>(&k.value)) {
            if (!t->normalized.valid()) {
                out.push_back({k.id, "interval-order", "temporal expression start after end"});
            }
            check_evidence(c, k.id, t->source, out);
        } else if (const auto* en = std::get_if<Entity>(&k.value)) {
            for (const auto& m : en->mentions) {
                check_evidence(c, k.id, m, out);
            }
        } else if (const auto* s = std::get_if<Subject>(&k.value)) {
            for (const auto& m : s->mentions) {
                check_evidence(c, k.id, m, out);
            }
        }
    }

    bool all_anchored = std::all_of(events.begin(), events.end(),
                                    [](const Concept* k) { return k->event()->anchor.has_value(); });
    if (all_anchored) {
        std::sort(events.begin(), events.end(), [](const Concept* a, const Concept* b) {
            return std::pair(a->event()->anchor->start, a->id) < std::pair(b->event()->anchor->start, b->id);
        });
        for (size_t i = 0; i < events.size(); ++i) {
            if (events[i]->event()->ordinal != static_cast<int>(i + 1)) {
                out.push_back({events[i]->id, "ordinal-order",
                               "ordinal " + std::to_string(events[i]->event()->ordinal) + " expected " +
                                   std::to_string(i + 1)});
            }
        }
    }

    std::unordered_set<std::string> relation_ids;
    for (const auto& r : c.relations) {
        if (!relation_ids.insert(r.id).second) {
            out.push_back({r.id, "unique-id", "duplicate relation id"});
        }
        bool resolved = true;
        for (const auto* ep : {&r.from, &r.to}) {
            auto it = ids.find(ep->id);
            if (it == ids.end()) {
                out.push_back({r.id, "endpoint-resolves", "endpoint '" + ep->id + "' not found"});
                resolved = false;
            } else if (it->second != ep->kind) {
                out.push_back({r.id, "endpoint-kind", "endpoint '" + ep->id + "' has the wrong kind"});
                resolved = false;
            }
        }
        if (r.from.id == r.to.id) {
            out.push_back({r.id, "self-relation", "relation connects an item to itself"});
        }
        if (resolved && !admissible(r.type, r.level())) {
            out.push_back({r.id, "admissibility", admissibility_message(r.type, r.level())});
        }
        if (r.directed != inherently_directed(r.type)) {
            out.push_back({r.id, "direction", std::string(to_string(r.type)) +
                                                  (r.directed ? " must be undirected" : " must be directed")});
        }
        if (r.weight && !(*r.weight >= 0.0 && *r.weight <= 1.0)) {
            out.push_back({r.id, "weight-range", "weight outside [0,1]"});
        }
        if (r.type == RelationType::ConsistsOf && resolved) {
            const Event* e = c.find_event(r.from.id);
            if (!e || r.to.kind != EndpointKind::object) {
                out.push_back({r.id, "consists-of-shape", "ConsistsOf must run from an event to an object"});
            } else if (std::find(e->constitutive_objects.begin(), e->constitutive_objects.end(), r.to.id) ==
                       e->constitutive_objects.end()) {
                out.push_back({r.id, "consists-of-mirror", "object is not constitutive of the event"});
            }
        }
        for (const auto& ev : r.evidence) {
            check_evidence(c, r.id, ev, out);
        }
    }
    return out;
}

Chronology renumber_events(Chronology c) {
    std::vector<Concept*> events;
    for (auto& k : c.concepts) {
        if (auto* e = k.event()) {
            if (!e->anchor) {
                throw Error("event '" + k.id + "' has no time anchor");
            }
            events.push_back(&k);
        }
    }
    std::sort(events.begin(), events.end(), [](const Concept* a, const Concept* b) {
        return std::pair(a->event()->anchor->start, a->id) < std::pair(b->event()->anchor->start, b->id);
    });
    for (size_t i = 0; i < events.size(); ++i) {
        events[i]->event()->ordinal = static_cast<int>(i + 1);
    }
    return c;
}

std::string composite_event_id(std::span<const std::string> event_ids) {
    std::vector<std::string> ids(event_ids.begin(), event_ids.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::string out = "merge:";
    for (size_t i = 0; i < ids.size(); ++i) {
        out += (i ? "+" : "") + ids[i];
    }
    return out;
}

namespace {

template <typename T>
void sorted_union(std::vector<T>& into, const std::vector<T>& from) {
    into.insert(into.end(), from.begin(), from.end());
    std::sort(into.begin(), into.end());
    into.erase(std::unique(into.begin(), into.end()), into.end());
}

// Remaps evidence held by merged members into the composite's text.
struct EvidenceRemap {
    std::string composite;
    std::map<std::string, std::size_t> shift;

    void apply(Evidence& ev) const {
        auto it = shift.find(ev.holder);
        if (it != shift.end()) {
            ev.holder = composite;
            ev.begin += it->second;
            ev.end += it->second;
        }
    }
};

}  // namespace

Chronology merge_events(Chronology c, std::span<const std::string> event_ids) {
    if (event_ids.empty()) {
        throw Error("merge requires at least one event id");
    }
    std::vector<std::string> ids(event_ids.begin(), event_ids.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    std::vector<const Concept*> members;
    for (const auto& id : ids) {
        const Concept* k = c.find_concept(id);
        if (!k || !k->is_event()) {
            throw NotFoundError("unknown event '" + id + "'");
        }
        members.push_back(k);
    }
    if (members.size() == 1) {
        return renumber_events(std::move(c));
    }
    std::sort(members.begin(), members.end(), [](const Concept* a, const Concept* b) {
        auto key = [](const Concept* k) {
            const auto& anchor = k->event()->anchor;
            return std::tuple(anchor.has_value(), anchor ? anchor->start : Date{}, k->id);
        };
        return key(a) < key(b);
    });

    Concept composite;
    composite.id = composite_event_id(ids);
    composite.provenance = Provenance::asserted;
    Event merged;
    for (size_t i = 0; i < members.size(); ++i) {
        merged.title += (i ? " + " : "") + members[i]->event()->title;
    }
    EvidenceRemap remap{composite.id, {}};
    std::optional<DateInterval> hull;
    for (size_t i = 0; i < members.size(); ++i) {
        const Event& e = *members[i]->event();
        if (i) {
            merged.description += "\n\n";
        }
        remap.shift[members[i]->id] = merged.title.size() + 1 + merged.description.size();
        merged.description += event_text(e);
        if (e.anchor) {
            hull = hull ? hull->hull(*e.anchor) : *e.anchor;
        }
        sorted_union(merged.constitutive_objects, e.constitutive_objects);
        sorted_union(merged.annotations, e.annotations);
    }
    merged.anchor = hull;
    composite.value = std::move(merged);

    std::set<std::string> member_ids(ids.begin(), ids.end());
    std::erase_if(c.concepts, [&](const Concept& k) { return member_ids.count(k.id) > 0; });

    for (auto& k : c.concepts) {
        if (auto* t = std::get_if<TemporalExpression>(&k.value)) {
            remap.apply(t->source);
        } else if (auto* en = std::get_if<Entity>(&k.value)) {
            for (auto& m : en->mentions) {
                remap.apply(m);
            }
        } else if (auto* s = std::get_if<Subject>(&k.value)) {
            for (auto& m : s->mentions) {
                remap.apply(m);
            }
        }
    }
    c.concepts.push_back(std::move(composite));
    std::sort(c.concepts.begin(), c.concepts.end(),
              [](const Concept& a, const Concept& b) { return a.id < b.id; });

    std::vector<Relation> rewired;
    for (auto r : c.relations) {
        bool from_member = member_ids.count(r.from.id) > 0;
        bool to_member = member_ids.count(r.to.id) > 0;
        if (from_member && to_member) {
            continue;
        }
        Endpoint from = r.from, to = r.to;
        if (from_member) {
            from.id = remap.composite;
        }
        if (to_member) {
            to.id = remap.composite;
        }
        for (auto& ev : r.evidence) {
            remap.apply(ev);
        }
        Relation nr = make_relation(r.type, from, to, std::move(r.evidence), r.provenance);
        nr.weight = r.weight;
        nr.note = r.note;
        rewired.push_back(std::move(nr));
    }
    c.relations = dedupe_relations(std::move(rewired));
    return renumber_events(std::move(c));
}

std::vector<Relation> dedupe_relations(std::vector<Relation> relations) {
    std::map<std::string, Relation> by_id;
    for (auto& r : relations) {
        auto [it, inserted] = by_id.try_emplace(r.id, r);
        if (inserted) {
            continue;
        }
        Relation& acc = it->second;
        sorted_union(acc.evidence, r.evidence);
        if (r.weight) {
            acc.weight = acc.weight ? std::max(*acc.weight, *r.weight) : *r.weight;
        }
        if (r.provenance == Provenance::asserted) {
            acc.provenance = Provenance::asserted;
        }
        if (acc.note.empty()) {
            acc.note = r.note;
        }
    }
    std::vector<Relation> out;
    out.reserve(by_id.size());
    for (auto& [id, r] : by_id) {
        out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end(), [](const Relation& a, const Relation& b) {
        return std::tie(a.type, a.from.id, a.to.id) < std::tie(b.type, b.from.id, b.to.id);
    });
    return out;
}

std::vector<Violation> validate_perspective(const Chronology& c, const Perspective& p) {
    std::vector<Violation> out;
    std::set<std::string> seen;
    for (const auto& group : p.merge_groups) {
        if (group.empty()) {
            out.push_back({p.name, "merge-group", "empty merge group"});
        }
        for (const auto& id : group) {
            if (!c.find_event(id)) {
                out.push_back({id, "perspective-resolves", "merge group references unknown event '" + id + "'"});
            }
            if (!seen.insert(id).second) {
                out.push_back({id, "merge-group-disjoint", "event '" + id + "' appears in two merge groups"});
            }
        }
    }
    if (p.entity_filter) {
        for (const auto& id : *p.entity_filter) {
            const Concept* k = c.find_concept(id);
            if (!k || !std::holds_alternative<Entity>(k->value)) {
                out.push_back({id, "perspective-resolves", "entity filter references unknown entity '" + id + "'"});
            }
        }
    }
    if (p.time_window && !p.time_window->valid()) {
        out.push_back({p.name, "interval-order", "time window start after end"});
    }
    return out;
}

Chronology apply_perspective(Chronology c, const Perspective& p) {
    if (auto violations = validate_perspective(c, p); !violations.empty()) {
        throw ValidationError(std::move(violations));
    }
    for (const auto& group : p.merge_groups) {
        c = merge_events(std::move(c), group);
    }

    std::erase_if(c.relations, [&](const Relation& r) {
        return !p.included_rel_types.count(r.type) || (p.level_filter && !p.level_filter->count(r.level()));
    });

    std::set<std::string> dropped;
    std::set<std::string> kept_events;
    auto drop_event = [&](const Concept& k) { dropped.insert(k.id); };

    if (p.time_window) {
        for (const auto& k : c.concepts) {
            if (const auto* e = k.event(); e && e->anchor && !e->anchor->intersects(*p.time_window)) {
                drop_event(k);
            }
        }
    }
    if (p.entity_filter) {
        std::set<std::string> wanted(p.entity_filter->begin(), p.entity_filter->end());
        std::set<std::string> connected;
        for (const auto& k : c.concepts) {
            if (const auto* en = std::get_if<Entity>(&k.value); en && wanted.count(k.id)) {
                for (const auto& m : en->mentions) {
                    connected.insert(m.holder);
                }
            }
        }
        for (const auto& r : c.relations) {
            if (r.type != RelationType::Entity) {
                continue;
            }
            if (wanted.count(r.from.id)) {
                connected.insert(r.to.id);
            }
            if (wanted.count(r.to.id)) {
                connected.insert(r.from.id);
            }
        }
        for (const auto& k : c.concepts) {
            if (k.is_event() && !connected.count(k.id)) {
                drop_event(k);
            }
        }
        std::set<std::string> needed;
        for (const auto& k : c.concepts) {
            if (const auto* e = k.event(); e && !dropped.count(k.id)) {
                needed.insert(e->constitutive_objects.begin(), e->constitutive_objects.end());
            }
        }
        for (const auto& o : c.objects) {
            if (!connected.count(o.id) && !needed.count(o.id)) {
                dropped.insert(o.id);
            }
        }
    }

    // Objects that only constituted dropped events go with them.
    std::set<std::string> kept_constitutive, dropped_constitutive;
    for (const auto& k : c.concepts) {
        if (const auto* e = k.event()) {
            auto& bucket = dropped.count(k.id) ? dropped_constitutive : kept_constitutive;
            bucket.insert(e->constitutive_objects.begin(), e->constitutive_objects.end());
            if (!dropped.count(k.id)) {
                kept_events.insert(k.id);
            }
        }
    }
    for (const auto& id : dropped_constitutive) {
        if (!kept_constitutive.count(id)) {
            dropped.insert(id);
        }
    }

    if (!dropped.empty()) {
        std::erase_if(c.objects, [&](const InformationObject& o) { return dropped.count(o.id) > 0; });
        for (auto& o : c.objects) {
            for (auto* link : {&o.in_reply_to, &o.forwarded_from}) {
                if (*link && !(*link)->external && dropped.count((*link)->target)) {
                    (*link)->external = true;
                }
            }
            for (auto& a : o.attachments) {
                if (a.object_id && dropped.count(*a.object_id)) {
                    a.object_id.reset();
                }
            }
        }
        std::erase_if(c.concepts, [&](const Concept& k) {
            if (dropped.count(k.id)) {
                return true;
            }
            const auto* t = std::get_if<TemporalExpression>(&k.value);
            return t && dropped.count(t->source.holder) > 0;
        });
        std::set<std::string> remaining;
        for (const auto& k : c.concepts) {
            remaining.insert(k.id);
        }
        auto gone = [&](const Evidence& ev) { return dropped.count(ev.holder) > 0; };
        for (auto& k : c.concepts) {
            if (auto* en = std::get_if<Entity>(&k.value)) {
                std::erase_if(en->mentions, gone);
            } else if (auto* s = std::get_if<Subject>(&k.value)) {
                std::erase_if(s->mentions, gone);
            } else if (auto* e = k.event()) {
                std::erase_if(e->annotations, [&](const std::string& id) { return !remaining.count(id); });
            }
        }
        auto endpoint_gone = [&](const Endpoint& ep) {
            return dropped.count(ep.id) > 0 || (ep.kind == EndpointKind::concept_node && !remaining.count(ep.id));
        };
        std::erase_if(c.relations,
                      [&](const Relation& r) { return endpoint_gone(r.from) || endpoint_gone(r.to); });
        for (auto& r : c.relations) {
            std::erase_if(r.evidence, gone);
        }
    }

    c = renumber_events(std::move(c));
    ValidateOptions opts;
    opts.require_consists_of_mirror = p.included_rel_types.count(RelationType::ConsistsOf) &&
                                      (!p.level_filter || p.level_filter->count(Level::TE));
    if (auto violations = validate(c, opts); !violations.empty()) {
        throw ValidationError(std::move(violations));
    }
    return c;
}

std::string_view to_string(ObjectKind kind) {
    switch (kind) {
    case ObjectKind::email: return "email";
    case ObjectKind::document: return "document";
    case ObjectKind::news: return "news";
    case ObjectKind::report: return "report";
    case ObjectKind::legal: return "legal";
    case ObjectKind::other: return "other";
    }
    return "other";
}

std::string_view to_string(RelationType type) {
    switch (type) {
    case RelationType::TemporalSemantic: return "TemporalSemantic";
    case RelationType::Subject: return "Subject";
    case RelationType::Entity: return "Entity";
    case RelationType::Causal: return "Causal";
    case RelationType::Correspondence: return "Correspondence";
    case RelationType::Succession: return "Succession";
    case RelationType::ReferencesTo: return "ReferencesTo";
    case RelationType::ConsistsOf: return "ConsistsOf";
    }
    return "?";
}

std::string_view to_string(Level level) {
    switch (level) {
    case Level::TT: return "TT";
    case Level::TE: return "TE";
    case Level::EE: return "EE";
    }
    return "?";
}

std::string_view to_string(EntityKind kind) {
    switch (kind) {
    case EntityKind::person: return "person";
    case EntityKind::organization: return "organization";
    case EntityKind::place: return "place";
    }
    return "?";
}

std::string_view to_string(Provenance p) { return p == Provenance::asserted ? "asserted" : "derived"; }

std::optional<ObjectKind> parse_object_kind(std::string_view s) {
    for (auto k : {ObjectKind::email, ObjectKind::document, ObjectKind::news, ObjectKind::report,
                   ObjectKind::legal, ObjectKind::other}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    return std::nullopt;
}

std::optional<RelationType> parse_relation_type(std::string_view s) {
    for (auto t : kAllRelationTypes) {
        if (to_string(t) == s) {
            return t;
        }
    }
    return std::nullopt;
}

std::optional<Level> parse_level(std::string_view s) {
    for (auto l : kAllLevels) {
        if (to_string(l) == s) {
            return l;
        }
    }
    return std::nullopt;
}

std::optional<EntityKind> parse_entity_kind(std::string_view s) {
    for (auto k : {EntityKind::person, EntityKind::organization, EntityKind::place}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    return std::nullopt;
}

std::optional<Provenance> parse_provenance(std::string_view s) {
    if (s == "derived") {
        return Provenance::derived;
    }
    if (s == "asserted") {
        return Provenance::asserted;
    }
    return std::nullopt;
}

}  // namespace timeflow
