#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "timeflow/extract.hpp"
#include "timeflow/relate.hpp"
#include "timeflow/text.hpp"

namespace timeflow::relate {

namespace {

Endpoint object_endpoint(const std::string& id) { return {id, EndpointKind::object}; }
Endpoint concept_endpoint(const std::string& id) { return {id, EndpointKind::concept_node}; }

bool contains(const std::vector<std::string>& v, const std::string& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

// An event is never related to its own constitutive objects by the pairwise
// derivations: what they share is what the event was distilled from.
bool own_constituent(const Item& a, const Item& b) {
    if (a.is_event() == b.is_event()) {
        return false;
    }
    const Item& event = a.is_event() ? a : b;
    const Item& object = a.is_event() ? b : a;
    return contains(event.objects, object.endpoint.id);
}

using PairRule = std::function<std::optional<Relation>(const Item&, const Item&)>;

std::vector<Relation> pairwise(const std::vector<Item>& items, RelationType type, const RelateConfig& config,
                               const PairRule& rule) {
    std::vector<Relation> out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        for (std::size_t j = i + 1; j < items.size(); ++j) {
            const auto& a = items[i];
            const auto& b = items[j];
            if (!config.derives(type, level_of(a.endpoint.kind, b.endpoint.kind)) || own_constituent(a, b)) {
                continue;
            }
            if (auto r = rule(a, b)) {
                out.push_back(std::move(*r));
            }
        }
    }
    return out;
}

// Evidence pairs for keys the two items share.
std::vector<Evidence> shared_keys(const std::vector<KeyedEvidence>& a, const std::vector<KeyedEvidence>& b,
                                  const std::set<std::string>& excluded = {}) {
    std::vector<Evidence> out;
    for (const auto& x : a) {
        if (excluded.count(x.key)) {
            continue;
        }
        for (const auto& y : b) {
            if (x.key == y.key && x.evidence != y.evidence) {
                out.push_back(x.evidence);
                out.push_back(y.evidence);
            }
        }
    }
    return out;
}

struct DisjointSets {
    std::map<std::string, std::string> parent;

    std::string find(const std::string& x) {
        auto it = parent.find(x);
        if (it == parent.end() || it->second == x) {
            return x;
        }
        auto root = find(it->second);
        parent[x] = root;
        return root;
    }
    void unite(const std::string& a, const std::string& b) {
        auto ra = find(a), rb = find(b);
        if (ra != rb) {
            parent[std::max(ra, rb)] = std::min(ra, rb);
        }
    }
};

std::optional<std::string> internal_target(const std::optional<ObjectLink>& link) {
    if (link && !link->external && !link->target.empty()) {
        return link->target;
    }
    return std::nullopt;
}

std::vector<std::string> correspondents_of(const InformationObject& o) {
    std::vector<std::string> out = o.recipients;
    if (o.sender) {
        out.push_back(*o.sender);
    }
    return out;
}

}  // namespace

std::vector<Item> collect_items(const std::vector<InformationObject>& objects, const std::vector<Concept>& concepts) {
    std::vector<Item> items;
    std::map<std::string, std::size_t> index;
    std::map<std::string, const InformationObject*> by_id;

    std::vector<const InformationObject*> sorted_objects;
    for (const auto& o : objects) {
        sorted_objects.push_back(&o);
        by_id[o.id] = &o;
    }
    std::sort(sorted_objects.begin(), sorted_objects.end(),
              [](const auto* a, const auto* b) { return a->id < b->id; });
    for (const auto* o : sorted_objects) {
        Item it;
        it.endpoint = object_endpoint(o->id);
        it.objects = {o->id};
        it.text = o->body;
        for (const auto& name : correspondents_of(*o)) {
            it.correspondents.insert(text::lower(name));
        }
        index[o->id] = items.size();
        items.push_back(std::move(it));
    }

    std::vector<const Concept*> events;
    for (const auto& c : concepts) {
        if (c.is_event()) {
            events.push_back(&c);
        }
    }
    std::sort(events.begin(), events.end(), [](const auto* a, const auto* b) { return a->id < b->id; });
    for (const auto* c : events) {
        const Event& e = *c->event();
        Item it;
        it.endpoint = concept_endpoint(c->id);
        it.objects = e.constitutive_objects;
        it.text = event_text(e);
        for (const auto& oid : e.constitutive_objects) {
            if (auto f = by_id.find(oid); f != by_id.end()) {
                for (const auto& name : correspondents_of(*f->second)) {
                    it.correspondents.insert(text::lower(name));
                }
            }
        }
        index[c->id] = items.size();
        items.push_back(std::move(it));
    }

    for (const auto& c : concepts) {
        if (const auto* t = std::get_if<TemporalExpression>(&c.value)) {
            TemporalFact fact{t->normalized, t->source};
            if (auto f = index.find(t->source.holder); f != index.end()) {
                items[f->second].temporal.push_back(fact);
            }
            for (auto& it : items) {
                if (it.is_event() && contains(it.objects, t->source.holder)) {
                    it.temporal.push_back(fact);
                }
            }
        } else if (const auto* en = std::get_if<Entity>(&c.value)) {
            for (const auto& m : en->mentions) {
                if (auto f = index.find(m.holder); f != index.end()) {
                    items[f->second].entities.push_back({c.id, m});
                }
            }
        } else if (const auto* s = std::get_if<Subject>(&c.value)) {
            for (const auto& m : s->mentions) {
                if (auto f = index.find(m.holder); f != index.end()) {
                    items[f->second].subjects.push_back({c.id, m});
                }
            }
        }
    }
    return items;
}

std::vector<Relation> derive_consists_of(const std::vector<Concept>& concepts) {
    std::vector<Relation> out;
    for (const auto& c : concepts) {
        const Event* e = c.event();
        if (!e) {
            continue;
        }
        if (e->constitutive_objects.empty()) {
            throw Error("event '" + c.id + "' has no constitutive objects");
        }
        for (const auto& oid : e->constitutive_objects) {
            out.push_back(make_relation(RelationType::ConsistsOf, concept_endpoint(c.id), object_endpoint(oid)));
        }
    }
    return out;
}

std::vector<Relation> derive_succession(const std::vector<InformationObject>& objects,
                                        std::vector<Diagnostic>& diagnostics) {
    std::set<std::string> known;
    for (const auto& o : objects) {
        known.insert(o.id);
    }
    std::vector<Relation> out;
    for (const auto& o : objects) {
        for (const auto* link : {&o.in_reply_to, &o.forwarded_from}) {
            if (!*link) {
                continue;
            }
            const auto& l = **link;
            if (l.external || !known.count(l.target)) {
                diagnostics.push_back({Diagnostic::Severity::info, "succession-external", o.id,
                                       "follow-up of '" + l.target + "' which is not in the corpus"});
                continue;
            }
            if (l.target == o.id) {
                continue;
            }
            out.push_back(make_relation(RelationType::Succession, object_endpoint(l.target), object_endpoint(o.id)));
        }
    }
    return out;
}

std::vector<Relation> derive_references_to(const std::vector<InformationObject>& objects,
                                           std::vector<Diagnostic>& diagnostics) {
    std::vector<Relation> out;
    for (const auto& o : objects) {
        for (const auto& a : o.attachments) {
            if (!a.object_id) {
                diagnostics.push_back({Diagnostic::Severity::warning, "attachment-unresolved", o.id,
                                       "attachment '" + a.name + "' matches no object"});
                continue;
            }
            if (*a.object_id == o.id) {
                continue;
            }
            auto r = make_relation(RelationType::ReferencesTo, object_endpoint(o.id), object_endpoint(*a.object_id));
            r.note = "attachment " + a.name;
            out.push_back(std::move(r));
        }
    }
    for (const auto& referrer : objects) {
        auto follows = [&](const std::string& id) {
            return internal_target(referrer.in_reply_to) == id || internal_target(referrer.forwarded_from) == id;
        };
        for (const auto& target : objects) {
            if (target.id == referrer.id || target.title.empty() || follows(target.id)) {
                continue;
            }
            std::vector<Evidence> ev;
            for (const auto& span : text::find_bounded(referrer.body, target.title)) {
                ev.push_back({referrer.id, span.begin, span.end, referrer.body.substr(span.begin, span.end - span.begin)});
            }
            if (!ev.empty()) {
                out.push_back(make_relation(RelationType::ReferencesTo, object_endpoint(referrer.id),
                                            object_endpoint(target.id), std::move(ev)));
            }
        }
    }
    return out;
}

std::vector<Relation> derive_temporal_semantic(const std::vector<Item>& items, const RelateConfig& config) {
    return pairwise(items, RelationType::TemporalSemantic, config, [](const Item& a, const Item& b) {
        std::vector<Evidence> ev;
        for (const auto& x : a.temporal) {
            for (const auto& y : b.temporal) {
                if (x.evidence != y.evidence && x.interval.intersects(y.interval)) {
                    ev.push_back(x.evidence);
                    ev.push_back(y.evidence);
                }
            }
        }
        if (ev.empty()) {
            return std::optional<Relation>{};
        }
        return std::optional(make_relation(RelationType::TemporalSemantic, a.endpoint, b.endpoint, std::move(ev)));
    });
}

std::vector<Relation> derive_entity_relations(const std::vector<Item>& items, const std::vector<Concept>& concepts,
                                              const RelateConfig& config) {
    std::set<std::string> pinned;
    for (const auto& c : concepts) {
        if (const auto* e = std::get_if<Entity>(&c.value); e && e->pinned) {
            pinned.insert(c.id);
        }
    }
    auto out = pairwise(items, RelationType::Entity, config, [&](const Item& a, const Item& b) {
        auto ev = shared_keys(a.entities, b.entities, pinned);
        if (ev.empty()) {
            return std::optional<Relation>{};
        }
        return std::optional(make_relation(RelationType::Entity, a.endpoint, b.endpoint, std::move(ev)));
    });
    for (const auto& id : pinned) {
        for (const auto& it : items) {
            std::vector<Evidence> ev;
            for (const auto& m : it.entities) {
                if (m.key == id) {
                    ev.push_back(m.evidence);
                }
            }
            if (!ev.empty()) {
                out.push_back(make_relation(RelationType::Entity, concept_endpoint(id), it.endpoint, std::move(ev)));
            }
        }
    }
    return out;
}

std::vector<Relation> derive_subject_relations(const std::vector<Item>& items, const RelateConfig& config) {
    if (config.tfidf_threshold) {
        std::vector<std::string> docs;
        for (const auto& it : items) {
            docs.push_back(it.text);
        }
        extract::TfidfModel model(docs);
        std::map<std::string, std::size_t> index;
        for (std::size_t i = 0; i < items.size(); ++i) {
            index[items[i].endpoint.id] = i;
        }
        double threshold = *config.tfidf_threshold;
        return pairwise(items, RelationType::Subject, config, [&](const Item& a, const Item& b) {
            double cos = model.cosine(index.at(a.endpoint.id), index.at(b.endpoint.id));
            if (cos < threshold || cos == 0.0) {
                return std::optional<Relation>{};
            }
            auto r = make_relation(RelationType::Subject, a.endpoint, b.endpoint);
            r.weight = cos;
            r.note = "tf-idf cosine";
            return std::optional(std::move(r));
        });
    }
    return pairwise(items, RelationType::Subject, config, [](const Item& a, const Item& b) {
        auto ev = shared_keys(a.subjects, b.subjects);
        if (ev.empty()) {
            return std::optional<Relation>{};
        }
        auto r = make_relation(RelationType::Subject, a.endpoint, b.endpoint, std::move(ev));
        r.weight = 1.0;
        return std::optional(std::move(r));
    });
}

std::vector<Relation> derive_correspondence(const std::vector<Item>& items,
                                            const std::vector<InformationObject>& objects,
                                            const RelateConfig& config) {
    DisjointSets threads;
    std::map<std::string, const InformationObject*> by_id;
    for (const auto& o : objects) {
        by_id[o.id] = &o;
    }
    for (const auto& o : objects) {
        for (const auto* link : {&o.in_reply_to, &o.forwarded_from}) {
            if (auto t = internal_target(*link); t && by_id.count(*t)) {
                threads.unite(o.id, *t);
            }
        }
    }
    // Lowercased name -> spelling as first seen, per object.
    auto names = [&](const std::string& oid) {
        std::map<std::string, std::string> out;
        if (auto f = by_id.find(oid); f != by_id.end()) {
            for (const auto& n : correspondents_of(*f->second)) {
                out.emplace(text::lower(n), n);
            }
        }
        return out;
    };

    return pairwise(items, RelationType::Correspondence, config, [&](const Item& a, const Item& b) {
        std::set<std::string> shared;
        std::vector<Evidence> ev;
        for (const auto& oa : a.objects) {
            for (const auto& ob : b.objects) {
                if (oa == ob || threads.find(oa) != threads.find(ob)) {
                    continue;
                }
                auto na = names(oa), nb = names(ob);
                for (const auto& [key, spelling] : na) {
                    if (!nb.count(key)) {
                        continue;
                    }
                    shared.insert(spelling);
                    for (const auto* holder : {&oa, &ob}) {
                        const auto& body = by_id.at(*holder)->body;
                        for (const auto& s : text::find_bounded(body, spelling)) {
                            ev.push_back({*holder, s.begin, s.end, body.substr(s.begin, s.end - s.begin)});
                        }
                    }
                }
            }
        }
        if (shared.empty()) {
            return std::optional<Relation>{};
        }
        auto r = make_relation(RelationType::Correspondence, a.endpoint, b.endpoint, std::move(ev));
        r.note = "shared correspondents: ";
        bool first = true;
        for (const auto& s : shared) {
            r.note += (first ? "" : ", ") + s;
            first = false;
        }
        return std::optional(std::move(r));
    });
}

Derivation derive_causal(const std::vector<Item>& items, const std::vector<InformationObject>& objects,
                         const std::vector<Concept>& concepts, const std::vector<AssertedRelation>& assertions,
                         const RelateConfig& config) {
    Derivation out;
    std::map<std::string, const InformationObject*> by_id;
    for (const auto& o : objects) {
        by_id[o.id] = &o;
    }
    std::map<std::string, const Concept*> concept_by_id;
    for (const auto& c : concepts) {
        concept_by_id[c.id] = &c;
    }
    auto endpoint_for = [&](const std::string& id) -> std::optional<Endpoint> {
        if (by_id.count(id)) {
            return object_endpoint(id);
        }
        if (concept_by_id.count(id)) {
            return concept_endpoint(id);
        }
        return std::nullopt;
    };

    for (const auto& a : assertions) {
        auto from = endpoint_for(a.from);
        auto to = endpoint_for(a.to);
        if (!from || !to) {
            out.diagnostics.push_back({Diagnostic::Severity::error, "assertion-unresolved",
                                       a.from + " -> " + a.to, "asserted relation names an unknown item"});
            continue;
        }
        auto r = make_relation(a.type, *from, *to, {}, Provenance::asserted);
        r.note = a.note;
        out.relations.push_back(std::move(r));
    }

    // Follow-ups: an event distilled from a reply or forward of another
    // event's text is its consequence.
    if (config.derives(RelationType::Causal, Level::EE)) {
        for (const auto& later : items) {
            if (!later.is_event()) {
                continue;
            }
            for (const auto& bid : later.objects) {
                auto bf = by_id.find(bid);
                if (bf == by_id.end()) {
                    continue;
                }
                const auto* b = bf->second;
                for (const auto* link : {&b->in_reply_to, &b->forwarded_from}) {
                    auto aid = internal_target(*link);
                    if (!aid || !by_id.count(*aid)) {
                        continue;
                    }
                    const auto* a = by_id.at(*aid);
                    for (const auto& earlier : items) {
                        if (!earlier.is_event() || &earlier == &later || !contains(earlier.objects, *aid) ||
                            contains(earlier.objects, bid)) {
                            continue;
                        }
                        auto r = make_relation(RelationType::Causal, earlier.endpoint, later.endpoint);
                        std::optional<long> gap;
                        if (a->created && b->created) {
                            gap = *b->created - *a->created;
                        }
                        r.note = "follow-up " + a->id + " -> " + b->id +
                                 (gap ? " after " + std::to_string(*gap) + " days" : std::string(", dates unknown"));
                        bool accept = gap && *gap >= 0 && *gap <= config.causal_auto_accept_days;
                        (accept ? out.relations : out.proposals).push_back(std::move(r));
                    }
                }
            }
        }
    }

    // Cue phrases: "<event title> ... led to ... <event title>".
    struct Titled {
        const Item* item;
        std::string title;
        DateInterval anchor;
    };
    std::vector<Titled> titled;
    for (const auto& it : items) {
        if (!it.is_event()) {
            continue;
        }
        const Event* e = concept_by_id.at(it.endpoint.id)->event();
        if (!e->title.empty() && e->anchor) {
            titled.push_back({&it, e->title, *e->anchor});
        }
    }
    for (const auto& host : items) {
        for (const auto& sentence : text::split_sentences(host.text)) {
            std::string_view s = std::string_view(host.text).substr(sentence.begin, sentence.end - sentence.begin);
            for (const auto& cue : config.cues.cues) {
                for (const auto& c : text::find_bounded(s, cue)) {
                    for (const auto& x : titled) {
                        for (const auto& y : titled) {
                            if (x.item == y.item || x.item == &host || y.item == &host) {
                                continue;
                            }
                            for (const auto& mx : text::find_bounded(s.substr(0, c.begin), x.title)) {
                                for (const auto& my : text::find_bounded(s.substr(c.end), y.title)) {
                                    bool x_first = std::pair(x.anchor.start, x.item->endpoint.id) <
                                                   std::pair(y.anchor.start, y.item->endpoint.id);
                                    const auto& from = x_first ? x : y;
                                    const auto& to = x_first ? y : x;
                                    auto at = [&](std::size_t b, std::size_t e) {
                                        std::size_t base = sentence.begin;
                                        return Evidence{host.endpoint.id, base + b, base + e,
                                                        std::string(s.substr(b, e - b))};
                                    };
                                    auto r = make_relation(RelationType::Causal, from.item->endpoint,
                                                           to.item->endpoint,
                                                           {at(mx.begin, mx.end), at(c.begin, c.end),
                                                            at(c.end + my.begin, c.end + my.end)});
                                    r.note = "cue '" + cue + "'";
                                    if (config.derives(RelationType::Causal, r.level())) {
                                        out.proposals.push_back(std::move(r));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    return out;
}

std::vector<Relation> finalize(std::vector<Relation> relations, std::vector<Diagnostic>& diagnostics) {
    std::vector<Relation> kept;
    for (auto& r : relations) {
        if (!admissible(r.type, r.level())) {
            diagnostics.push_back(
                {Diagnostic::Severity::error, "inadmissible", r.id, admissibility_message(r.type, r.level())});
            continue;
        }
        r.directed = inherently_directed(r.type);
        kept.push_back(std::move(r));
    }
    return dedupe_relations(std::move(kept));
}

Derivation derive_all(const std::vector<InformationObject>& objects, const std::vector<Concept>& concepts,
                      const std::vector<AssertedRelation>& assertions, const RelateConfig& config) {
    auto items = collect_items(objects, concepts);
    Derivation out;
    std::vector<Relation> all;
    auto append = [&](std::vector<Relation> rs) {
        all.insert(all.end(), std::make_move_iterator(rs.begin()), std::make_move_iterator(rs.end()));
    };
    append(derive_consists_of(concepts));
    append(derive_succession(objects, out.diagnostics));
    append(derive_references_to(objects, out.diagnostics));
    append(derive_temporal_semantic(items, config));
    append(derive_entity_relations(items, concepts, config));
    append(derive_subject_relations(items, config));
    append(derive_correspondence(items, objects, config));
    auto causal = derive_causal(items, objects, concepts, assertions, config);
    append(std::move(causal.relations));
    out.diagnostics.insert(out.diagnostics.end(), causal.diagnostics.begin(), causal.diagnostics.end());

    out.relations = finalize(std::move(all), out.diagnostics);
    std::set<std::string> accepted;
    for (const auto& r : out.relations) {
        accepted.insert(r.id);
    }
    out.proposals = finalize(std::move(causal.proposals), out.diagnostics);
    std::erase_if(out.proposals, [&](const Relation& r) { return accepted.count(r.id) > 0; });
    return out;
}

}  // namespace timeflow::relate
