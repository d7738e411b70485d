#include <algorithm>
#include <set>

#include "timeflow/chronology.hpp"

namespace timeflow::chronology {

Chronology build(std::vector<InformationObject> objects, std::vector<Concept> concepts,
                 std::vector<Relation> relations, ChronologyMeta meta) {
    Chronology c;
    std::sort(objects.begin(), objects.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    std::sort(concepts.begin(), concepts.end(), [](const auto& a, const auto& b) { return a.id < b.id; });

    std::set<std::string> present;
    for (const auto& r : relations) {
        if (r.type == RelationType::ConsistsOf) {
            present.insert(r.id);
        }
    }
    for (const auto& k : concepts) {
        if (const Event* e = k.event()) {
            for (const auto& oid : e->constitutive_objects) {
                auto r = make_relation(RelationType::ConsistsOf, {k.id, EndpointKind::concept_node},
                                       {oid, EndpointKind::object});
                if (present.insert(r.id).second) {
                    relations.push_back(std::move(r));
                }
            }
        }
    }

    c.objects = std::move(objects);
    c.concepts = std::move(concepts);
    c.relations = dedupe_relations(std::move(relations));
    c.meta = std::move(meta);

    // Ordinals are assigned below, so their check is deferred.
    auto violations = validate(c);
    std::erase_if(violations, [](const Violation& v) { return v.rule == "ordinal-order"; });
    if (!violations.empty()) {
        throw ValidationError(std::move(violations));
    }
    c = renumber_events(std::move(c));
    if (auto rest = validate(c); !rest.empty()) {
        throw ValidationError(std::move(rest));
    }
    return c;
}

std::vector<DateInterval> detect_gaps(const Chronology& chronology, long min_gap_days) {
    if (min_gap_days <= 0) {
        throw Error("minimum gap must be a positive number of days");
    }
    std::vector<DateInterval> gaps;
    std::optional<Date> reach;
    for (const auto* k : chronology.events()) {
        const auto& anchor = k->event()->anchor;
        if (!anchor) {
            continue;
        }
        if (reach && anchor->start - *reach - 1 >= min_gap_days) {
            gaps.push_back({reach->plus_days(1), anchor->start.plus_days(-1)});
        }
        reach = reach ? std::max(*reach, anchor->end) : anchor->end;
    }
    return gaps;
}

}  // namespace timeflow::chronology
