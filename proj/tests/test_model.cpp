#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "support.hpp"
#include "timeflow/model.hpp"

using namespace timeflow;

namespace {

// Hand-written admissibility table: rows in taxonomy order, columns TT TE EE.
const std::map<RelationType, std::array<bool, 3>> kAdmissible = {
    {RelationType::TemporalSemantic, {true, true, true}},
    {RelationType::Subject, {true, true, true}},
    {RelationType::Entity, {true, true, true}},
    {RelationType::Causal, {true, true, true}},
    {RelationType::Correspondence, {true, true, true}},
    {RelationType::Succession, {true, false, false}},
    {RelationType::ReferencesTo, {true, false, false}},
    {RelationType::ConsistsOf, {false, true, false}},
};

InformationObject object(std::string id, std::string body = "text") {
    InformationObject o;
    o.id = std::move(id);
    o.title = o.id;
    o.body = std::move(body);
    return o;
}

Concept event(std::string id, Date start, std::vector<std::string> objects, std::string title = "Event") {
    Event e;
    e.title = std::move(title);
    e.anchor = DateInterval::day(start);
    e.constitutive_objects = std::move(objects);
    return {std::move(id), Provenance::asserted, std::move(e)};
}

Date d(int y, unsigned m, unsigned day) { return *Date::from_ymd(y, m, day); }

Endpoint obj(std::string id) { return {std::move(id), EndpointKind::object}; }
Endpoint con(std::string id) { return {std::move(id), EndpointKind::concept_node}; }

Chronology small() {
    Chronology c;
    c.objects = {object("a"), object("b"), object("c")};
    c.concepts = {event("e1", d(2017, 1, 5), {"a"}), event("e2", d(2016, 3, 1), {"b", "c"}),
                  event("e3", d(2017, 1, 5), {"c"})};
    for (const auto& k : c.concepts) {
        for (const auto& o : k.event()->constitutive_objects) {
            c.relations.push_back(make_relation(RelationType::ConsistsOf, con(k.id), obj(o)));
        }
    }
    c.relations.push_back(make_relation(RelationType::Subject, con("e1"), con("e2")));
    c.relations.push_back(make_relation(RelationType::Entity, con("e2"), con("e3")));
    c.relations.push_back(make_relation(RelationType::Succession, obj("a"), obj("b")));
    c.relations = dedupe_relations(c.relations);
    return renumber_events(c);
}

}  // namespace

TEST_CASE("admissibility matches the hand table in every cell") {
    for (auto t : kAllRelationTypes) {
        for (std::size_t l = 0; l < kAllLevels.size(); ++l) {
            CAPTURE(to_string(t));
            CAPTURE(to_string(kAllLevels[l]));
            CHECK(admissible(t, kAllLevels[l]) == kAdmissible.at(t)[l]);
        }
    }
}

TEST_CASE("levels follow endpoint kinds") {
    CHECK(level_of(EndpointKind::object, EndpointKind::object) == Level::TT);
    CHECK(level_of(EndpointKind::object, EndpointKind::concept_node) == Level::TE);
    CHECK(level_of(EndpointKind::concept_node, EndpointKind::object) == Level::TE);
    CHECK(level_of(EndpointKind::concept_node, EndpointKind::concept_node) == Level::EE);
}

TEST_CASE("inadmissible pairs are explained") {
    CHECK(admissibility_message(RelationType::Succession, Level::EE) ==
          "Succession admissible only at TT (Group B relation), found EE");
    CHECK(admissibility_message(RelationType::ConsistsOf, Level::TT).find("only at TE") != std::string::npos);
}

TEST_CASE("direction and group membership") {
    std::set<RelationType> directed;
    for (auto t : kAllRelationTypes) {
        if (inherently_directed(t)) directed.insert(t);
    }
    CHECK(directed == std::set{RelationType::Causal, RelationType::Succession, RelationType::ReferencesTo,
                               RelationType::ConsistsOf});
    int group_a = 0;
    for (auto t : kAllRelationTypes) group_a += is_group_a(t);
    CHECK(group_a == 5);
    CHECK_FALSE(is_group_a(RelationType::Succession));
}

TEST_CASE("undirected relation ids ignore endpoint order") {
    auto r1 = make_relation(RelationType::Subject, con("b"), con("a"));
    auto r2 = make_relation(RelationType::Subject, con("a"), con("b"));
    CHECK(r1.id == r2.id);
    CHECK(r1.id == "Subject:a--b");
    CHECK(r1.from.id == "a");
    CHECK_FALSE(r1.directed);

    auto c1 = make_relation(RelationType::Causal, con("b"), con("a"));
    CHECK(c1.id == "Causal:b->a");
    CHECK(c1.directed);
    CHECK(c1.from.id == "b");
}

TEST_CASE("dedupe unions evidence and keeps the larger weight") {
    auto a = make_relation(RelationType::Subject, con("x"), con("y"), {{"x", 0, 3, "abc"}});
    a.weight = 0.4;
    auto b = make_relation(RelationType::Subject, con("y"), con("x"), {{"y", 1, 2, "b"}, {"x", 0, 3, "abc"}},
                           Provenance::asserted);
    b.weight = 0.7;
    auto out = dedupe_relations({a, b});
    REQUIRE(out.size() == 1);
    CHECK(out[0].evidence.size() == 2);
    CHECK(out[0].weight == doctest::Approx(0.7));
    CHECK(out[0].provenance == Provenance::asserted);
}

TEST_CASE("a consistent chronology validates cleanly") {
    CHECK(validate(small()).empty());
}

TEST_CASE("validate reports each broken rule") {
    auto rules = [](const Chronology& c) {
        std::set<std::string> out;
        for (const auto& v : validate(c)) out.insert(v.rule);
        return out;
    };
    SUBCASE("Succession between events") {
        auto c = small();
        c.relations.push_back(make_relation(RelationType::Succession, con("e1"), con("e2")));
        auto v = validate(c);
        REQUIRE(v.size() == 1);
        CHECK(v[0].rule == "admissibility");
        CHECK(v[0].message == "Succession admissible only at TT (Group B relation), found EE");
    }
    SUBCASE("missing ConsistsOf mirror") {
        auto c = small();
        std::erase_if(c.relations, [](const Relation& r) { return r.type == RelationType::ConsistsOf; });
        CHECK(rules(c) == std::set<std::string>{"consists-of-mirror"});
        CHECK(validate(c, {false}).empty());
    }
    SUBCASE("dangling endpoint") {
        auto c = small();
        c.relations.push_back(make_relation(RelationType::Entity, con("e1"), con("ghost")));
        CHECK(rules(c) == std::set<std::string>{"endpoint-resolves"});
    }
    SUBCASE("duplicate ids") {
        auto c = small();
        c.objects.push_back(object("a"));
        CHECK(rules(c).count("unique-id"));
    }
    SUBCASE("stale ordinals") {
        auto c = small();
        c.concepts[0].event()->ordinal = 7;
        CHECK(rules(c) == std::set<std::string>{"ordinal-order"});
    }
    SUBCASE("weight out of range") {
        auto c = small();
        c.relations.back().weight = 1.5;
        CHECK(rules(c) == std::set<std::string>{"weight-range"});
    }
    SUBCASE("evidence outside its host") {
        auto c = small();
        c.relations.back().evidence.push_back({"a", 2, 99, "x"});
        CHECK(rules(c) == std::set<std::string>{"evidence-span"});
    }
}

TEST_CASE("renumbering orders by anchor start then id") {
    std::mt19937 rng(7);
    for (int round = 0; round < 50; ++round) {
        Chronology c;
        c.objects = {object("o")};
        int n = std::uniform_int_distribution<int>(1, 12)(rng);
        for (int i = 0; i < n; ++i) {
            c.concepts.push_back(event("ev" + std::to_string(i),
                                       d(2000, 1, 1).plus_days(std::uniform_int_distribution<int>(0, 5)(rng)), {"o"}));
        }
        std::shuffle(c.concepts.begin(), c.concepts.end(), rng);
        // Oracle: stable sort of the ids on (start, id).
        std::vector<const Concept*> expected;
        for (const auto& k : c.concepts) expected.push_back(&k);
        std::stable_sort(expected.begin(), expected.end(), [](const Concept* a, const Concept* b) {
            if (a->event()->anchor->start != b->event()->anchor->start)
                return a->event()->anchor->start < b->event()->anchor->start;
            return a->id < b->id;
        });
        std::map<std::string, int> want;
        for (std::size_t i = 0; i < expected.size(); ++i) want[expected[i]->id] = static_cast<int>(i + 1);

        auto once = renumber_events(c);
        for (const auto& k : once.concepts) CHECK(k.event()->ordinal == want.at(k.id));
        CHECK(renumber_events(once) == once);
    }
}

TEST_CASE("renumbering needs anchors") {
    auto c = small();
    c.concepts[1].event()->anchor.reset();
    CHECK_THROWS_AS(renumber_events(c), Error);
}

TEST_CASE("merging events unions their objects and drops internal edges") {
    auto c = small();
    std::vector<std::string> ids{"e1", "e3"};
    auto m = merge_events(c, ids);
    CHECK(validate(m).empty());
    const Event* comp = m.find_event(composite_event_id(ids));
    REQUIRE(comp);
    // Oracle: set union of the members' objects.
    std::set<std::string> want;
    for (const auto& id : ids) {
        const auto& objs = c.find_event(id)->constitutive_objects;
        want.insert(objs.begin(), objs.end());
    }
    CHECK(std::set(comp->constitutive_objects.begin(), comp->constitutive_objects.end()) == want);
    CHECK(comp->anchor == DateInterval::day(d(2017, 1, 5)));
    CHECK_FALSE(m.find_event("e1"));
    CHECK(m.events().size() == 2);
    for (const auto& r : m.relations) {
        CHECK(r.from.id != r.to.id);
    }
    CHECK_THROWS_AS(merge_events(c, std::vector<std::string>{"e1", "nope"}), NotFoundError);
}

TEST_CASE("perspective filters") {
    auto c = small();
    SUBCASE("identity perspective is a no-op") {
        CHECK(apply_perspective(c, Perspective{}) == c);
    }
    SUBCASE("relation types") {
        Perspective p;
        p.included_rel_types = {RelationType::Subject, RelationType::ConsistsOf};
        auto v = apply_perspective(c, p);
        for (const auto& r : v.relations) {
            CHECK((r.type == RelationType::Subject || r.type == RelationType::ConsistsOf));
        }
        CHECK(v.relations.size() == c.relations.size() - 2);
    }
    SUBCASE("time window keeps intersecting events only") {
        Perspective p;
        p.time_window = DateInterval{d(2017, 1, 1), d(2017, 12, 31)};
        auto v = apply_perspective(c, p);
        std::set<std::string> kept;
        for (const auto* k : v.events()) kept.insert(k->id);
        // Oracle: plain date filter over the original events.
        std::set<std::string> want;
        for (const auto* k : c.events()) {
            if (k->event()->anchor->intersects(*p.time_window)) want.insert(k->id);
        }
        CHECK(kept == want);
        CHECK_FALSE(v.find_object("b"));
        CHECK(v.find_object("c"));
    }
    SUBCASE("unknown merge member") {
        Perspective p;
        p.merge_groups = {{"e1", "zz"}};
        CHECK_THROWS_AS(apply_perspective(c, p), ValidationError);
    }
}

TEST_CASE("merge then identity perspective equals merge alone") {
    std::mt19937 rng(11);
    for (int round = 0; round < 40; ++round) {
        auto c = testing::random_chronology(rng);
        auto events = c.events();
        if (events.size() < 2) continue;
        std::vector<std::string> ids{events[0]->id, events[1]->id};
        auto merged = merge_events(c, ids);
        CHECK(apply_perspective(merged, Perspective{}) == merged);
        Perspective with_group;
        with_group.merge_groups = {ids};
        CHECK(apply_perspective(c, with_group) == merged);
    }
}

TEST_CASE("every stored relation is admissible (random relations)") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> type(0, 7), kind(0, 1);
    std::vector<Relation> accepted;
    for (int i = 0; i < 2000; ++i) {
        auto t = kAllRelationTypes[static_cast<std::size_t>(type(rng))];
        Endpoint a{"a", kind(rng) ? EndpointKind::object : EndpointKind::concept_node};
        Endpoint b{"b", kind(rng) ? EndpointKind::object : EndpointKind::concept_node};
        auto r = make_relation(t, a, b);
        CHECK(r.level() == level_of(a.kind, b.kind));
        if (admissible(r.type, r.level())) accepted.push_back(r);
    }
    for (const auto& r : accepted) {
        CHECK(kAdmissible.at(r.type)[static_cast<std::size_t>(r.level())]);
    }
}

TEST_CASE("random chronologies are valid and renumbering is idempotent") {
    std::mt19937 rng(5);
    for (int i = 0; i < 60; ++i) {
        auto c = testing::random_chronology(rng);
        CHECK(validate(c).empty());
        CHECK(renumber_events(c) == c);
    }
}

TEST_CASE("host text of events joins title and description") {
    auto c = small();
    CHECK(host_text(c, "a") == std::optional<std::string>("text"));
    CHECK(host_text(c, "e1") == event_text(*c.find_event("e1")));
    CHECK_FALSE(host_text(c, "missing"));
}
