#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "timeflow/chronology.hpp"
#include "timeflow/interchange.hpp"
#include "timeflow/model.hpp"

namespace testing {

inline std::filesystem::path corpus_dir() { return TIMEFLOW_CORPUS_DIR; }
inline std::filesystem::path golden_manifest() { return corpus_dir() / "childcare" / "corpus.json"; }
inline std::filesystem::path snapshot_dir() { return TIMEFLOW_SNAPSHOT_DIR; }
inline std::filesystem::path fixture_dir() { return TIMEFLOW_FIXTURE_DIR; }

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("timeflow-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// (type, from, to, level) as written in the golden expectation file.
using Triple = std::tuple<std::string, std::string, std::string, std::string>;

inline std::set<Triple> triples(const timeflow::Chronology& c) {
    std::set<Triple> out;
    for (const auto& r : c.relations) {
        out.emplace(std::string(timeflow::to_string(r.type)), r.from.id, r.to.id,
                    std::string(timeflow::to_string(r.level())));
    }
    return out;
}

struct GoldenExpectation {
    std::vector<std::pair<std::string, int>> events;  // id, ordinal
    std::set<Triple> relations;
};

inline GoldenExpectation golden_expectation() {
    auto j = nlohmann::json::parse(slurp(corpus_dir() / "childcare" / "expected.json"));
    GoldenExpectation g;
    for (const auto& e : j.at("events")) {
        g.events.emplace_back(e.at("id").get<std::string>(), e.at("ordinal").get<int>());
    }
    for (const auto& r : j.at("relations")) {
        g.relations.emplace(r.at("type").get<std::string>(), r.at("from").get<std::string>(),
                            r.at("to").get<std::string>(), r.at("level").get<std::string>());
    }
    return g;
}

struct RandomShape {
    int max_events = 8;
    int max_objects = 12;
    int max_extra_relations = 12;
    bool pinned_entity = true;
};

/// A small valid chronology: dated events over random objects, a few entity
/// concepts (one possibly pinned), and random admissible relations.
inline timeflow::Chronology random_chronology(std::mt19937& rng, const RandomShape& shape = {}) {
    using namespace timeflow;
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const Date base = *Date::from_ymd(2010, 1, 1);

    std::vector<InformationObject> objects;
    int n_objects = pick(1, shape.max_objects);
    for (int i = 0; i < n_objects; ++i) {
        InformationObject o;
        o.id = "obj-" + std::to_string(i);
        o.title = "Object " + std::to_string(i);
        o.body = "Body of object " + std::to_string(i) + ".";
        if (pick(0, 4) > 0) {
            o.created = base.plus_days(pick(0, 3000));
        }
        objects.push_back(std::move(o));
    }

    std::vector<Concept> concepts;
    int n_events = pick(1, shape.max_events);
    for (int i = 0; i < n_events; ++i) {
        Event e;
        e.title = "Event number " + std::to_string(i);
        Date start = base.plus_days(pick(0, 3000));
        e.anchor = DateInterval{start, start.plus_days(pick(0, 20))};
        std::set<std::string> members;
        int k = pick(1, std::min(5, n_objects));
        while (static_cast<int>(members.size()) < k) {
            members.insert("obj-" + std::to_string(pick(0, n_objects - 1)));
        }
        e.constitutive_objects.assign(members.begin(), members.end());
        concepts.push_back({"ev-" + std::to_string(i), Provenance::asserted, std::move(e)});
    }
    int n_entities = pick(0, 3);
    for (int i = 0; i < n_entities; ++i) {
        Entity en;
        en.name = "Entity " + std::to_string(i);
        en.pinned = shape.pinned_entity && i == 0;
        concepts.push_back({"entity:e" + std::to_string(i), Provenance::derived, std::move(en)});
    }

    std::vector<Endpoint> endpoints;
    for (const auto& o : objects) {
        endpoints.push_back({o.id, EndpointKind::object});
    }
    for (const auto& c : concepts) {
        endpoints.push_back({c.id, EndpointKind::concept_node});
    }
    std::vector<Relation> relations;
    int extra = pick(0, shape.max_extra_relations);
    for (int attempts = 0; static_cast<int>(relations.size()) < extra && attempts < 200; ++attempts) {
        auto type = kAllRelationTypes[static_cast<std::size_t>(pick(0, 6))];  // ConsistsOf comes from events
        const auto& a = endpoints[static_cast<std::size_t>(pick(0, static_cast<int>(endpoints.size()) - 1))];
        const auto& b = endpoints[static_cast<std::size_t>(pick(0, static_cast<int>(endpoints.size()) - 1))];
        if (a.id == b.id || !admissible(type, level_of(a.kind, b.kind))) {
            continue;
        }
        relations.push_back(make_relation(type, a, b));
    }
    return chronology::build(std::move(objects), std::move(concepts), dedupe_relations(std::move(relations)),
                             {"random", "2020-01-01"});
}

}  // namespace testing
