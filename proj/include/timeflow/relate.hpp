#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "timeflow/error.hpp"
#include "timeflow/model.hpp"

namespace timeflow::relate {

struct CausalCueLexicon {
    std::vector<std::string> cues{"because", "therefore", "as a result", "led to", "caused", "consequence of"};

    std::vector<Violation> validate() const;
};

struct RelateConfig {
    /// Levels at which each type is derived automatically. Types absent from
    /// the map are derived at every admissible level. Asserted relations and
    /// pinned-entity edges are not subject to this scope.
    std::map<RelationType, std::set<Level>> derive_levels;
    /// A reply/forward within this many days makes the succession-based
    /// causal edge accepted; a longer gap leaves it as a proposal.
    int causal_auto_accept_days = 7;
    CausalCueLexicon cues;
    /// Set to switch Subject derivation from shared lexicon labels to TF-IDF
    /// cosine with this threshold.
    std::optional<double> tfidf_threshold;

    bool derives(RelationType type, Level level) const;
};

RelateConfig parse_relate_config(const nlohmann::json& j);
nlohmann::json to_json(const RelateConfig& config);

/// A manually asserted relation, e.g. a Causal link the analyst knows of.
struct AssertedRelation {
    RelationType type = RelationType::Causal;
    std::string from;
    std::string to;
    std::string note;
};

std::vector<AssertedRelation> parse_assertions(const nlohmann::json& j);
nlohmann::json to_json(const std::vector<AssertedRelation>& assertions);

struct TemporalFact {
    DateInterval interval;
    Evidence evidence;
};

struct KeyedEvidence {
    std::string key;  // entity or subject concept id
    Evidence evidence;
};

/// What relate knows about one object or event. Events inherit temporal
/// expressions and correspondents from their constitutive objects; their
/// entities and subjects come from their own text only.
struct Item {
    Endpoint endpoint;
    std::vector<std::string> objects;  // self for objects, constitutive objects for events
    std::string text;                  // host text
    std::vector<TemporalFact> temporal;
    std::vector<KeyedEvidence> entities;
    std::vector<KeyedEvidence> subjects;
    std::set<std::string> correspondents;  // lowercased names

    bool is_event() const { return endpoint.kind == EndpointKind::concept_node; }
};

/// Items for every object and event, in (objects by id, events by id) order.
std::vector<Item> collect_items(const std::vector<InformationObject>& objects, const std::vector<Concept>& concepts);

struct Derivation {
    std::vector<Relation> relations;  // accepted
    std::vector<Relation> proposals;  // derived but awaiting confirmation
    std::vector<Diagnostic> diagnostics;
};

std::vector<Relation> derive_consists_of(const std::vector<Concept>& concepts);

/// One edge per direct reply/forward link, original -> follow-up.
std::vector<Relation> derive_succession(const std::vector<InformationObject>& objects,
                                        std::vector<Diagnostic>& diagnostics);

/// Resolved attachments and verbatim title mentions, referrer -> referenced.
/// A title mention is not counted when the referrer directly replies to or
/// forwards the referenced object.
std::vector<Relation> derive_references_to(const std::vector<InformationObject>& objects,
                                           std::vector<Diagnostic>& diagnostics);

std::vector<Relation> derive_temporal_semantic(const std::vector<Item>& items, const RelateConfig& config = {});

/// Pairwise edges between items sharing an unpinned entity, plus star edges
/// from every pinned entity concept to the items that mention it.
std::vector<Relation> derive_entity_relations(const std::vector<Item>& items, const std::vector<Concept>& concepts,
                                              const RelateConfig& config = {});

std::vector<Relation> derive_subject_relations(const std::vector<Item>& items, const RelateConfig& config = {});

/// Items sharing a correspondent whose objects sit in the same reply/forward
/// thread (two distinct objects).
std::vector<Relation> derive_correspondence(const std::vector<Item>& items,
                                            const std::vector<InformationObject>& objects,
                                            const RelateConfig& config = {});

/// Asserted edges, the reply/forward succession heuristic between events,
/// and cue-phrase sentences naming two events.
Derivation derive_causal(const std::vector<Item>& items, const std::vector<InformationObject>& objects,
                         const std::vector<Concept>& concepts, const std::vector<AssertedRelation>& assertions,
                         const RelateConfig& config = {});

/// Drops inadmissible (type, level) pairs with a diagnostic, merges
/// duplicates and orders the result by (type, from, to).
std::vector<Relation> finalize(std::vector<Relation> relations, std::vector<Diagnostic>& diagnostics);

/// Runs every derivation and finalizes the result.
Derivation derive_all(const std::vector<InformationObject>& objects, const std::vector<Concept>& concepts,
                      const std::vector<AssertedRelation>& assertions, const RelateConfig& config = {});

}  // namespace timeflow::relate
