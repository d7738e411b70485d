#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "timeflow/date.hpp"
#include "timeflow/error.hpp"

namespace timeflow {

inline constexpr std::string_view kSchemaVersion = "timeflow/1";

enum class ObjectKind { email, document, news, report, legal, other };

/// Reply/forward target. When `external` is set, `target` holds the raw
/// Message-ID of a message outside the corpus.
struct ObjectLink {
    std::string target;
    bool external = false;

    bool operator==(const ObjectLink&) const = default;
};

struct Attachment {
    std::string name;
    std::optional<std::string> object_id;  // set once resolved against the corpus

    bool operator==(const Attachment&) const = default;
};

struct InformationObject {
    std::string id;
    ObjectKind kind = ObjectKind::document;
    std::string title;
    std::string body;
    std::optional<Date> created;
    std::optional<std::string> sender;
    std::vector<std::string> recipients;
    std::optional<ObjectLink> in_reply_to;
    std::optional<ObjectLink> forwarded_from;
    std::vector<Attachment> attachments;
    std::string source_path;
    std::string content_hash;
    std::optional<std::string> message_id;
    std::vector<std::string> references;  // References header, oldest first

    bool operator==(const InformationObject&) const = default;
};

enum class Provenance { derived, asserted };

/// A byte span [begin, end) of a holder's host text.
struct Evidence {
    std::string holder;
    std::size_t begin = 0;
    std::size_t end = 0;
    std::string text;

    friend auto operator<=>(const Evidence&, const Evidence&) = default;
};

struct Event {
    std::string title;
    std::string description;
    std::optional<DateInterval> anchor;
    int ordinal = 0;
    std::vector<std::string> constitutive_objects;
    std::vector<std::string> annotations;  // ids of concepts annotating this event

    bool operator==(const Event&) const = default;
};

enum class EntityKind { person, organization, place };

struct Entity {
    std::string name;
    EntityKind kind = EntityKind::organization;
    std::vector<std::string> aliases;
    std::vector<Evidence> mentions;
    bool pinned = false;  // singled out as a node of its own in the TimeFlow

    bool operator==(const Entity&) const = default;
};

struct Subject {
    std::string label;
    std::vector<std::string> terms;
    std::vector<Evidence> mentions;

    bool operator==(const Subject&) const = default;
};

struct TemporalExpression {
    std::string surface;
    DateInterval normalized;
    Evidence source;

    bool operator==(const TemporalExpression&) const = default;
};

struct Concept {
    std::string id;
    Provenance provenance = Provenance::derived;
    std::variant<Event, Entity, Subject, TemporalExpression> value;

    bool is_event() const { return std::holds_alternative<Event>(value); }
    const Event* event() const { return std::get_if<Event>(&value); }
    Event* event() { return std::get_if<Event>(&value); }

    bool operator==(const Concept&) const = default;
};

enum class RelationType {
    TemporalSemantic,
    Subject,
    Entity,
    Causal,
    Correspondence,
    Succession,
    ReferencesTo,
    ConsistsOf,
};

inline constexpr std::array<RelationType, 8> kAllRelationTypes = {
    RelationType::TemporalSemantic, RelationType::Subject,    RelationType::Entity,
    RelationType::Causal,           RelationType::Correspondence, RelationType::Succession,
    RelationType::ReferencesTo,     RelationType::ConsistsOf,
};

enum class Level { TT, TE, EE };

inline constexpr std::array<Level, 3> kAllLevels = {Level::TT, Level::TE, Level::EE};

enum class EndpointKind { object, concept_node };

struct Endpoint {
    std::string id;
    EndpointKind kind = EndpointKind::object;

    friend auto operator<=>(const Endpoint&, const Endpoint&) = default;
};

Level level_of(EndpointKind a, EndpointKind b);

struct Relation {
    std::string id;
    RelationType type = RelationType::Subject;
    Endpoint from;
    Endpoint to;
    bool directed = false;
    std::vector<Evidence> evidence;
    std::optional<double> weight;
    Provenance provenance = Provenance::derived;
    std::string note;

    Level level() const { return level_of(from.kind, to.kind); }

    bool operator==(const Relation&) const = default;
};

/// True when (type, level) is one of the admissible cells: Group A types at
/// every level, Succession and ReferencesTo at TT, ConsistsOf at TE.
bool admissible(RelationType type, Level level);

/// Diagnostic text for an inadmissible pair, e.g. "Succession admissible
/// only at TT (Group B relation), found EE".
std::string admissibility_message(RelationType type, Level level);

/// Causal, Succession, ReferencesTo and ConsistsOf carry direction.
bool inherently_directed(RelationType type);

/// The five Group A types; drawn with color and glyph.
bool is_group_a(RelationType type);

/// Canonical relation id from type and endpoints; undirected endpoints are
/// order-normalized so both orientations yield the same id.
std::string relation_id(RelationType type, const Endpoint& from, const Endpoint& to);

/// Builds a relation with canonical id, inherent direction and normalized
/// endpoint order for undirected types.
Relation make_relation(RelationType type, Endpoint from, Endpoint to,
                       std::vector<Evidence> evidence = {},
                       Provenance provenance = Provenance::derived);

/// Merges relations sharing an id: evidence is unioned, the larger weight
/// wins, asserted provenance dominates. Output ordered by (type, from, to).
std::vector<Relation> dedupe_relations(std::vector<Relation> relations);

struct ChronologyMeta {
    std::string name;
    std::string created;
    std::string schema_version{kSchemaVersion};

    bool operator==(const ChronologyMeta&) const = default;
};

struct Chronology {
    std::vector<InformationObject> objects;
    std::vector<Concept> concepts;
    std::vector<Relation> relations;
    ChronologyMeta meta;

    const InformationObject* find_object(std::string_view id) const;
    const Concept* find_concept(std::string_view id) const;
    const Event* find_event(std::string_view id) const;

    /// Events in ordinal order (ties by id).
    std::vector<const Concept*> events() const;

    bool operator==(const Chronology&) const = default;
};

/// Text that evidence spans held by an event index into.
std::string event_text(const Event& event);

/// Host text of an object or event; nullopt for other concepts or unknown ids.
std::optional<std::string> host_text(const Chronology& chronology, std::string_view id);

struct Perspective {
    std::string name;
    std::set<RelationType> included_rel_types{kAllRelationTypes.begin(), kAllRelationTypes.end()};
    std::optional<std::vector<std::string>> entity_filter;
    std::optional<DateInterval> time_window;
    std::optional<std::set<Level>> level_filter;
    std::vector<std::vector<std::string>> merge_groups;

    bool operator==(const Perspective&) const = default;
};

struct ValidateOptions {
    /// Require every event->object constitution to be mirrored by a ConsistsOf
    /// relation. Views that filter ConsistsOf out switch this off.
    bool require_consists_of_mirror = true;
};

std::vector<Violation> validate(const Chronology& chronology, ValidateOptions options = {});

/// Assigns ordinals 1..n by ascending anchor start; ties by event id.
/// Throws Error naming the first event without an anchor.
Chronology renumber_events(Chronology chronology);

/// Collapses the given events into one composite event. Throws NotFoundError
/// for unknown ids.
Chronology merge_events(Chronology chronology, std::span<const std::string> event_ids);

/// Id of the composite produced by merging `event_ids`.
std::string composite_event_id(std::span<const std::string> event_ids);

std::vector<Violation> validate_perspective(const Chronology& chronology, const Perspective& perspective);

/// Throws ValidationError when the perspective references unknown ids or has
/// overlapping merge groups.
Chronology apply_perspective(Chronology chronology, const Perspective& perspective);

// Names used in the interchange format and diagnostics.
std::string_view to_string(ObjectKind kind);
std::string_view to_string(RelationType type);
std::string_view to_string(Level level);
std::string_view to_string(EntityKind kind);
std::string_view to_string(Provenance provenance);
std::optional<ObjectKind> parse_object_kind(std::string_view s);
std::optional<RelationType> parse_relation_type(std::string_view s);
std::optional<Level> parse_level(std::string_view s);
std::optional<EntityKind> parse_entity_kind(std::string_view s);
std::optional<Provenance> parse_provenance(std::string_view s);

}  // namespace timeflow
