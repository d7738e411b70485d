#include "timeflow/interchange.hpp"

namespace timeflow {

namespace {

template <typename T>
std::optional<T> opt(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
        return std::nullopt;
    }
    return it->get<T>();
}

template <typename T>
T value_or(const json& j, const char* key, T fallback) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
        return fallback;
    }
    return it->get<T>();
}

template <typename T, typename Parse>
T enum_field(const json& j, const char* key, Parse parse) {
    auto s = j.at(key).get<std::string>();
    auto v = parse(s);
    if (!v) {
        throw ParseError(std::string("unknown ") + key + " '" + s + "'");
    }
    return *v;
}

json link_json(const std::optional<ObjectLink>& link) {
    if (!link) {
        return nullptr;
    }
    return link->external ? json{{"external", link->target}} : json{{"id", link->target}};
}

std::optional<ObjectLink> link_from(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
        return std::nullopt;
    }
    if (it->is_string()) {
        return ObjectLink{it->get<std::string>(), false};
    }
    if (it->contains("external")) {
        return ObjectLink{it->at("external").get<std::string>(), true};
    }
    return ObjectLink{it->at("id").get<std::string>(), false};
}

json endpoint_json(const Endpoint& e) {
    return {{"id", e.id}, {"kind", e.kind == EndpointKind::object ? "object" : "concept"}};
}

Endpoint endpoint_from(const json& j) {
    Endpoint e;
    e.id = j.at("id").get<std::string>();
    auto kind = j.at("kind").get<std::string>();
    if (kind == "object") {
        e.kind = EndpointKind::object;
    } else if (kind == "concept") {
        e.kind = EndpointKind::concept_node;
    } else {
        throw ParseError("unknown endpoint kind '" + kind + "'");
    }
    return e;
}

}  // namespace

void to_json(json& j, const Date& d) { j = d.iso(); }

void from_json(const json& j, Date& d) {
    auto s = j.get<std::string>();
    auto parsed = Date::parse_iso(s);
    if (!parsed) {
        throw ParseError("invalid date '" + s + "'");
    }
    d = *parsed;
}

void to_json(json& j, const DateInterval& d) { j = {{"start", d.start}, {"end", d.end}}; }

void from_json(const json& j, DateInterval& d) {
    d.start = j.at("start").get<Date>();
    d.end = j.at("end").get<Date>();
}

void to_json(json& j, const Evidence& e) {
    j = {{"holder", e.holder}, {"begin", e.begin}, {"end", e.end}, {"text", e.text}};
}

void from_json(const json& j, Evidence& e) {
    e.holder = j.at("holder").get<std::string>();
    e.begin = j.at("begin").get<std::size_t>();
    e.end = j.at("end").get<std::size_t>();
    e.text = j.at("text").get<std::string>();
}

void to_json(json& j, const InformationObject& o) {
    json attachments = json::array();
    for (const auto& a : o.attachments) {
        attachments.push_back({{"name", a.name}, {"object", a.object_id ? json(*a.object_id) : json(nullptr)}});
    }
    j = {
        {"id", o.id},
        {"kind", to_string(o.kind)},
        {"title", o.title},
        {"body", o.body},
        {"created", o.created ? json(*o.created) : json(nullptr)},
        {"sender", o.sender ? json(*o.sender) : json(nullptr)},
        {"recipients", o.recipients},
        {"in_reply_to", link_json(o.in_reply_to)},
        {"forwarded_from", link_json(o.forwarded_from)},
        {"attachments", std::move(attachments)},
        {"source_path", o.source_path},
        {"content_hash", o.content_hash},
        {"message_id", o.message_id ? json(*o.message_id) : json(nullptr)},
        {"references", o.references},
    };
}

void from_json(const json& j, InformationObject& o) {
    o.id = j.at("id").get<std::string>();
    o.kind = enum_field<ObjectKind>(j, "kind", parse_object_kind);
    o.title = value_or<std::string>(j, "title", "");
    o.body = value_or<std::string>(j, "body", "");
    o.created = opt<Date>(j, "created");
    o.sender = opt<std::string>(j, "sender");
    o.recipients = value_or<std::vector<std::string>>(j, "recipients", {});
    o.in_reply_to = link_from(j, "in_reply_to");
    o.forwarded_from = link_from(j, "forwarded_from");
    o.attachments.clear();
    if (auto it = j.find("attachments"); it != j.end() && it->is_array()) {
        for (const auto& a : *it) {
            o.attachments.push_back({a.at("name").get<std::string>(), opt<std::string>(a, "object")});
        }
    }
    o.source_path = value_or<std::string>(j, "source_path", "");
    o.content_hash = value_or<std::string>(j, "content_hash", "");
    o.message_id = opt<std::string>(j, "message_id");
    o.references = value_or<std::vector<std::string>>(j, "references", {});
}

void to_json(json& j, const Concept& c) {
    j = {{"id", c.id}, {"provenance", to_string(c.provenance)}};
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Event>) {
                j["type"] = "event";
                j["title"] = v.title;
                j["description"] = v.description;
                j["anchor"] = v.anchor ? json(*v.anchor) : json(nullptr);
                j["ordinal"] = v.ordinal;
                j["constitutive_objects"] = v.constitutive_objects;
                j["annotations"] = v.annotations;
            } else if constexpr (std::is_same_v<T, Entity>) {
                j["type"] = "entity";
                j["name"] = v.name;
                j["entity_kind"] = to_string(v.kind);
                j["aliases"] = v.aliases;
                j["mentions"] = v.mentions;
                j["pinned"] = v.pinned;
            } else if constexpr (std::is_same_v<T, Subject>) {
                j["type"] = "subject";
                j["label"] = v.label;
                j["terms"] = v.terms;
                j["mentions"] = v.mentions;
            } else {
                j["type"] = "temporal_expression";
                j["surface"] = v.surface;
                j["normalized"] = v.normalized;
                j["source"] = v.source;
            }
        },
        c.value);
}

void from_json(const json& j, Concept& c) {
    c.id = j.at("id").get<std::string>();
    c.provenance = j.contains("provenance") ? enum_field<Provenance>(j, "provenance", parse_provenance)
                                            : Provenance::derived;
    auto type = j.at("type").get<std::string>();
    if (type == "event") {
        Event e;
        e.title = value_or<std::string>(j, "title", "");
        e.description = value_or<std::string>(j, "description", "");
        e.anchor = opt<DateInterval>(j, "anchor");
        e.ordinal = value_or<int>(j, "ordinal", 0);
        e.constitutive_objects = value_or<std::vector<std::string>>(j, "constitutive_objects", {});
        e.annotations = value_or<std::vector<std::string>>(j, "annotations", {});
        c.value = std::move(e);
    } else if (type == "entity") {
        Entity e;
        e.name = j.at("name").get<std::string>();
        e.kind = enum_field<EntityKind>(j, "entity_kind", parse_entity_kind);
        e.aliases = value_or<std::vector<std::string>>(j, "aliases", {});
        e.mentions = value_or<std::vector<Evidence>>(j, "mentions", {});
        e.pinned = value_or<bool>(j, "pinned", false);
        c.value = std::move(e);
    } else if (type == "subject") {
        Subject s;
        s.label = j.at("label").get<std::string>();
        s.terms = value_or<std::vector<std::string>>(j, "terms", {});
        s.mentions = value_or<std::vector<Evidence>>(j, "mentions", {});
        c.value = std::move(s);
    } else if (type == "temporal_expression") {
        TemporalExpression t;
        t.surface = j.at("surface").get<std::string>();
        t.normalized = j.at("normalized").get<DateInterval>();
        t.source = j.at("source").get<Evidence>();
        c.value = std::move(t);
    } else {
        throw ParseError("unknown concept type '" + type + "'");
    }
}

void to_json(json& j, RelationType t) { j = to_string(t); }

void from_json(const json& j, RelationType& t) {
    auto s = j.get<std::string>();
    auto v = parse_relation_type(s);
    if (!v) {
        throw ParseError("unknown relation type '" + s + "'");
    }
    t = *v;
}

void to_json(json& j, Level l) { j = to_string(l); }

void from_json(const json& j, Level& l) {
    auto s = j.get<std::string>();
    auto v = parse_level(s);
    if (!v) {
        throw ParseError("unknown level '" + s + "'");
    }
    l = *v;
}

void to_json(json& j, const Relation& r) {
    j = {
        {"id", r.id},
        {"type", r.type},
        {"from", endpoint_json(r.from)},
        {"to", endpoint_json(r.to)},
        {"level", r.level()},
        {"directed", r.directed},
        {"evidence", r.evidence},
        {"weight", r.weight ? json(*r.weight) : json(nullptr)},
        {"provenance", to_string(r.provenance)},
    };
    if (!r.note.empty()) {
        j["note"] = r.note;
    }
}

void from_json(const json& j, Relation& r) {
    r.type = j.at("type").get<RelationType>();
    r.from = endpoint_from(j.at("from"));
    r.to = endpoint_from(j.at("to"));
    r.id = value_or<std::string>(j, "id", relation_id(r.type, r.from, r.to));
    r.directed = value_or<bool>(j, "directed", inherently_directed(r.type));
    r.evidence = value_or<std::vector<Evidence>>(j, "evidence", {});
    r.weight = opt<double>(j, "weight");
    r.provenance = j.contains("provenance") ? enum_field<Provenance>(j, "provenance", parse_provenance)
                                            : Provenance::derived;
    r.note = value_or<std::string>(j, "note", "");
}

void to_json(json& j, const ChronologyMeta& m) {
    j = {{"name", m.name}, {"created", m.created}, {"schema_version", m.schema_version}};
}

void from_json(const json& j, ChronologyMeta& m) {
    m.name = value_or<std::string>(j, "name", "");
    m.created = value_or<std::string>(j, "created", "");
    m.schema_version = value_or<std::string>(j, "schema_version", std::string(kSchemaVersion));
}

void to_json(json& j, const Chronology& c) {
    j = {{"objects", c.objects}, {"concepts", c.concepts}, {"relations", c.relations}, {"meta", c.meta}};
}

void from_json(const json& j, Chronology& c) {
    c.objects = value_or<std::vector<InformationObject>>(j, "objects", {});
    c.concepts = value_or<std::vector<Concept>>(j, "concepts", {});
    c.relations = value_or<std::vector<Relation>>(j, "relations", {});
    c.meta = j.contains("meta") ? j.at("meta").get<ChronologyMeta>() : ChronologyMeta{};
}

void to_json(json& j, const Perspective& p) {
    j = {{"name", p.name}, {"included_rel_types", p.included_rel_types}, {"merge_groups", p.merge_groups}};
    j["entity_filter"] = p.entity_filter ? json(*p.entity_filter) : json(nullptr);
    j["time_window"] = p.time_window ? json(*p.time_window) : json(nullptr);
    j["level_filter"] = p.level_filter ? json(*p.level_filter) : json(nullptr);
}

void from_json(const json& j, Perspective& p) {
    p = Perspective{};
    p.name = value_or<std::string>(j, "name", "");
    if (auto it = j.find("included_rel_types"); it != j.end() && !it->is_null()) {
        p.included_rel_types = it->get<std::set<RelationType>>();
    }
    p.entity_filter = opt<std::vector<std::string>>(j, "entity_filter");
    p.time_window = opt<DateInterval>(j, "time_window");
    p.level_filter = opt<std::set<Level>>(j, "level_filter");
    p.merge_groups = value_or<std::vector<std::vector<std::string>>>(j, "merge_groups", {});
}

void to_json(json& j, const Violation& v) {
    j = {{"subject", v.subject}, {"rule", v.rule}, {"message", v.message}};
}

void from_json(const json& j, Violation& v) {
    v.subject = value_or<std::string>(j, "subject", "");
    v.rule = value_or<std::string>(j, "rule", "");
    v.message = value_or<std::string>(j, "message", "");
}

namespace {

std::string_view severity_name(Diagnostic::Severity s) {
    switch (s) {
    case Diagnostic::Severity::info: return "info";
    case Diagnostic::Severity::warning: return "warning";
    case Diagnostic::Severity::error: return "error";
    }
    return "warning";
}

}  // namespace

void to_json(json& j, const Diagnostic& d) {
    j = {{"severity", severity_name(d.severity)}, {"code", d.code}, {"subject", d.subject}, {"message", d.message}};
}

void from_json(const json& j, Diagnostic& d) {
    auto s = value_or<std::string>(j, "severity", "warning");
    d.severity = s == "info" ? Diagnostic::Severity::info
                 : s == "error" ? Diagnostic::Severity::error
                                : Diagnostic::Severity::warning;
    d.code = value_or<std::string>(j, "code", "");
    d.subject = value_or<std::string>(j, "subject", "");
    d.message = value_or<std::string>(j, "message", "");
}

Chronology parse_chronology(const json& j) {
    try {
        if (!j.is_object()) {
            throw ParseError("chronology document must be a JSON object");
        }
        Chronology c = j.get<Chronology>();
        if (c.meta.schema_version != kSchemaVersion) {
            throw ParseError("unsupported schema_version '" + c.meta.schema_version + "'");
        }
        return c;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed chronology: ") + e.what());
    }
}

Perspective parse_perspective(const json& j) {
    try {
        if (!j.is_object()) {
            throw ParseError("perspective must be a JSON object");
        }
        return j.get<Perspective>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed perspective: ") + e.what());
    }
}

}  // namespace timeflow
