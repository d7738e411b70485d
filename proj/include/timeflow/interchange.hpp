#pragma once

#include <json.hpp>

#include "timeflow/model.hpp"

namespace timeflow {

using json = nlohmann::json;

// Interchange-format (de)serialization. Dates are "YYYY-MM-DD", intervals
// {start, end}. Readers ignore unknown fields; relation levels are written for
// readers' convenience but always recomputed from endpoint kinds on load.

void to_json(json& j, const Date& d);
void from_json(const json& j, Date& d);
void to_json(json& j, const DateInterval& d);
void from_json(const json& j, DateInterval& d);
void to_json(json& j, const Evidence& e);
void from_json(const json& j, Evidence& e);
void to_json(json& j, const InformationObject& o);
void from_json(const json& j, InformationObject& o);
void to_json(json& j, const Concept& c);
void from_json(const json& j, Concept& c);
void to_json(json& j, const Relation& r);
void from_json(const json& j, Relation& r);
void to_json(json& j, const ChronologyMeta& m);
void from_json(const json& j, ChronologyMeta& m);
void to_json(json& j, const Chronology& c);
void from_json(const json& j, Chronology& c);
void to_json(json& j, const Perspective& p);
void from_json(const json& j, Perspective& p);
void to_json(json& j, const Violation& v);
void from_json(const json& j, Violation& v);
void to_json(json& j, const Diagnostic& d);
void from_json(const json& j, Diagnostic& d);

void to_json(json& j, RelationType t);
void from_json(const json& j, RelationType& t);
void to_json(json& j, Level l);
void from_json(const json& j, Level& l);

/// Parses and checks the schema_version; throws ParseError on malformed input.
Chronology parse_chronology(const json& j);
Perspective parse_perspective(const json& j);

}  // namespace timeflow
