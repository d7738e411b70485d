#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "timeflow/layout.hpp"
#include "timeflow/model.hpp"

namespace timeflow::render {

enum class StrokePattern { solid, short_dotted, wide_dotted };
enum class Arrowhead { none, filled, open };

struct RelationStyle {
    std::string color;
    std::string glyph;  // symbol id without prefix; empty for no glyph
    StrokePattern pattern = StrokePattern::solid;
    Arrowhead arrowhead = Arrowhead::none;

    bool operator==(const RelationStyle&) const = default;
};

struct NodeStyle {
    std::string fill;
    std::string stroke;
    double corner_radius = 0;

    bool operator==(const NodeStyle&) const = default;
};

struct StyleTable {
    std::map<RelationType, RelationStyle> relations;
    NodeStyle event;
    NodeStyle object;
    NodeStyle entity;

    /// Colored Group A types with glyphs; black Succession (solid),
    /// References To (short dots) and Consists Of (wide dots); white rounded
    /// events, grey sharp objects.
    static StyleTable defaults();

    std::vector<Violation> validate() const;

    bool operator==(const StyleTable&) const = default;
};

/// stroke-dasharray value for a pattern; empty for solid.
std::string_view dasharray(StrokePattern pattern);
std::string_view to_string(StrokePattern pattern);
std::string_view to_string(Arrowhead arrowhead);

/// Overrides on top of the defaults, as in a style config file.
StyleTable parse_style_table(const nlohmann::json& j);
nlohmann::json to_json(const StyleTable& style);

/// Element id for a domain id: "n-" for nodes, "r-" for relations, with
/// characters outside [A-Za-z0-9_-] written as ".XX" hex escapes.
std::string element_id(std::string_view prefix, std::string_view domain_id);

/// Renders one SVG document. Throws Error when a drawn relation's type has no
/// style entry.
std::string render_svg(const layout::Layout& layout, const Chronology& view,
                       const StyleTable& style = StyleTable::defaults());

struct View {
    Chronology chronology;
    layout::Layout layout;
    StyleTable style;

    bool operator==(const View&) const = default;
};

nlohmann::json render_view_json(const layout::Layout& layout, const Chronology& view,
                                const StyleTable& style = StyleTable::defaults());
/// Ignores fields it does not know.
View parse_view_json(const nlohmann::json& j);

}  // namespace timeflow::render
