#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "timeflow/model.hpp"

namespace timeflow::layout {

enum class NodeClass { event, object, entity };

struct Node {
    std::string id;
    NodeClass node_class = NodeClass::event;
    double x = 0, y = 0, width = 0, height = 0;

    bool operator==(const Node&) const = default;
};

struct Point {
    double x = 0, y = 0;

    bool operator==(const Point&) const = default;
};

/// line: two points. arc: start, quadratic control point, end.
/// routed: polyline.
enum class EdgeShape { line, arc, routed };

struct Edge {
    std::string relation_id;
    EdgeShape shape = EdgeShape::line;
    std::vector<Point> points;
    Point label_anchor;  // where the glyph goes

    bool operator==(const Edge&) const = default;
};

/// "+N" marker under an event whose objects do not all fit.
struct Badge {
    std::string event_id;
    int hidden = 0;
    Point position;

    bool operator==(const Badge&) const = default;
};

struct Layout {
    double width = 0, height = 0;
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::vector<Badge> badges;
    std::vector<std::string> hidden_objects;

    const Node* find_node(std::string_view id) const;

    bool operator==(const Layout&) const = default;
};

enum class Spacing { uniform, proportional };

struct Options {
    Spacing spacing = Spacing::uniform;
    int visible_objects = 3;  // per event; the rest go into the badge
    double days_per_column = 365;  // proportional spacing scale
    double margin = 40;
    double event_width = 170, event_height = 56;
    double object_width = 150, object_height = 36;
    double entity_width = 150, entity_height = 32;
    double column_gap = 40;
    double row_gap = 12;
    double arc_room = 130;   // space above the event lane for arcs
    double band_gap = 70;    // between event lane and object band
    double route_gap = 14;   // spacing of TT routes below the object band
};

/// Banded TimeFlow geometry. Events sit left to right by ordinal; each object
/// is placed once, under the earliest event it constitutes, sorted by
/// (created, id) with undated objects last; objects of no event trail in
/// extra columns. Pinned entities form a band above the arcs. Relations whose
/// endpoints are not drawn (hidden objects, unpinned concepts) get no edge.
/// Throws Error when event ordinals are not 1..n.
Layout compute_layout(const Chronology& view, const Options& options = {});

std::string_view to_string(NodeClass c);
std::string_view to_string(EdgeShape s);

void to_json(nlohmann::json& j, const Layout& l);
void from_json(const nlohmann::json& j, Layout& l);

}  // namespace timeflow::layout
