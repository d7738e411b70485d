#include "timeflow/layout.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace timeflow::layout {

const Node* Layout::find_node(std::string_view id) const {
    for (const auto& n : nodes) {
        if (n.id == id) {
            return &n;
        }
    }
    return nullptr;
}

namespace {

Point top_center(const Node& n) { return {n.x + n.width / 2, n.y}; }
Point bottom_center(const Node& n) { return {n.x + n.width / 2, n.y + n.height}; }

bool created_before(const InformationObject* a, const InformationObject* b) {
    // Undated objects sort after dated ones.
    if (a->created.has_value() != b->created.has_value()) {
        return a->created.has_value();
    }
    if (a->created && *a->created != *b->created) {
        return *a->created < *b->created;
    }
    return a->id < b->id;
}

int type_index(RelationType t) {
    auto it = std::find(kAllRelationTypes.begin(), kAllRelationTypes.end(), t);
    return static_cast<int>(it - kAllRelationTypes.begin());
}

Edge straight(const std::string& id, const Node& a, const Node& b) {
    Point p, q;
    if (a.y + a.height <= b.y) {
        p = bottom_center(a);
        q = top_center(b);
    } else if (b.y + b.height <= a.y) {
        p = top_center(a);
        q = bottom_center(b);
    } else if (a.x <= b.x) {
        p = {a.x + a.width, a.y + a.height / 2};
        q = {b.x, b.y + b.height / 2};
    } else {
        p = {a.x, a.y + a.height / 2};
        q = {b.x + b.width, b.y + b.height / 2};
    }
    return {id, EdgeShape::line, {p, q}, {(p.x + q.x) / 2, (p.y + q.y) / 2}};
}

}  // namespace

Layout compute_layout(const Chronology& view, const Options& opt) {
    Layout out;
    auto events = view.events();
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (events[i]->event()->ordinal != static_cast<int>(i + 1)) {
            throw Error("event '" + events[i]->id + "' is not numbered; renumber before layout");
        }
    }

    const double column_width = std::max(opt.event_width, opt.object_width);
    const double pitch = column_width + opt.column_gap;

    std::set<std::string> pinned;
    for (const auto& c : view.concepts) {
        if (const auto* e = std::get_if<Entity>(&c.value); e && e->pinned) {
            pinned.insert(c.id);
        }
    }
    const double event_y = opt.margin + (pinned.empty() ? 0 : opt.entity_height) + opt.arc_room;
    const double band_y = event_y + opt.event_height + opt.band_gap;

    // Columns.
    std::vector<double> column_x;
    for (std::size_t i = 0; i < events.size(); ++i) {
        double x = opt.margin + static_cast<double>(i) * pitch;
        if (opt.spacing == Spacing::proportional && i > 0) {
            const auto& first = events.front()->event()->anchor;
            const auto& here = events[i]->event()->anchor;
            if (first && here) {
                double days = static_cast<double>(here->start - first->start);
                x = std::max(opt.margin + days / opt.days_per_column * pitch, column_x.back() + pitch);
            } else {
                x = column_x.back() + pitch;
            }
        }
        column_x.push_back(x);
    }

    std::map<std::string, const InformationObject*> objects;
    for (const auto& o : view.objects) {
        objects[o.id] = &o;
    }

    // Each object goes under the earliest event it constitutes.
    std::set<std::string> placed;
    double band_bottom = band_y;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const Concept& k = *events[i];
        out.nodes.push_back({k.id, NodeClass::event, column_x[i] + (column_width - opt.event_width) / 2, event_y,
                             opt.event_width, opt.event_height});
        std::vector<const InformationObject*> anchored;
        for (const auto& oid : k.event()->constitutive_objects) {
            auto it = objects.find(oid);
            if (it != objects.end() && placed.insert(oid).second) {
                anchored.push_back(it->second);
            }
        }
        std::sort(anchored.begin(), anchored.end(), created_before);
        const auto visible = static_cast<std::size_t>(std::max(opt.visible_objects, 0));
        double y = band_y;
        for (std::size_t r = 0; r < anchored.size(); ++r) {
            if (r >= visible) {
                out.hidden_objects.push_back(anchored[r]->id);
                continue;
            }
            out.nodes.push_back({anchored[r]->id, NodeClass::object,
                                 column_x[i] + (column_width - opt.object_width) / 2, y, opt.object_width,
                                 opt.object_height});
            y += opt.object_height + opt.row_gap;
        }
        band_bottom = std::max(band_bottom, y);
        if (anchored.size() > visible) {
            int hidden = static_cast<int>(anchored.size() - visible);
            out.badges.push_back({k.id, hidden, {column_x[i] + column_width / 2, y + 12}});
            band_bottom = std::max(band_bottom, y + 24);
        }
    }

    // Objects of no event trail in extra columns.
    std::vector<const InformationObject*> orphans;
    for (const auto& [id, o] : objects) {
        if (!placed.count(id)) {
            orphans.push_back(o);
        }
    }
    std::sort(orphans.begin(), orphans.end(), created_before);
    const std::size_t rows = static_cast<std::size_t>(std::max(opt.visible_objects, 1));
    const double orphan_x0 = column_x.empty() ? opt.margin : column_x.back() + pitch;
    for (std::size_t i = 0; i < orphans.size(); ++i) {
        double x = orphan_x0 + static_cast<double>(i / rows) * pitch + (column_width - opt.object_width) / 2;
        double y = band_y + static_cast<double>(i % rows) * (opt.object_height + opt.row_gap);
        out.nodes.push_back({orphans[i]->id, NodeClass::object, x, y, opt.object_width, opt.object_height});
        band_bottom = std::max(band_bottom, y + opt.object_height + opt.row_gap);
    }

    // Pinned entities above the arcs, near the items they are linked to.
    std::map<std::string, Node> drawn;
    for (const auto& n : out.nodes) {
        drawn[n.id] = n;
    }
    std::vector<std::pair<double, std::string>> wanted;
    for (const auto& id : pinned) {
        double sum = 0;
        int count = 0;
        for (const auto& r : view.relations) {
            const std::string* other = r.from.id == id ? &r.to.id : r.to.id == id ? &r.from.id : nullptr;
            if (other) {
                if (auto it = drawn.find(*other); it != drawn.end()) {
                    sum += it->second.x + it->second.width / 2;
                    ++count;
                }
            }
        }
        double center = count ? sum / count : opt.margin + opt.entity_width / 2;
        wanted.emplace_back(center - opt.entity_width / 2, id);
    }
    std::sort(wanted.begin(), wanted.end());
    double next_free = opt.margin;
    for (const auto& [x, id] : wanted) {
        double placed_x = std::max(x, next_free);
        out.nodes.push_back({id, NodeClass::entity, placed_x, opt.margin, opt.entity_width, opt.entity_height});
        drawn[id] = out.nodes.back();
        next_free = placed_x + opt.entity_width + opt.column_gap / 2;
    }

    // Edges.
    const double route_base = band_bottom + opt.route_gap;
    int routes = 0;
    for (const auto& r : view.relations) {
        auto fa = drawn.find(r.from.id);
        auto fb = drawn.find(r.to.id);
        if (fa == drawn.end() || fb == drawn.end()) {
            continue;
        }
        const Node& a = fa->second;
        const Node& b = fb->second;
        if (a.node_class == NodeClass::event && b.node_class == NodeClass::event && is_group_a(r.type)) {
            Point p = top_center(a), q = top_center(b);
            double rise = std::min(opt.arc_room - 10,
                                   24 + 0.12 * std::abs(q.x - p.x) + 10 * type_index(r.type));
            Point c{(p.x + q.x) / 2, event_y - 2 * rise};
            Point label{0.25 * p.x + 0.5 * c.x + 0.25 * q.x, 0.25 * p.y + 0.5 * c.y + 0.25 * q.y};
            out.edges.push_back({r.id, EdgeShape::arc, {p, c, q}, label});
        } else if (a.node_class == NodeClass::object && b.node_class == NodeClass::object) {
            double y = route_base + opt.route_gap * routes++;
            Point p = bottom_center(a), q = bottom_center(b);
            p.x -= 6;
            q.x += 6;
            out.edges.push_back({r.id, EdgeShape::routed, {p, {p.x, y}, {q.x, y}, q}, {(p.x + q.x) / 2, y}});
        } else {
            out.edges.push_back(straight(r.id, a, b));
        }
    }

    double right = opt.margin, bottom = std::max(route_base + opt.route_gap * routes, band_bottom);
    for (const auto& n : out.nodes) {
        right = std::max(right, n.x + n.width);
        bottom = std::max(bottom, n.y + n.height);
    }
    out.width = right + opt.margin;
    out.height = bottom + opt.margin;
    return out;
}

std::string_view to_string(NodeClass c) {
    switch (c) {
    case NodeClass::event: return "event";
    case NodeClass::object: return "object";
    case NodeClass::entity: return "entity";
    }
    return "event";
}

std::string_view to_string(EdgeShape s) {
    switch (s) {
    case EdgeShape::line: return "line";
    case EdgeShape::arc: return "arc";
    case EdgeShape::routed: return "routed";
    }
    return "line";
}

namespace {

nlohmann::json point_json(const Point& p) { return nlohmann::json::array({p.x, p.y}); }
Point point_from(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

}  // namespace

void to_json(nlohmann::json& j, const Layout& l) {
    auto nodes = nlohmann::json::array();
    for (const auto& n : l.nodes) {
        nodes.push_back({{"id", n.id}, {"class", to_string(n.node_class)}, {"x", n.x}, {"y", n.y},
                         {"width", n.width}, {"height", n.height}});
    }
    auto edges = nlohmann::json::array();
    for (const auto& e : l.edges) {
        auto pts = nlohmann::json::array();
        for (const auto& p : e.points) {
            pts.push_back(point_json(p));
        }
        edges.push_back({{"relation", e.relation_id}, {"shape", to_string(e.shape)}, {"points", pts},
                         {"label", point_json(e.label_anchor)}});
    }
    auto badges = nlohmann::json::array();
    for (const auto& b : l.badges) {
        badges.push_back({{"event", b.event_id}, {"hidden", b.hidden}, {"text", "+" + std::to_string(b.hidden)},
                          {"position", point_json(b.position)}});
    }
    j = {{"width", l.width}, {"height", l.height}, {"nodes", nodes}, {"edges", edges}, {"badges", badges},
         {"hidden_objects", l.hidden_objects}};
}

void from_json(const nlohmann::json& j, Layout& l) {
    l = Layout{};
    l.width = j.at("width").get<double>();
    l.height = j.at("height").get<double>();
    for (const auto& n : j.at("nodes")) {
        auto cls = n.at("class").get<std::string>();
        NodeClass c = cls == "object" ? NodeClass::object : cls == "entity" ? NodeClass::entity : NodeClass::event;
        l.nodes.push_back({n.at("id").get<std::string>(), c, n.at("x").get<double>(), n.at("y").get<double>(),
                           n.at("width").get<double>(), n.at("height").get<double>()});
    }
    for (const auto& e : j.at("edges")) {
        Edge edge;
        edge.relation_id = e.at("relation").get<std::string>();
        auto shape = e.at("shape").get<std::string>();
        edge.shape = shape == "arc" ? EdgeShape::arc : shape == "routed" ? EdgeShape::routed : EdgeShape::line;
        for (const auto& p : e.at("points")) {
            edge.points.push_back(point_from(p));
        }
        edge.label_anchor = point_from(e.at("label"));
        l.edges.push_back(std::move(edge));
    }
    for (const auto& b : j.at("badges")) {
        l.badges.push_back({b.at("event").get<std::string>(), b.at("hidden").get<int>(), point_from(b.at("position"))});
    }
    l.hidden_objects = j.value("hidden_objects", std::vector<std::string>{});
}

}  // namespace timeflow::layout
