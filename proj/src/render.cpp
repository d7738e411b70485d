#include "timeflow/render.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>
#include <sstream>

#include "timeflow/interchange.hpp"

namespace timeflow::render {

namespace {

struct Glyph {
    std::string_view id;
    std::string_view body;  // 16x16 artwork drawn in currentColor
};

constexpr Glyph kGlyphs[] = {
    {"clock",
     R"(<circle cx="8" cy="8" r="6.5" fill="#FFFFFF" stroke="currentColor" stroke-width="1.5"/>)"
     R"(<path d="M8 4V8L11 10" fill="none" stroke="currentColor" stroke-width="1.5"/>)"},
    {"book",
     R"(<path d="M1.5 3H6.5Q8 3 8 4.5V13.5Q8 12.5 6.5 12.5H1.5Z M14.5 3H9.5Q8 3 8 4.5V13.5Q8 12.5 9.5 12.5H14.5Z")"
     R"( fill="#FFFFFF" stroke="currentColor" stroke-width="1.3"/>)"},
    {"stick-figure",
     R"(<circle cx="8" cy="3.5" r="2.2" fill="none" stroke="currentColor" stroke-width="1.4"/>)"
     R"(<path d="M8 5.7V10.5M4 7.5H12M8 10.5L5 15M8 10.5L11 15" fill="none" stroke="currentColor" stroke-width="1.4"/>)"},
    {"cradle",
     R"(<path d="M1.5 2H14.5M4 2V10M6.7 2V11M9.3 2V11M12 2L14.5 9" fill="none" stroke="currentColor" stroke-width="1.1"/>)"
     R"(<circle cx="4" cy="11.5" r="1.6" fill="currentColor"/><circle cx="6.7" cy="12.5" r="1.6" fill="currentColor"/>)"
     R"(<circle cx="9.3" cy="12.5" r="1.6" fill="currentColor"/><circle cx="14.5" cy="10.5" r="1.6" fill="currentColor"/>)"},
    {"letter",
     R"(<rect x="1.5" y="3.5" width="13" height="9" fill="#FFFFFF" stroke="currentColor" stroke-width="1.3"/>)"
     R"(<path d="M1.5 3.5L8 9L14.5 3.5" fill="none" stroke="currentColor" stroke-width="1.3"/>)"},
};

bool known_glyph(std::string_view id) {
    return std::any_of(std::begin(kGlyphs), std::end(kGlyphs), [&](const Glyph& g) { return g.id == id; });
}

bool valid_color(const std::string& c) {
    return c.size() == 7 && c[0] == '#' &&
           std::all_of(c.begin() + 1, c.end(), [](char ch) { return std::isxdigit(static_cast<unsigned char>(ch)); });
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    while (s.back() == '0') {
        s.pop_back();
    }
    if (s.back() == '.') {
        s.pop_back();
    }
    return s == "-0" ? "0" : s;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

StrokePattern parse_pattern(const std::string& s) {
    if (s == "solid") return StrokePattern::solid;
    if (s == "short-dotted") return StrokePattern::short_dotted;
    if (s == "wide-dotted") return StrokePattern::wide_dotted;
    throw ParseError("unknown stroke pattern '" + s + "'");
}

Arrowhead parse_arrowhead(const std::string& s) {
    if (s == "none") return Arrowhead::none;
    if (s == "filled") return Arrowhead::filled;
    if (s == "open") return Arrowhead::open;
    throw ParseError("unknown arrowhead '" + s + "'");
}

void apply_node_style(NodeStyle& n, const nlohmann::json& j) {
    n.fill = j.value("fill", n.fill);
    n.stroke = j.value("stroke", n.stroke);
    n.corner_radius = j.value("corner_radius", n.corner_radius);
}

nlohmann::json node_style_json(const NodeStyle& n) {
    return {{"fill", n.fill}, {"stroke", n.stroke}, {"corner_radius", n.corner_radius}};
}

// Label text split into lines of at most `width` bytes at spaces; each line
// keeps its byte offset into the label.
std::vector<std::pair<std::size_t, std::string>> wrap(const std::string& label, std::size_t width,
                                                      std::size_t max_lines) {
    std::vector<std::pair<std::size_t, std::string>> lines;
    std::size_t pos = 0;
    while (pos < label.size() && lines.size() < max_lines) {
        std::size_t end = std::min(label.size(), pos + width);
        if (end < label.size()) {
            auto space = label.rfind(' ', end);
            if (space != std::string::npos && space > pos) {
                end = space;
            }
        }
        lines.emplace_back(pos, label.substr(pos, end - pos));
        pos = end;
        while (pos < label.size() && label[pos] == ' ') {
            ++pos;
        }
    }
    if (pos < label.size() && !lines.empty()) {
        lines.back().second += "...";
    }
    return lines;
}

}  // namespace

StyleTable StyleTable::defaults() {
    StyleTable t;
    using RT = RelationType;
    t.relations[RT::TemporalSemantic] = {"#FDBE85", "clock", StrokePattern::solid, Arrowhead::none};
    t.relations[RT::Subject] = {"#756BB1", "book", StrokePattern::solid, Arrowhead::none};
    t.relations[RT::Entity] = {"#E6550D", "stick-figure", StrokePattern::solid, Arrowhead::none};
    t.relations[RT::Causal] = {"#40E0D0", "cradle", StrokePattern::solid, Arrowhead::filled};
    t.relations[RT::Correspondence] = {"#08306B", "letter", StrokePattern::solid, Arrowhead::none};
    t.relations[RT::Succession] = {"#000000", "", StrokePattern::solid, Arrowhead::filled};
    t.relations[RT::ReferencesTo] = {"#000000", "", StrokePattern::short_dotted, Arrowhead::filled};
    t.relations[RT::ConsistsOf] = {"#000000", "", StrokePattern::wide_dotted, Arrowhead::filled};
    t.event = {"#FFFFFF", "#333333", 8};
    t.object = {"#EEEEEE", "#999999", 0};
    t.entity = {"#FFFFFF", "#E6550D", 14};
    return t;
}

std::vector<Violation> StyleTable::validate() const {
    std::vector<Violation> out;
    for (auto t : kAllRelationTypes) {
        std::string name{timeflow::to_string(t)};
        auto it = relations.find(t);
        if (it == relations.end()) {
            out.push_back({name, "style-complete", "no style for " + name});
            continue;
        }
        if (!valid_color(it->second.color)) {
            out.push_back({name, "style-color", "color '" + it->second.color + "' is not #RRGGBB"});
        }
        if (!it->second.glyph.empty() && !known_glyph(it->second.glyph)) {
            out.push_back({name, "style-glyph", "unknown glyph '" + it->second.glyph + "'"});
        }
    }
    for (const auto* n : {&event, &object, &entity}) {
        if (!valid_color(n->fill) || !valid_color(n->stroke)) {
            out.push_back({"nodes", "style-color", "node colors must be #RRGGBB"});
        }
    }
    return out;
}

std::string_view dasharray(StrokePattern pattern) {
    switch (pattern) {
    case StrokePattern::solid: return "";
    case StrokePattern::short_dotted: return "2,3";
    case StrokePattern::wide_dotted: return "2,9";
    }
    return "";
}

std::string_view to_string(StrokePattern pattern) {
    switch (pattern) {
    case StrokePattern::solid: return "solid";
    case StrokePattern::short_dotted: return "short-dotted";
    case StrokePattern::wide_dotted: return "wide-dotted";
    }
    return "solid";
}

std::string_view to_string(Arrowhead arrowhead) {
    switch (arrowhead) {
    case Arrowhead::none: return "none";
    case Arrowhead::filled: return "filled";
    case Arrowhead::open: return "open";
    }
    return "none";
}

StyleTable parse_style_table(const nlohmann::json& j) {
    StyleTable t = StyleTable::defaults();
    try {
        if (j.contains("relations")) {
            for (const auto& [name, s] : j.at("relations").items()) {
                auto type = parse_relation_type(name);
                if (!type) {
                    throw ParseError("unknown relation type '" + name + "' in style");
                }
                auto& rs = t.relations[*type];
                rs.color = s.value("color", rs.color);
                rs.glyph = s.value("glyph", rs.glyph);
                if (s.contains("pattern")) rs.pattern = parse_pattern(s.at("pattern").get<std::string>());
                if (s.contains("arrowhead")) rs.arrowhead = parse_arrowhead(s.at("arrowhead").get<std::string>());
            }
        }
        if (j.contains("event")) apply_node_style(t.event, j.at("event"));
        if (j.contains("object")) apply_node_style(t.object, j.at("object"));
        if (j.contains("entity")) apply_node_style(t.entity, j.at("entity"));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed style table: ") + e.what());
    }
    if (auto v = t.validate(); !v.empty()) {
        throw ValidationError(std::move(v));
    }
    return t;
}

nlohmann::json to_json(const StyleTable& style) {
    nlohmann::json rel = nlohmann::json::object();
    for (const auto& [type, s] : style.relations) {
        rel[std::string(timeflow::to_string(type))] = {{"color", s.color},
                                                       {"glyph", s.glyph},
                                                       {"pattern", to_string(s.pattern)},
                                                       {"dasharray", dasharray(s.pattern)},
                                                       {"arrowhead", to_string(s.arrowhead)}};
    }
    return {{"relations", rel},
            {"event", node_style_json(style.event)},
            {"object", node_style_json(style.object)},
            {"entity", node_style_json(style.entity)}};
}

std::string element_id(std::string_view prefix, std::string_view domain_id) {
    static constexpr char hex[] = "0123456789ABCDEF";
    std::string out(prefix);
    for (unsigned char c : domain_id) {
        if (std::isalnum(c) || c == '-' || c == '_') {
            out += static_cast<char>(c);
        } else {
            out += '.';
            out += hex[c >> 4];
            out += hex[c & 15];
        }
    }
    return out;
}

std::string render_svg(const layout::Layout& layout, const Chronology& view, const StyleTable& style) {
    constexpr double kLegendRow = 20;
    constexpr double kLegendWidth = 250;
    const double legend_y = layout.height;
    const double width = std::max(layout.width, kLegendWidth + 80);
    const double height = legend_y + 40 + kLegendRow * static_cast<double>(kAllRelationTypes.size());

    std::map<std::string, const Relation*> relations;
    for (const auto& r : view.relations) {
        relations[r.id] = &r;
    }
    auto style_of = [&](RelationType t) -> const RelationStyle& {
        auto it = style.relations.find(t);
        if (it == style.relations.end()) {
            throw Error("style table has no entry for " + std::string(timeflow::to_string(t)));
        }
        return it->second;
    };

    std::ostringstream svg;
    svg << R"(<?xml version="1.0" encoding="UTF-8"?>)" << '\n'
        << R"(<svg xmlns="http://www.w3.org/2000/svg" xmlns:xlink="http://www.w3.org/1999/xlink" version="1.1")"
        << " width=\"" << num(width) << "\" height=\"" << num(height) << "\" viewBox=\"0 0 " << num(width) << ' '
        << num(height) << "\" font-family=\"Helvetica, Arial, sans-serif\" font-size=\"11\">\n";

    svg << "<defs>\n";
    for (const auto& g : kGlyphs) {
        svg << "<symbol id=\"glyph-" << g.id << "\" viewBox=\"0 0 16 16\">" << g.body << "</symbol>\n";
    }
    for (auto t : kAllRelationTypes) {
        const auto& s = style_of(t);
        if (s.arrowhead == Arrowhead::none) {
            continue;
        }
        svg << "<marker id=\"arrow-" << timeflow::to_string(t)
            << R"(" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7" markerHeight="7" orient="auto">)";
        if (s.arrowhead == Arrowhead::filled) {
            svg << R"(<path d="M0,0L10,5L0,10Z" fill=")" << s.color << "\"/>";
        } else {
            svg << R"(<path d="M0,0L10,5L0,10" fill="none" stroke=")" << s.color << "\" stroke-width=\"1.5\"/>";
        }
        svg << "</marker>\n";
    }
    svg << "</defs>\n";

    auto edge_attrs = [&](RelationType t) {
        const auto& s = style_of(t);
        std::string a = "fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.6\"";
        if (auto d = dasharray(s.pattern); !d.empty()) {
            a += " stroke-dasharray=\"" + std::string(d) + "\"";
        }
        if (s.arrowhead != Arrowhead::none) {
            a += " marker-end=\"url(#arrow-" + std::string(timeflow::to_string(t)) + ")\"";
        }
        return a;
    };
    auto glyph_use = [&](RelationType t, layout::Point at) {
        const auto& s = style_of(t);
        if (s.glyph.empty()) {
            return std::string();
        }
        return "<use class=\"glyph\" href=\"#glyph-" + s.glyph + "\" xlink:href=\"#glyph-" + s.glyph + "\" x=\"" +
               num(at.x - 8) + "\" y=\"" + num(at.y - 8) + "\" width=\"16\" height=\"16\" color=\"" + s.color +
               "\"/>";
    };

    svg << "<g class=\"edges\">\n";
    for (const auto& e : layout.edges) {
        auto it = relations.find(e.relation_id);
        if (it == relations.end()) {
            throw Error("layout edge '" + e.relation_id + "' has no relation in the view");
        }
        const Relation& r = *it->second;
        std::string d;
        const auto& p = e.points;
        if (e.shape == layout::EdgeShape::arc && p.size() == 3) {
            d = "M" + num(p[0].x) + "," + num(p[0].y) + " Q" + num(p[1].x) + "," + num(p[1].y) + " " + num(p[2].x) +
                "," + num(p[2].y);
        } else {
            for (std::size_t i = 0; i < p.size(); ++i) {
                d += (i ? " L" : "M") + num(p[i].x) + "," + num(p[i].y);
            }
        }
        svg << "<g id=\"" << element_id("r-", r.id) << "\" class=\"edge\" data-type=\"" << timeflow::to_string(r.type)
            << "\" data-level=\"" << timeflow::to_string(r.level()) << "\"><path d=\"" << d << "\" "
            << edge_attrs(r.type) << "/>" << glyph_use(r.type, e.label_anchor) << "</g>\n";
    }
    svg << "</g>\n";

    // Highlight colors per byte of each event title, taken from the evidence
    // of drawn relations; the first type in taxonomy order wins.
    std::map<std::string, std::vector<const RelationStyle*>> title_marks;
    std::map<std::string, std::vector<RelationType>> title_types;
    for (const auto& e : layout.edges) {
        const Relation& r = *relations.at(e.relation_id);
        for (const auto& ev : r.evidence) {
            const Event* host = view.find_event(ev.holder);
            if (!host || ev.end > host->title.size()) {
                continue;
            }
            auto& marks = title_marks[ev.holder];
            auto& types = title_types[ev.holder];
            marks.resize(host->title.size(), nullptr);
            types.resize(host->title.size(), RelationType::ConsistsOf);
            for (std::size_t i = ev.begin; i < ev.end; ++i) {
                if (!marks[i] || r.type < types[i]) {
                    marks[i] = &style_of(r.type);
                    types[i] = r.type;
                }
            }
        }
    }

    auto label = [&](const layout::Node& n, const std::string& text, std::size_t title_offset,
                     const std::vector<const RelationStyle*>* marks, const std::vector<RelationType>* types) {
        std::size_t chars = static_cast<std::size_t>(std::max(6.0, (n.width - 16) / 6.2));
        std::size_t max_lines = static_cast<std::size_t>(std::max(1.0, (n.height - 6) / 13));
        auto lines = wrap(text, chars, max_lines);
        double y0 = n.y + n.height / 2 - 13.0 * static_cast<double>(lines.size() - 1) / 2 + 4;
        std::string out = "<text x=\"" + num(n.x + 8) + "\" y=\"" + num(y0) + "\">";
        for (std::size_t li = 0; li < lines.size(); ++li) {
            const auto& [offset, line] = lines[li];
            out += "<tspan x=\"" + num(n.x + 8) + "\"" + (li ? " dy=\"13\"" : "") + ">";
            std::size_t i = 0;
            while (i < line.size()) {
                auto mark_at = [&](std::size_t k) -> const RelationStyle* {
                    std::size_t pos = offset + k;
                    if (!marks || pos < title_offset || pos - title_offset >= marks->size() || k >= line.size()) {
                        return nullptr;
                    }
                    return (*marks)[pos - title_offset];
                };
                const RelationStyle* m = mark_at(i);
                std::size_t j = i;
                while (j < line.size() && mark_at(j) == m) {
                    ++j;
                }
                auto piece = xml_escape(std::string_view(line).substr(i, j - i));
                if (m) {
                    auto type = (*types)[offset + i - title_offset];
                    out += "<tspan class=\"hl\" data-type=\"" + std::string(timeflow::to_string(type)) + "\" fill=\"" +
                           m->color + "\" font-weight=\"bold\">" + piece + "</tspan>";
                } else {
                    out += piece;
                }
                i = j;
            }
            out += "</tspan>";
        }
        return out + "</text>";
    };

    svg << "<g class=\"nodes\">\n";
    for (const auto& n : layout.nodes) {
        const NodeStyle& ns = n.node_class == layout::NodeClass::event    ? style.event
                              : n.node_class == layout::NodeClass::object ? style.object
                                                                          : style.entity;
        svg << "<g id=\"" << element_id("n-", n.id) << "\" class=\"node " << layout::to_string(n.node_class)
            << "\"><rect x=\"" << num(n.x) << "\" y=\"" << num(n.y) << "\" width=\"" << num(n.width)
            << "\" height=\"" << num(n.height) << "\" rx=\"" << num(ns.corner_radius) << "\" ry=\""
            << num(ns.corner_radius) << "\" fill=\"" << ns.fill << "\" stroke=\"" << ns.stroke << "\"/>";
        if (n.node_class == layout::NodeClass::event) {
            const Concept* k = view.find_concept(n.id);
            const Event& e = *k->event();
            std::string prefix = std::to_string(e.ordinal) + ". ";
            auto mi = title_marks.find(n.id);
            auto ti = title_types.find(n.id);
            svg << label(n, prefix + e.title, prefix.size(), mi == title_marks.end() ? nullptr : &mi->second,
                         ti == title_types.end() ? nullptr : &ti->second);
        } else if (n.node_class == layout::NodeClass::object) {
            const InformationObject* o = view.find_object(n.id);
            svg << label(n, o && !o->title.empty() ? o->title : n.id, 0, nullptr, nullptr);
        } else {
            const Concept* k = view.find_concept(n.id);
            const auto* en = k ? std::get_if<Entity>(&k->value) : nullptr;
            svg << label(n, en ? en->name : n.id, 0, nullptr, nullptr);
        }
        svg << "</g>\n";
    }
    svg << "</g>\n";

    svg << "<g class=\"badges\">\n";
    for (const auto& b : layout.badges) {
        svg << "<text id=\"" << element_id("b-", b.event_id) << "\" class=\"badge\" x=\"" << num(b.position.x)
            << "\" y=\"" << num(b.position.y) << "\" text-anchor=\"middle\" font-weight=\"bold\">+" << b.hidden
            << "</text>\n";
    }
    svg << "</g>\n";

    svg << "<g class=\"legend\" transform=\"translate(40," << num(legend_y) << ")\">\n";
    svg << "<text x=\"0\" y=\"12\" font-weight=\"bold\">Relations</text>\n";
    double y = 30;
    for (auto t : kAllRelationTypes) {
        svg << "<g class=\"legend-entry\" data-type=\"" << timeflow::to_string(t) << "\"><path d=\"M0," << num(y)
            << " L60," << num(y) << "\" " << edge_attrs(t) << "/>" << glyph_use(t, {30, y}) << "<text x=\"72\" y=\""
            << num(y + 4) << "\">" << timeflow::to_string(t) << "</text></g>\n";
        y += kLegendRow;
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

nlohmann::json render_view_json(const layout::Layout& layout, const Chronology& view, const StyleTable& style) {
    nlohmann::json l;
    layout::to_json(l, layout);
    return {{"schema_version", kSchemaVersion}, {"chronology", view}, {"layout", l}, {"style", to_json(style)}};
}

View parse_view_json(const nlohmann::json& j) {
    try {
        View v;
        v.chronology = parse_chronology(j.at("chronology"));
        layout::from_json(j.at("layout"), v.layout);
        v.style = parse_style_table(j.at("style"));
        return v;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed view document: ") + e.what());
    }
}

}  // namespace timeflow::render
