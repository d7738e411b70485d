#include <doctest.h>

#include <cmath>
#include <regex>

#include "support.hpp"
#include "timeflow/pipeline.hpp"
#include "timeflow/render.hpp"

using namespace timeflow;
using namespace timeflow::render;

namespace {

struct Hsl {
    double hue, lightness;
};

Hsl hsl(const std::string& hex) {
    auto channel = [&](int i) { return std::stoi(hex.substr(1 + 2 * static_cast<std::size_t>(i), 2), nullptr, 16) / 255.0; };
    double r = channel(0), g = channel(1), b = channel(2);
    double hi = std::max({r, g, b}), lo = std::min({r, g, b}), d = hi - lo;
    double h = 0;
    if (d > 0) {
        if (hi == r) h = 60 * std::fmod((g - b) / d + 6, 6);
        else if (hi == g) h = 60 * ((b - r) / d + 2);
        else h = 60 * ((r - g) / d + 4);
    }
    return {h, (hi + lo) / 2};
}

const pipeline::Run& golden_run() {
    static const pipeline::Run run = pipeline::run(pipeline::ingest_corpus(testing::golden_manifest()));
    return run;
}

}  // namespace

TEST_CASE("default encoding uses the described colors, icons and strokes") {
    auto s = StyleTable::defaults();
    CHECK(s.validate().empty());
    auto at = [&](RelationType t) { return s.relations.at(t); };

    // Light orange with a clock.
    auto ts = hsl(at(RelationType::TemporalSemantic).color);
    CHECK((ts.hue >= 15 && ts.hue <= 40 && ts.lightness > 0.6));
    CHECK(at(RelationType::TemporalSemantic).glyph == "clock");
    // Purple with a book.
    CHECK((hsl(at(RelationType::Subject).color).hue >= 240 && hsl(at(RelationType::Subject).color).hue <= 300));
    CHECK(at(RelationType::Subject).glyph == "book");
    // Orange with a stick figure.
    auto en = hsl(at(RelationType::Entity).color);
    CHECK((en.hue >= 15 && en.hue <= 40 && en.lightness <= 0.6));
    CHECK(at(RelationType::Entity).glyph == "stick-figure");
    // Turquoise with Newton's cradle.
    CHECK((hsl(at(RelationType::Causal).color).hue >= 160 && hsl(at(RelationType::Causal).color).hue <= 185));
    CHECK(at(RelationType::Causal).glyph == "cradle");
    // Dark blue with a letter.
    auto co = hsl(at(RelationType::Correspondence).color);
    CHECK((co.hue >= 200 && co.hue <= 245 && co.lightness < 0.35));
    CHECK(at(RelationType::Correspondence).glyph == "letter");
    // Black: filled solid, short dots, wide dots.
    for (auto t : {RelationType::Succession, RelationType::ReferencesTo, RelationType::ConsistsOf}) {
        CHECK(at(t).color == "#000000");
        CHECK(at(t).glyph.empty());
        CHECK(at(t).arrowhead == Arrowhead::filled);
    }
    CHECK(at(RelationType::Succession).pattern == StrokePattern::solid);
    CHECK(at(RelationType::ReferencesTo).pattern == StrokePattern::short_dotted);
    CHECK(at(RelationType::ConsistsOf).pattern == StrokePattern::wide_dotted);
    CHECK(s.event.corner_radius > 0);
    CHECK(s.object.corner_radius == 0);
}

TEST_CASE("default style equals the checked-in snapshot") {
    auto snap = nlohmann::json::parse(testing::slurp(testing::snapshot_dir() / "style_defaults.json"));
    CHECK(to_json(StyleTable::defaults()) == snap);
    CHECK(parse_style_table(snap) == StyleTable::defaults());
}

TEST_CASE("style overrides and validation") {
    auto s = parse_style_table({{"relations", {{"Subject", {{"color", "#123456"}, {"pattern", "wide-dotted"}}}}},
                                {"event", {{"corner_radius", 2}}}});
    CHECK(s.relations.at(RelationType::Subject).color == "#123456");
    CHECK(s.relations.at(RelationType::Subject).pattern == StrokePattern::wide_dotted);
    CHECK(s.relations.at(RelationType::Subject).glyph == "book");
    CHECK_THROWS_AS(parse_style_table({{"relations", {{"Subject", {{"color", "purple"}}}}}}), ValidationError);
    CHECK_THROWS_AS(parse_style_table({{"relations", {{"Subject", {{"glyph", "rocket"}}}}}}), ValidationError);
    CHECK_THROWS_AS(parse_style_table({{"relations", {{"Nope", {}}}}}), ParseError);
    StyleTable partial = StyleTable::defaults();
    partial.relations.erase(RelationType::Causal);
    REQUIRE(partial.validate().size() == 1);
    CHECK(partial.validate()[0].rule == "style-complete");
}

TEST_CASE("element ids escape everything outside the safe set") {
    CHECK(element_id("n-", "event-1") == "n-event-1");
    CHECK(element_id("r-", "Entity:a--entity:tax") == "r-Entity.3Aa--entity.3Atax");
    CHECK(element_id("n-", "a b.c") == "n-a.20b.2Ec");
    CHECK(element_id("n-", "é") == "n-.C3.A9");
}

TEST_CASE("the SVG draws each laid-out relation in its style, deterministically") {
    const auto& c = golden_run().chronology;
    auto l = layout::compute_layout(c);
    auto svg = render_svg(l, c);
    CHECK(svg == render_svg(l, c));
    CHECK(svg.rfind("<?xml", 0) == 0);
    auto style = StyleTable::defaults();
    std::map<std::string, const Relation*> by_id;
    for (const auto& r : c.relations) by_id[r.id] = &r;
    for (const auto& e : l.edges) {
        const auto& r = *by_id.at(e.relation_id);
        const auto& s = style.relations.at(r.type);
        auto start = svg.find("<g id=\"" + element_id("r-", r.id) + "\"");
        REQUIRE(start != std::string::npos);
        auto group = svg.substr(start, svg.find("</g>", start) - start);
        CHECK(group.find("stroke=\"" + s.color + "\"") != std::string::npos);
        CHECK((group.find("stroke-dasharray") != std::string::npos) == (s.pattern != StrokePattern::solid));
        CHECK((group.find("#glyph-") != std::string::npos) == !s.glyph.empty());
    }
    for (const auto& n : l.nodes) CHECK(svg.find("id=\"" + element_id("n-", n.id) + "\"") != std::string::npos);
    CHECK(svg.find("class=\"hl\"") != std::string::npos);
    CHECK(svg.find(">+199<") != std::string::npos);
}

TEST_CASE("rendering needs a style for every drawn type") {
    const auto& c = golden_run().chronology;
    auto l = layout::compute_layout(c);
    auto s = StyleTable::defaults();
    s.relations.erase(RelationType::ConsistsOf);
    CHECK_THROWS_AS(render_svg(l, c, s), Error);
}

TEST_CASE("view JSON round-trips") {
    const auto& c = golden_run().chronology;
    auto l = layout::compute_layout(c);
    auto j = render_view_json(l, c);
    auto v = parse_view_json(nlohmann::json::parse(j.dump()));
    CHECK(v.chronology == c);
    CHECK(v.layout == l);
    CHECK(v.style == StyleTable::defaults());
}
