// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <regex>

#include "layout_checks.hpp"
#include "oracles.hpp"
#include "service_fixture.hpp"
#include "support.hpp"
#include "temporal_vectors.hpp"
#include "timeflow/cli.hpp"
#include "timeflow/ingest.hpp"
#include "timeflow/pipeline.hpp"
#include "timeflow/render.hpp"

using namespace timeflow;
using nlohmann::json;

namespace {

struct Failure {
    std::string why;
};

void expect(bool ok, const std::string& why) {
    if (!ok) throw Failure{why};
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool has_edge(const std::set<testing::Triple>& got, const std::string& type, const std::string& a,
              const std::string& b, const std::string& level, bool directed) {
    return got.count({type, a, b, level}) || (!directed && got.count({type, b, a, level}));
}

std::string ev(int n) { return "event-" + std::to_string(n); }

void golden_reproduction() {
    auto t0 = Clock::now();
    auto c = pipeline::run(pipeline::ingest_corpus(testing::golden_manifest())).chronology;
    double elapsed = seconds_since(t0);

    auto expected = testing::golden_expectation();
    std::vector<std::pair<std::string, int>> events;
    for (const auto* e : c.events()) events.emplace_back(e->id, e->event()->ordinal);
    expect(events == expected.events, "events or ordinals differ from the expectation file");
    auto got = testing::triples(c);
    std::size_t missing = 0, extra = 0;
    for (const auto& t : expected.relations) missing += got.count(t) == 0;
    for (const auto& t : got) extra += expected.relations.count(t) == 0;
    expect(missing == 0 && extra == 0, std::to_string(missing) + " expected relations missing, " +
                                           std::to_string(extra) + " unexpected");

    // The worked example's enumerated relations, independent of the file.
    expect(events.size() == 9, "not 9 events");
    for (int i = 1; i <= 9; ++i) expect(events[static_cast<std::size_t>(i - 1)].second == i, "ordinals not 1-9");
    for (int e : {5, 9}) {
        expect(has_edge(got, "ConsistsOf", ev(e), "ombudsman-report", "TE", true),
               ev(e) + " does not consist of the Ombudsman report");
    }
    for (const auto* k : c.events()) {
        for (const auto& o : k->event()->constitutive_objects) {
            expect(has_edge(got, "ConsistsOf", k->id, o, "TE", true), "ConsistsOf missing for " + k->id);
        }
    }
    for (auto [a, b] : {std::pair{1, 2}, {2, 3}, {3, 4}, {4, 5}}) {
        expect(has_edge(got, "Subject", ev(a), ev(b), "EE", false), "Subject " + ev(a) + "-" + ev(b));
    }
    for (auto [a, b] : {std::pair{3, 6}, {6, 7}, {7, 9}}) {
        expect(has_edge(got, "Entity", ev(a), ev(b), "EE", false), "Entity " + ev(a) + "-" + ev(b));
    }
    const std::string tax = "entity:tax-authorities";
    expect(has_edge(got, "Entity", tax, "judgement-council-of-state", "TE", false), "Tax Authorities TE edge");
    for (int e : {6, 7, 9}) expect(has_edge(got, "Entity", tax, ev(e), "EE", false), "Tax Authorities - " + ev(e));
    expect(has_edge(got, "Causal", ev(7), ev(8), "EE", true), "Causal 7->8");
    expect(has_edge(got, "Correspondence", ev(7), ev(8), "EE", false), "Correspondence 7-8");
    expect(has_edge(got, "Succession", "email-palmen", "email-forward", "TT", true), "Succession email");
    for (const char* mail : {"email-palmen", "email-forward"}) {
        expect(has_edge(got, "ReferencesTo", mail, "memo-palmen", "TT", true), std::string("ReferencesTo from ") + mail);
    }
    bool via_date = false;
    for (const auto& r : c.relations) {
        bool pair = (r.from.id == ev(6) && r.to.id == "memo-palmen") || (r.to.id == ev(6) && r.from.id == "memo-palmen");
        if (r.type == RelationType::TemporalSemantic && pair) {
            for (const auto& e : r.evidence) via_date |= e.text == "08-03-2017";
        }
    }
    expect(via_date, "TemporalSemantic Event 6 - Memo Palmen via 08-03-2017");
    expect(elapsed < 5.0, "took " + std::to_string(elapsed) + " s");
}

void admissibility_matrix() {
    // Group A at every level; Succession and References To between texts
    // only; Consists Of from event to text only.
    const std::map<std::string, std::set<std::string>> table = {
        {"TemporalSemantic", {"TT", "EE", "TE"}}, {"Subject", {"TT", "EE", "TE"}},
        {"Entity", {"TT", "EE", "TE"}},           {"Causal", {"TT", "EE", "TE"}},
        {"Correspondence", {"TT", "EE", "TE"}},   {"Succession", {"TT"}},
        {"ReferencesTo", {"TT"}},                 {"ConsistsOf", {"TE"}},
    };
    int cells = 0;
    for (auto t : kAllRelationTypes) {
        for (auto l : {Level::TT, Level::EE, Level::TE}) {
            bool want = table.at(std::string(to_string(t))).count(std::string(to_string(l))) > 0;
            expect(admissible(t, l) == want, std::string(to_string(t)) + " at " + std::string(to_string(l)));
            ++cells;
        }
    }
    expect(cells == 24, "matrix is not 8x3");
}

void temporal_vectors() {
    using extract::DateOrder;
    const Date ref = testing::kMonday;
    auto one = [&](const std::string& text, std::optional<Date> r, DateOrder o = DateOrder::dmy) {
        auto res = extract::extract_temporal(text, r, o);
        expect(res.hits.size() == 1, "'" + text + "' gave " + std::to_string(res.hits.size()) + " hits");
        return res.hits[0].interval;
    };
    expect(one("08-03-2017", std::nullopt) == DateInterval::day(testing::d(2017, 3, 8)), "08-03-2017");
    expect(one("On the first of September", ref) == one("01/09", ref), "first of September vs 01/09");
    expect(one("tomorrow", ref) == DateInterval::day(ref.plus_days(1)), "tomorrow");
    std::size_t extra = 0;
    for (const auto& v : testing::temporal_vectors()) {
        auto res = extract::extract_temporal(v.text, v.reference, v.order);
        expect(res.hits.size() == 1 && res.hits[0].surface == v.surface &&
                   res.hits[0].interval == DateInterval{v.start, v.end},
               std::string("vector '") + v.text + "'");
        ++extra;
    }
    expect(extra >= 20, "fewer than 20 table vectors");
}

void layout_properties() {
    auto t0 = Clock::now();
    std::mt19937 rng(2024);
    for (int i = 0; i < 200; ++i) {
        auto c = testing::random_chronology(rng, {.max_events = 10, .max_objects = 16, .max_extra_relations = 16});
        auto l1 = layout::compute_layout(c);
        auto l2 = layout::compute_layout(c);
        expect(render::render_svg(l1, c) == render::render_svg(l2, c), "renders differ for chronology " + std::to_string(i));
        auto problems = testing::layout_problems(c, l1);
        expect(problems.empty(), "chronology " + std::to_string(i) + ": " + (problems.empty() ? "" : problems[0]));
    }
    double elapsed = seconds_since(t0);
    expect(elapsed < 30.0, "took " + std::to_string(elapsed) + " s");
}

void encoding_snapshot() {
    auto c = pipeline::run(pipeline::ingest_corpus(testing::golden_manifest())).chronology;
    auto l = layout::compute_layout(c);
    auto svg = render::render_svg(l, c);
    auto style = render::StyleTable::defaults();

    std::regex edge(R"re(<g id="r-[^"]*" class="edge" data-type="(\w+)" data-level="\w+"><path d="[^"]*" ([^>]*)/>(<use [^>]*/>)?</g>)re");
    std::regex attr(R"re((\S+)="([^"]*)")re");
    std::set<std::string> seen;
    std::size_t matched = 0;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), edge); it != std::sregex_iterator(); ++it) {
        std::string type = (*it)[1];
        std::map<std::string, std::string> attrs;
        std::string a = (*it)[2];
        for (auto m = std::sregex_iterator(a.begin(), a.end(), attr); m != std::sregex_iterator(); ++m) {
            attrs[(*m)[1]] = (*m)[2];
        }
        const auto& s = style.relations.at(*parse_relation_type(type));
        expect(attrs["stroke"] == s.color, type + " stroke " + attrs["stroke"]);
        expect(attrs["stroke-dasharray"] == std::string(render::dasharray(s.pattern)), type + " dasharray");
        expect(attrs.count("marker-end") == (s.arrowhead != render::Arrowhead::none), type + " arrowhead");
        std::string use = (*it)[3];
        expect(s.glyph.empty() ? use.empty() : use.find("#glyph-" + s.glyph + "\"") != std::string::npos,
               type + " glyph");
        if (!use.empty()) expect(use.find("color=\"" + s.color + "\"") != std::string::npos, type + " glyph color");
        seen.insert(type);
        ++matched;
    }
    expect(matched == l.edges.size(), "parsed " + std::to_string(matched) + " of " + std::to_string(l.edges.size()) + " edges");
    expect(seen.size() == kAllRelationTypes.size(), "only " + std::to_string(seen.size()) + " types drawn");
    for (auto t : kAllRelationTypes) {
        const auto& s = style.relations.at(t);
        if (s.arrowhead == render::Arrowhead::none) continue;
        auto at = svg.find("<marker id=\"arrow-" + std::string(to_string(t)) + "\"");
        expect(at != std::string::npos, "no marker for " + std::string(to_string(t)));
        auto def = svg.substr(at, svg.find("</marker>", at) - at);
        bool filled = def.find("fill=\"" + s.color + "\"") != std::string::npos;
        expect(filled == (s.arrowhead == render::Arrowhead::filled), "marker fill for " + std::string(to_string(t)));
    }
    auto snap = json::parse(testing::slurp(testing::snapshot_dir() / "style_defaults.json"));
    expect(render::to_json(style) == snap, "style defaults differ from the snapshot");
}

void near_duplicates() {
    auto j = json::parse(testing::slurp(testing::fixture_dir() / "near_duplicates.json"));
    auto k = j.at("shingle_size").get<std::size_t>();
    expect(j.at("pairs").size() == 50, "fixture does not hold 50 pairs");
    double worst = 0;
    for (const auto& p : j.at("pairs")) {
        auto a = p.at("a").get<std::string>(), b = p.at("b").get<std::string>();
        worst = std::max(worst, std::abs(ingest::shingle_similarity(a, b, k) - oracle::jaccard(a, b, k)));
    }
    expect(worst <= 1e-12, "largest difference " + std::to_string(worst));
}

void service_contract() {
    testing::TempDir dir;
    auto path = (dir.path() / "chronology.json").string();
    auto p = [&](const char* n) { return (dir.path() / n).string(); };
    std::ostringstream out, err;
    auto run = [&](std::vector<std::string> args) {
        args.insert(args.begin(), "timeflow");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    };
    expect(run({"ingest", testing::golden_manifest().string(), "-o", p("corpus.json")}) == 0, "cli ingest");
    expect(run({"extract", p("corpus.json"), "-o", p("concepts.json")}) == 0, "cli extract");
    expect(run({"relate", p("corpus.json"), p("concepts.json"), "-o", p("relations.json")}) == 0, "cli relate");
    expect(run({"build", p("corpus.json"), p("concepts.json"), p("relations.json"), "-o", path}) == 0, "cli build");
    auto from_cli = parse_chronology(json::parse(testing::slurp(path)));

    testing::LiveServer server;
    auto c = server.client();
    auto up = c.Post("/corpora", testing::golden_manifest_upload(), "application/json");
    expect(up && up->status == 201, "corpus upload failed");
    std::string id = json::parse(up->body).at("id");
    auto x = c.Post(("/corpora/" + id + "/extract").c_str(), "", "application/json");
    expect(x && x->status == 201, "extract failed");
    auto g = c.Get(("/chronologies/" + id).c_str());
    expect(g && g->status == 200, "fetch failed");
    auto from_http = parse_chronology(json::parse(g->body));
    from_http.meta.name = from_cli.meta.name;  // resource ids are generated per upload
    expect(from_http == from_cli, "HTTP and CLI chronologies differ");

    std::string tag = json::parse(x->body).at("tag");
    auto doc = json::parse(g->body);
    doc["meta"]["name"] = "edited";
    auto ok = c.Put(("/chronologies/" + id).c_str(), {{"If-Match", testing::quoted(tag)}}, doc.dump(), "application/json");
    expect(ok && ok->status == 200, "fresh PUT refused");
    doc["meta"]["name"] = "stale";
    auto stale = c.Put(("/chronologies/" + id).c_str(), {{"If-Match", testing::quoted(tag)}}, doc.dump(), "application/json");
    expect(stale && stale->status == 409, "stale PUT answered " + std::to_string(stale ? stale->status : -1));
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void()>>> criteria = {
        {"golden corpus reproduction", golden_reproduction},
        {"admissibility matrix", admissibility_matrix},
        {"temporal normalization vectors", temporal_vectors},
        {"layout determinism and monotonicity", layout_properties},
        {"encoding snapshot", encoding_snapshot},
        {"near-duplicate oracle", near_duplicates},
        {"service contract", service_contract},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        try {
            check();
            std::cout << "PASS " << name << '\n';
        } catch (const Failure& f) {
            ++failed;
            std::cout << "FAIL " << name << ": " << f.why << '\n';
        } catch (const std::exception& e) {
            ++failed;
            std::cout << "FAIL " << name << ": " << e.what() << '\n';
        }
    }
    return failed ? 1 : 0;
}
