#include "timeflow/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "timeflow/chronology.hpp"
#include "timeflow/interchange.hpp"
#include "timeflow/layout.hpp"
#include "timeflow/pipeline.hpp"
#include "timeflow/render.hpp"
#include "timeflow/service.hpp"
#include "timeflow/store.hpp"
#include "timeflow/text.hpp"

namespace timeflow::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

class UsageError : public Error {
public:
    using Error::Error;
};

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

// --config: {"style", "gazetteer", "subject_lexicon", "named_periods",
// "relate"}; each value is inline JSON or a path relative to the config file.
struct Config {
    std::optional<json> style;
    std::optional<json> gazetteer;
    std::optional<json> subject_lexicon;
    std::optional<json> named_periods;
    std::optional<json> relate;
};

Config load_config(const std::string& path) {
    Config c;
    if (path.empty()) {
        return c;
    }
    json j = read_json(path);
    fs::path dir = fs::path(path).parent_path();
    auto section = [&](const char* key, std::optional<json>& slot) {
        if (!j.contains(key)) {
            return;
        }
        const json& v = j.at(key);
        slot = v.is_string() ? read_json((dir / v.get<std::string>()).string()) : v;
    };
    section("style", c.style);
    section("gazetteer", c.gazetteer);
    section("subject_lexicon", c.subject_lexicon);
    section("named_periods", c.named_periods);
    section("relate", c.relate);
    return c;
}

struct Globals {
    std::string locale;
    std::string config_path;
    bool json_diagnostics = false;
};

struct Context {
    Globals globals;
    std::ostream& out;
    std::ostream& err;

    std::optional<extract::DateOrder> order() const {
        if (globals.locale.empty()) {
            return std::nullopt;
        }
        auto o = extract::parse_date_order(globals.locale);
        if (!o) {
            throw UsageError("unknown --locale '" + globals.locale + "' (use dmy, mdy or ymd)");
        }
        return o;
    }

    // Applies --locale and --config resource overrides.
    pipeline::Corpus corpus(const std::string& path) const {
        json j = read_json(path);
        pipeline::Corpus c = j.contains("objects") ? pipeline::parse_corpus(j)
                                                   : pipeline::ingest_corpus(fs::path(path), order());
        if (auto o = order()) {
            c.resources.order = *o;
        }
        Config cfg = load_config(globals.config_path);
        if (cfg.gazetteer) c.resources.gazetteer = extract::parse_gazetteer(*cfg.gazetteer);
        if (cfg.subject_lexicon) c.resources.lexicon = extract::parse_subject_lexicon(*cfg.subject_lexicon);
        if (cfg.named_periods) c.resources.periods = extract::parse_named_periods(*cfg.named_periods);
        if (cfg.relate) c.resources.relate = relate::parse_relate_config(*cfg.relate);
        return c;
    }

    render::StyleTable style() const {
        Config cfg = load_config(globals.config_path);
        return cfg.style ? render::parse_style_table(*cfg.style) : render::StyleTable::defaults();
    }

    void diagnostics(const std::vector<Diagnostic>& list) const {
        for (const auto& d : list) {
            if (globals.json_diagnostics) {
                err << json(d).dump() << '\n';
            } else {
                err << json(d).at("severity").get<std::string>() << ' ' << d.code << ' ' << d.subject << ": " << d.message
                    << '\n';
            }
        }
    }

    void violations(const std::vector<Violation>& list) const {
        for (const auto& v : list) {
            if (globals.json_diagnostics) {
                err << json(v).dump() << '\n';
            } else {
                err << "violation " << v.rule << ' ' << v.subject << ": " << v.message << '\n';
            }
        }
    }

    void emit(const std::string& path, const std::string& text) const {
        if (path.empty() || path == "-") {
            out << text;
            return;
        }
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        f << text;
        if (!f) {
            throw Error("cannot write " + path);
        }
    }

    void emit(const std::string& path, const json& j) const { emit(path, j.dump(2) + "\n"); }
};

Chronology load_chronology(const std::string& path) { return parse_chronology(read_json(path)); }

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Process chronologies from information objects", "timeflow"};
    app.set_help_all_flag("--help-all", "Show help for every subcommand");
    Globals g;
    app.add_option("--locale", g.locale, "Date order for numeric dates: dmy, mdy or ymd");
    app.add_option("--config", g.config_path, "JSON file with style and lexicon overrides");
    app.add_flag("--json-diagnostics", g.json_diagnostics, "Write diagnostics as JSON lines");
    app.require_subcommand(1);

    std::string manifest, corpus_path, concepts_path, relations_path, chronology_path, out_path;
    std::string store_root, store_id, perspective_path, format = "svg", spacing = "uniform";
    std::string addr, ui_dir;
    long min_days = 30;
    long budget_ms = 30000;
    double threshold = 0.9;
    std::size_t shingle = 8;

    auto* ingest_cmd = app.add_subcommand("ingest", "Read a corpus manifest into a corpus bundle");
    ingest_cmd->add_option("manifest", manifest, "corpus.json manifest")->required();
    ingest_cmd->add_option("-o,--out", out_path, "Output file (default stdout)");
    ingest_cmd->add_option("--root", store_root, "Also save the bundle into this repository");
    ingest_cmd->add_option("--id", store_id, "Repository id for --root (default: corpus name)");

    auto* extract_cmd = app.add_subcommand("extract", "Extract events, entities, subjects and dates");
    extract_cmd->add_option("corpus", corpus_path, "Corpus bundle or manifest")->required();
    extract_cmd->add_option("-o,--out", out_path, "Output file (default stdout)");

    auto* relate_cmd = app.add_subcommand("relate", "Derive typed relations");
    relate_cmd->add_option("corpus", corpus_path, "Corpus bundle or manifest")->required();
    relate_cmd->add_option("concepts", concepts_path, "Output of extract")->required();
    relate_cmd->add_option("-o,--out", out_path, "Output file (default stdout)");

    auto* build_cmd = app.add_subcommand("build", "Assemble and number the chronology");
    build_cmd->add_option("corpus", corpus_path, "Corpus bundle or manifest")->required();
    build_cmd->add_option("concepts", concepts_path, "Output of extract")->required();
    build_cmd->add_option("relations", relations_path, "Output of relate")->required();
    build_cmd->add_option("-o,--out", out_path, "Output file (default stdout)");

    auto* render_cmd = app.add_subcommand("render", "Lay out and render a TimeFlow");
    render_cmd->add_option("chronology", chronology_path, "Chronology JSON")->required();
    render_cmd->add_option("--perspective", perspective_path, "Perspective JSON applied before layout");
    render_cmd->add_option("--format", format, "svg or json")->check(CLI::IsMember({"svg", "json"}));
    render_cmd->add_option("--spacing", spacing, "uniform or proportional")
        ->check(CLI::IsMember({"uniform", "proportional"}));
    render_cmd->add_option("-o,--out", out_path, "Output file (default stdout)");

    auto* gaps_cmd = app.add_subcommand("gaps", "List idle periods between events");
    gaps_cmd->add_option("chronology", chronology_path, "Chronology JSON")->required();
    gaps_cmd->add_option("--min-days", min_days, "Shortest gap to report")->check(CLI::PositiveNumber);

    auto* validate_cmd = app.add_subcommand("validate", "Check a chronology's invariants");
    validate_cmd->add_option("chronology", chronology_path, "Chronology JSON")->required();

    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
    serve_cmd->add_option("--addr", addr, "host:port (default $TIMEFLOW_ADDR or 127.0.0.1:8080)");
    serve_cmd->add_option("--root", store_root, "Repository directory (default $TIMEFLOW_ROOT)");
    serve_cmd->add_option("--ui", ui_dir, "Static files served under /ui");
    serve_cmd->add_option("--budget-ms", budget_ms, "Extraction time before answering 202");

    auto* dedup_cmd = app.add_subcommand("dedup", "Report near-duplicate objects");
    dedup_cmd->add_option("corpus", corpus_path, "Corpus bundle or manifest")->required();
    dedup_cmd->add_option("--threshold", threshold, "Minimum shingle similarity")->check(CLI::Range(0.0, 1.0));
    dedup_cmd->add_option("--shingle", shingle, "Shingle length in characters")->check(CLI::PositiveNumber);

    if (argc <= 1) {
        err << app.help();
        return kExitUsage;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    Context ctx{g, out, err};
    try {
        if (ingest_cmd->parsed()) {
            auto c = pipeline::ingest_corpus(fs::path(manifest), ctx.order());
            ctx.diagnostics(c.diagnostics);
            if (!store_root.empty()) {
                store::Repository repo(store_root);
                std::string id = store_id.empty() ? text::slug(c.name) : store_id;
                err << "saved corpus " << id << " " << repo.save_corpus(id, c) << '\n';
            }
            ctx.emit(out_path, pipeline::to_json(c));
        } else if (extract_cmd->parsed()) {
            auto c = ctx.corpus(corpus_path);
            auto x = pipeline::extract_concepts(c);
            ctx.diagnostics(x.diagnostics);
            ctx.emit(out_path, pipeline::to_json(x));
        } else if (relate_cmd->parsed()) {
            auto c = ctx.corpus(corpus_path);
            auto x = pipeline::parse_extraction(read_json(concepts_path));
            auto d = pipeline::relate_concepts(c, x.concepts);
            ctx.diagnostics(d.diagnostics);
            ctx.emit(out_path, pipeline::to_json(d));
        } else if (build_cmd->parsed()) {
            auto c = ctx.corpus(corpus_path);
            auto x = pipeline::parse_extraction(read_json(concepts_path));
            auto d = pipeline::parse_derivation(read_json(relations_path));
            ctx.emit(out_path, json(pipeline::assemble(c, x, d)));
        } else if (render_cmd->parsed()) {
            Chronology view = load_chronology(chronology_path);
            if (!perspective_path.empty()) {
                view = apply_perspective(std::move(view), parse_perspective(read_json(perspective_path)));
            }
            layout::Options lo;
            lo.spacing = spacing == "proportional" ? layout::Spacing::proportional : layout::Spacing::uniform;
            auto l = layout::compute_layout(view, lo);
            auto style = ctx.style();
            if (format == "svg") {
                ctx.emit(out_path, render::render_svg(l, view, style));
            } else {
                ctx.emit(out_path, render::render_view_json(l, view, style));
            }
        } else if (gaps_cmd->parsed()) {
            json list = json::array();
            for (const auto& gap : chronology::detect_gaps(load_chronology(chronology_path), min_days)) {
                list.push_back({{"start", gap.start.iso()}, {"end", gap.end.iso()}, {"days", gap.length_days()}});
            }
            ctx.emit(out_path, json{{"min_days", min_days}, {"gaps", list}});
        } else if (validate_cmd->parsed()) {
            auto violations = validate(load_chronology(chronology_path));
            ctx.violations(violations);
            if (!violations.empty()) {
                return kExitViolations;
            }
            out << "ok\n";
        } else if (serve_cmd->parsed()) {
            if (addr.empty()) {
                const char* env = std::getenv("TIMEFLOW_ADDR");
                addr = env ? env : "127.0.0.1:8080";
            }
            if (store_root.empty()) {
                const char* env = std::getenv("TIMEFLOW_ROOT");
                if (!env) {
                    throw UsageError("serve needs --root or TIMEFLOW_ROOT");
                }
                store_root = env;
            }
            store::Repository repo(store_root);
            service::Options so;
            so.extract_budget = std::chrono::milliseconds(budget_ms);
            if (!ui_dir.empty()) {
                so.ui_dir = ui_dir;
            }
            service::Server server(repo, so);
            auto address = service::parse_address(addr);
            int port = server.bind(address);
            err << "listening on " << address.host << ':' << port << '\n';
            server.listen();
        } else if (dedup_cmd->parsed()) {
            auto c = ctx.corpus(corpus_path);
            json pairs = json::array();
            for (const auto& d : ingest::detect_near_duplicates(c.objects, threshold, shingle)) {
                pairs.push_back({{"first", d.first}, {"second", d.second}, {"similarity", d.similarity}});
            }
            ctx.emit(out_path, json{{"threshold", threshold}, {"pairs", pairs}});
        }
    } catch (const ValidationError& e) {
        err << e.what() << '\n';
        ctx.violations(e.violations());
        return kExitViolations;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitOk;
}

}  // namespace timeflow::cli
