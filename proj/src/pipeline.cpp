#include "timeflow/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "timeflow/chronology.hpp"
#include "timeflow/interchange.hpp"

namespace timeflow::pipeline {

namespace {

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

Evidence evidence_at(const std::string& holder, std::string_view host, std::size_t begin, std::size_t end) {
    return {holder, begin, end, std::string(host.substr(begin, end - begin))};
}

}  // namespace

Corpus ingest_corpus(const ingest::CorpusManifest& manifest, std::optional<extract::DateOrder> order) {
    Corpus c;
    c.name = manifest.name;
    auto loaded = ingest::load_corpus(manifest);
    c.objects = std::move(loaded.objects);
    c.diagnostics = std::move(loaded.warnings);

    auto& r = c.resources;
    auto load = [&](const std::optional<std::string>& p, auto&& parse) {
        if (p) {
            parse(read_json(manifest.resolve(*p)));
        }
    };
    load(manifest.gazetteer, [&](const auto& j) { r.gazetteer = extract::parse_gazetteer(j); });
    load(manifest.subject_lexicon, [&](const auto& j) { r.lexicon = extract::parse_subject_lexicon(j); });
    load(manifest.named_periods, [&](const auto& j) { r.periods = extract::parse_named_periods(j); });
    load(manifest.event_annotations, [&](const auto& j) { r.annotations = extract::parse_event_annotations(j); });
    load(manifest.assertions, [&](const auto& j) { r.assertions = relate::parse_assertions(j); });
    load(manifest.relate_config, [&](const auto& j) { r.relate = relate::parse_relate_config(j); });
    if (order) {
        r.order = *order;
    } else if (auto parsed = extract::parse_date_order(manifest.locale)) {
        r.order = *parsed;
    } else {
        throw Error("unknown locale '" + manifest.locale + "' in manifest");
    }
    return c;
}

Corpus ingest_corpus(const std::filesystem::path& manifest_path, std::optional<extract::DateOrder> order) {
    return ingest_corpus(ingest::load_manifest(manifest_path), order);
}

nlohmann::json to_json(const Corpus& corpus) {
    const auto& r = corpus.resources;
    return {{"schema_version", kSchemaVersion},
            {"name", corpus.name},
            {"objects", corpus.objects},
            {"gazetteer", extract::to_json(r.gazetteer)},
            {"subject_lexicon", extract::to_json(r.lexicon)},
            {"named_periods", extract::to_json(r.periods)},
            {"event_annotations", extract::to_json(r.annotations)},
            {"assertions", relate::to_json(r.assertions)},
            {"relate_config", relate::to_json(r.relate)},
            {"locale", extract::to_string(r.order)},
            {"diagnostics", corpus.diagnostics}};
}

Corpus parse_corpus(const nlohmann::json& j) {
    try {
        if (j.value("schema_version", "") != kSchemaVersion) {
            throw ParseError("corpus bundle has an unsupported schema_version");
        }
        Corpus c;
        c.name = j.value("name", "");
        c.objects = j.at("objects").get<std::vector<InformationObject>>();
        auto& r = c.resources;
        if (j.contains("gazetteer")) r.gazetteer = extract::parse_gazetteer(j["gazetteer"]);
        if (j.contains("subject_lexicon")) r.lexicon = extract::parse_subject_lexicon(j["subject_lexicon"]);
        if (j.contains("named_periods")) r.periods = extract::parse_named_periods(j["named_periods"]);
        if (j.contains("event_annotations")) r.annotations = extract::parse_event_annotations(j["event_annotations"]);
        if (j.contains("assertions")) r.assertions = relate::parse_assertions(j["assertions"]);
        if (j.contains("relate_config")) r.relate = relate::parse_relate_config(j["relate_config"]);
        auto order = extract::parse_date_order(j.value("locale", "dmy"));
        if (!order) {
            throw ParseError("unknown locale in corpus bundle");
        }
        r.order = *order;
        c.diagnostics = j.value("diagnostics", std::vector<Diagnostic>{});
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed corpus bundle: ") + e.what());
    }
}

Extraction extract_concepts(const Corpus& corpus) {
    const auto& res = corpus.resources;
    Extraction out;

    std::map<std::string, Concept> entities;
    std::map<std::string, Concept> subjects;
    std::vector<Concept> times;
    std::map<std::string, std::set<std::string>> annotations_by_holder;

    for (const auto& g : res.gazetteer.entries) {
        if (g.pinned) {
            entities[extract::entity_id(g.name)] = {extract::entity_id(g.name), Provenance::derived,
                                                     Entity{g.name, g.kind, g.aliases, {}, true}};
        }
    }

    auto analyze = [&](const std::string& holder, std::string_view host, std::optional<Date> reference) {
        extract::ObjectFindings f{holder, {}, {}};
        auto temporal = extract::extract_temporal(host, reference, res.order, res.periods);
        for (auto& w : temporal.warnings) {
            w.subject = holder + ": " + w.subject;
            out.diagnostics.push_back(std::move(w));
        }
        for (const auto& h : temporal.hits) {
            std::string id = "time:" + holder + ":" + std::to_string(h.begin);
            times.push_back({id, Provenance::derived,
                             TemporalExpression{h.surface, h.interval, evidence_at(holder, host, h.begin, h.end)}});
            annotations_by_holder[holder].insert(id);
        }
        f.temporal = std::move(temporal.hits);

        f.entities = extract::extract_entities(host, res.gazetteer);
        for (const auto& m : f.entities) {
            if (m.candidate) {
                out.diagnostics.push_back({Diagnostic::Severity::info, "entity-candidate", holder,
                                           "unlisted name '" + m.surface + "' needs review"});
                continue;
            }
            auto [it, fresh] = entities.try_emplace(m.entity_id);
            if (fresh) {
                const auto& g = *std::find_if(res.gazetteer.entries.begin(), res.gazetteer.entries.end(),
                                              [&](const auto& e) { return e.name == m.name; });
                it->second = {m.entity_id, Provenance::derived, Entity{g.name, g.kind, g.aliases, {}, g.pinned}};
            }
            std::get<Entity>(it->second.value).mentions.push_back(evidence_at(holder, host, m.begin, m.end));
            annotations_by_holder[holder].insert(m.entity_id);
        }

        for (const auto& s : extract::assign_subjects(host, res.lexicon)) {
            auto [it, fresh] = subjects.try_emplace(s.subject_id);
            if (fresh) {
                const auto& entry = *std::find_if(res.lexicon.subjects.begin(), res.lexicon.subjects.end(),
                                                  [&](const auto& e) { return e.label == s.label; });
                it->second = {s.subject_id, Provenance::derived, Subject{entry.label, entry.terms, {}}};
            }
            std::get<Subject>(it->second.value).mentions.push_back(evidence_at(holder, host, s.begin, s.end));
            annotations_by_holder[holder].insert(s.subject_id);
        }
        return f;
    };

    std::vector<extract::ObjectFindings> findings;
    for (const auto& o : corpus.objects) {
        findings.push_back(analyze(o.id, o.body, o.created));
    }
    auto proposals = extract::propose_events(corpus.objects, res.annotations, findings);
    for (auto& c : proposals.accepted) {
        Event& e = *c.event();
        std::string host = event_text(e);
        analyze(c.id, host, e.anchor ? std::optional(e.anchor->start) : std::nullopt);
        const auto& ann = annotations_by_holder[c.id];
        e.annotations.assign(ann.begin(), ann.end());
        out.concepts.push_back(std::move(c));
    }
    out.candidate_events = std::move(proposals.candidates);

    for (auto& [id, c] : entities) {
        auto& m = std::get<Entity>(c.value).mentions;
        std::sort(m.begin(), m.end());
        out.concepts.push_back(std::move(c));
    }
    for (auto& [id, c] : subjects) {
        auto& m = std::get<Subject>(c.value).mentions;
        std::sort(m.begin(), m.end());
        out.concepts.push_back(std::move(c));
    }
    out.concepts.insert(out.concepts.end(), times.begin(), times.end());
    std::sort(out.concepts.begin(), out.concepts.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
}

relate::Derivation relate_concepts(const Corpus& corpus, const std::vector<Concept>& concepts) {
    auto config = corpus.resources.relate;
    if (corpus.resources.lexicon.tfidf && !config.tfidf_threshold) {
        config.tfidf_threshold = corpus.resources.lexicon.cosine_threshold;
    }
    return relate::derive_all(corpus.objects, concepts, corpus.resources.assertions, config);
}

nlohmann::json to_json(const Extraction& extraction) {
    return {{"schema_version", kSchemaVersion},
            {"concepts", extraction.concepts},
            {"candidate_events", extraction.candidate_events},
            {"diagnostics", extraction.diagnostics}};
}

Extraction parse_extraction(const nlohmann::json& j) {
    try {
        Extraction e;
        e.concepts = j.at("concepts").get<std::vector<Concept>>();
        e.candidate_events = j.value("candidate_events", std::vector<Concept>{});
        e.diagnostics = j.value("diagnostics", std::vector<Diagnostic>{});
        return e;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed extraction: ") + e.what());
    }
}

nlohmann::json to_json(const relate::Derivation& derivation) {
    return {{"schema_version", kSchemaVersion},
            {"relations", derivation.relations},
            {"proposals", derivation.proposals},
            {"diagnostics", derivation.diagnostics}};
}

relate::Derivation parse_derivation(const nlohmann::json& j) {
    try {
        relate::Derivation d;
        d.relations = j.at("relations").get<std::vector<Relation>>();
        d.proposals = j.value("proposals", std::vector<Relation>{});
        d.diagnostics = j.value("diagnostics", std::vector<Diagnostic>{});
        return d;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed relations: ") + e.what());
    }
}

Chronology assemble(const Corpus& corpus, const Extraction& extraction, const relate::Derivation& derivation) {
    ChronologyMeta meta;
    meta.name = corpus.name;
    std::optional<Date> latest;
    for (const auto& o : corpus.objects) {
        if (o.created && (!latest || *o.created > *latest)) {
            latest = o.created;
        }
    }
    meta.created = latest ? latest->iso() : "";
    return chronology::build(corpus.objects, extraction.concepts, derivation.relations, std::move(meta));
}

Run run(const Corpus& corpus) {
    Run r;
    r.extraction = extract_concepts(corpus);
    r.derivation = relate_concepts(corpus, r.extraction.concepts);
    r.chronology = assemble(corpus, r.extraction, r.derivation);
    return r;
}

}  // namespace timeflow::pipeline
