#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "timeflow/extract.hpp"
#include "timeflow/ingest.hpp"
#include "timeflow/model.hpp"
#include "timeflow/relate.hpp"

namespace timeflow::pipeline {

/// Analyst-curated inputs that travel with a corpus.
struct Resources {
    extract::Gazetteer gazetteer;
    extract::SubjectLexicon lexicon;
    extract::NamedPeriodTable periods;
    extract::EventAnnotations annotations;
    std::vector<relate::AssertedRelation> assertions;
    relate::RelateConfig relate;
    extract::DateOrder order = extract::DateOrder::dmy;
};

/// An ingested corpus: objects plus resources, self-contained so it can be
/// stored and re-run without the source tree.
struct Corpus {
    std::string name;
    std::vector<InformationObject> objects;
    Resources resources;
    std::vector<Diagnostic> diagnostics;
};

/// Loads the manifest's objects and every resource it references.
/// `order` overrides the manifest locale.
Corpus ingest_corpus(const ingest::CorpusManifest& manifest, std::optional<extract::DateOrder> order = {});
Corpus ingest_corpus(const std::filesystem::path& manifest_path, std::optional<extract::DateOrder> order = {});

nlohmann::json to_json(const Corpus& corpus);
Corpus parse_corpus(const nlohmann::json& j);

struct Extraction {
    std::vector<Concept> concepts;          // accepted events, entities, subjects, temporal expressions
    std::vector<Concept> candidate_events;  // heuristic events awaiting confirmation
    std::vector<Diagnostic> diagnostics;
};

nlohmann::json to_json(const Extraction& extraction);
Extraction parse_extraction(const nlohmann::json& j);

Extraction extract_concepts(const Corpus& corpus);
relate::Derivation relate_concepts(const Corpus& corpus, const std::vector<Concept>& concepts);

nlohmann::json to_json(const relate::Derivation& derivation);
relate::Derivation parse_derivation(const nlohmann::json& j);

/// Named after the corpus; `created` is the latest object date so that equal
/// inputs give equal chronologies.
Chronology assemble(const Corpus& corpus, const Extraction& extraction, const relate::Derivation& derivation);

struct Run {
    Extraction extraction;
    relate::Derivation derivation;
    Chronology chronology;
};

/// extract -> relate -> build.
Run run(const Corpus& corpus);

}  // namespace timeflow::pipeline
