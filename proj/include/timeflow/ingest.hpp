#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "timeflow/error.hpp"
#include "timeflow/model.hpp"

namespace timeflow::ingest {

struct ParsedObject {
    InformationObject object;
    std::vector<Diagnostic> warnings;
};

struct EmailOptions {
    /// Case-insensitive subject prefixes marking a forwarded message.
    std::vector<std::string> forward_prefixes{"fwd:", "fw:"};
};

/// Parses one RFC 5322-style message. Interprets From, To, Cc, Date, Subject,
/// Message-ID, In-Reply-To, References and attachment filenames; everything
/// else ends up in the body. Link targets are left external (raw
/// Message-IDs) until load_corpus resolves them.
ParsedObject parse_eml(std::string_view bytes, const EmailOptions& options = {});

/// Parses a text/markdown document with an optional leading metadata block
/// delimited by "---" lines (keys: title, date, kind, author).
ParsedObject parse_document(std::string_view text);

/// True when `subject` starts with one of the forward prefixes.
bool is_forward_subject(std::string_view subject, const EmailOptions& options = {});

/// Subject without any leading Re:/Fwd:/Fw: prefixes, lowercased and trimmed.
std::string thread_subject(std::string_view subject, const EmailOptions& options = {});

struct ManifestEntry {
    std::string path;  // relative to the manifest directory
    std::optional<std::string> id;
    std::optional<ObjectKind> kind;
    nlohmann::json overrides = nlohmann::json::object();  // title, created, sender, recipients
};

/// Generated stand-ins for bulk texts that are known to exist but are not
/// bundled (e.g. "200 additional texts").
struct PlaceholderBatch {
    std::string id_prefix;
    int count = 0;
    ObjectKind kind = ObjectKind::other;
    std::string title_prefix;
};

struct CorpusManifest {
    std::string name;
    std::filesystem::path base_dir;
    std::vector<ManifestEntry> entries;
    std::vector<PlaceholderBatch> placeholders;
    std::map<std::string, std::string> attachments;  // attachment filename -> object id
    std::optional<std::string> gazetteer;
    std::optional<std::string> subject_lexicon;
    std::optional<std::string> named_periods;
    std::optional<std::string> event_annotations;
    std::optional<std::string> assertions;
    std::optional<std::string> relate_config;
    std::string locale = "dmy";
    EmailOptions email;

    std::filesystem::path resolve(const std::string& relative) const { return base_dir / relative; }
};

/// Reads "corpus.json"; relative paths resolve against its directory unless
/// the manifest carries an explicit "base_dir".
CorpusManifest load_manifest(const std::filesystem::path& path);
CorpusManifest parse_manifest(const nlohmann::json& j, const std::filesystem::path& base_dir);

struct LoadedCorpus {
    std::vector<InformationObject> objects;
    std::vector<Diagnostic> warnings;
};

/// Parses every entry, generates placeholders, then resolves Message-ID and
/// attachment cross-references. Objects are ordered by (source_path, id).
/// Throws Error on missing files or duplicate ids (naming both paths).
LoadedCorpus load_corpus(const CorpusManifest& manifest);

/// Character 8-gram Jaccard similarity over normalized bodies. Empty bodies
/// have no shingles and score 0 against everything.
double shingle_similarity(std::string_view a, std::string_view b, std::size_t shingle_size = 8);

struct NearDuplicate {
    std::string first;
    std::string second;
    double similarity = 0;
};

/// Pairs (first < second) whose similarity is at least `threshold`.
std::vector<NearDuplicate> detect_near_duplicates(const std::vector<InformationObject>& objects,
                                                  double threshold = 0.9, std::size_t shingle_size = 8);

std::string content_hash(std::string_view body);

}  // namespace timeflow::ingest
