#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "timeflow/model.hpp"
#include "timeflow/pipeline.hpp"

namespace timeflow::store {

enum class Kind { corpus, chronology, perspective };

std::string_view to_string(Kind kind);
/// Directory name under the repository root ("corpora", ...).
std::string_view directory_of(Kind kind);

struct Entry {
    Kind kind = Kind::chronology;
    std::string id;
    std::string tag;
    std::string path;                  // relative to the root
    std::vector<std::string> history;  // every committed tag, oldest first

    bool operator==(const Entry&) const = default;
};

struct Stored {
    nlohmann::json document;
    std::string tag;
};

/// Version tag of a document: SHA-256 of its compact serialization. Object
/// keys are sorted, so equal documents give equal tags.
std::string version_tag(const nlohmann::json& document);

/// True for ids usable as file names: [A-Za-z0-9._-], not starting with '.'.
bool valid_id(std::string_view id);

/// Plain-directory JSON store. Each resource lives in
/// root/<kind dir>/<id>.json as {kind, id, tag, document}; every committed
/// version is also kept under root/history/<kind dir>/<id>/<tag>.json so an
/// earlier version can be restored. root/index.json lists all entries.
///
/// Writes go to a temporary file that is renamed into place. Saves on the same
/// (kind, id) are serialized; a save with an expected tag fails with
/// ConflictError unless the current tag still matches.
class Repository {
public:
    /// Creates the directory layout when missing and reconciles the index
    /// with the files on disk.
    explicit Repository(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }

    /// `expected`: nullopt skips the check; "" requires that the resource does
    /// not exist yet; anything else must equal the current tag.
    std::string save(Kind kind, const std::string& id, const nlohmann::json& document,
                     const std::optional<std::string>& expected = std::nullopt);

    /// Throws NotFoundError for unknown ids, CorruptError when the stored
    /// document no longer hashes to its tag.
    Stored load(Kind kind, const std::string& id) const;
    Stored load_version(Kind kind, const std::string& id, const std::string& tag) const;

    bool exists(Kind kind, const std::string& id) const;
    std::optional<Entry> entry(Kind kind, const std::string& id) const;
    std::vector<Entry> list(Kind kind) const;

    // Typed access. Saving a chronology validates it first (ValidationError).
    std::string save_chronology(const std::string& id, const Chronology& chronology,
                                const std::optional<std::string>& expected = std::nullopt);
    std::pair<Chronology, std::string> load_chronology(const std::string& id) const;
    std::string save_corpus(const std::string& id, const pipeline::Corpus& corpus,
                            const std::optional<std::string>& expected = std::nullopt);
    std::pair<pipeline::Corpus, std::string> load_corpus(const std::string& id) const;
    std::string save_perspective(const std::string& id, const Perspective& perspective,
                                 const std::optional<std::string>& expected = std::nullopt);
    std::pair<Perspective, std::string> load_perspective(const std::string& id) const;

    /// Test hook: runs after the temporary file is written and before it is
    /// renamed into place. Throwing from it simulates an interrupted save.
    std::function<void(Kind, const std::string&)> before_commit;

private:
    std::filesystem::path resource_path(Kind kind, const std::string& id) const;
    std::filesystem::path version_path(Kind kind, const std::string& id, const std::string& tag) const;
    std::mutex& lock_for(Kind kind, const std::string& id);
    void write_index_locked() const;
    Stored read_envelope(const std::filesystem::path& path, Kind kind, const std::string& id) const;

    std::filesystem::path root_;
    mutable std::mutex index_mutex_;
    std::map<std::pair<Kind, std::string>, Entry> index_;
    std::mutex locks_mutex_;
    std::map<std::pair<Kind, std::string>, std::unique_ptr<std::mutex>> locks_;
};

}  // namespace timeflow::store
