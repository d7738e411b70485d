#include "timeflow/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <sstream>

#include "timeflow/hash.hpp"
#include "timeflow/interchange.hpp"

namespace timeflow::store {

namespace fs = std::filesystem;

namespace {

constexpr Kind kKinds[] = {Kind::corpus, Kind::chronology, Kind::perspective};

std::optional<Kind> parse_kind(std::string_view s) {
    for (auto k : kKinds) {
        if (to_string(k) == s) {
            return k;
        }
    }
    return std::nullopt;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw NotFoundError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Writes next to `path` and renames over it, so readers see either the old
// or the new bytes.
void write_atomically(const fs::path& path, const std::string& bytes, const std::function<void()>& before_rename) {
    static std::atomic<unsigned long> counter{0};
    fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << bytes;
        out.flush();
        if (!out) {
            throw Error("cannot write " + tmp.string());
        }
    }
    try {
        if (before_rename) {
            before_rename();
        }
        fs::rename(tmp, path);
    } catch (...) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
}

// Exclusive advisory lock on a file, so saves from other processes on the
// same root are serialized too.
class FileLock {
public:
    explicit FileLock(const fs::path& path) {
        fs::create_directories(path.parent_path());
        fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
        if (fd_ < 0 || ::flock(fd_, LOCK_EX) != 0) {
            if (fd_ >= 0) {
                ::close(fd_);
            }
            throw Error("cannot lock " + path.string());
        }
    }
    ~FileLock() {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

private:
    int fd_ = -1;
};

// Tag recorded in a resource file; "" when absent, nullopt when unreadable.
std::optional<std::string> tag_on_disk(const fs::path& path) {
    if (!fs::exists(path)) {
        return std::string();
    }
    try {
        return nlohmann::json::parse(read_file(path)).at("tag").get<std::string>();
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

void check_id(const std::string& id) {
    if (!valid_id(id)) {
        throw ValidationError({{id, "resource-id", "id must use letters, digits, '.', '_' or '-'"}});
    }
}

}  // namespace

std::string_view to_string(Kind kind) {
    switch (kind) {
    case Kind::corpus: return "corpus";
    case Kind::chronology: return "chronology";
    case Kind::perspective: return "perspective";
    }
    return "chronology";
}

std::string_view directory_of(Kind kind) {
    switch (kind) {
    case Kind::corpus: return "corpora";
    case Kind::chronology: return "chronologies";
    case Kind::perspective: return "perspectives";
    }
    return "chronologies";
}

std::string version_tag(const nlohmann::json& document) { return sha256_hex(document.dump()); }

bool valid_id(std::string_view id) {
    if (id.empty() || id.size() > 200 || id.front() == '.') {
        return false;
    }
    return std::all_of(id.begin(), id.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-';
    });
}

Repository::Repository(fs::path root) : root_(std::move(root)) {
    for (auto k : kKinds) {
        fs::create_directories(root_ / directory_of(k));
    }
    fs::create_directories(root_ / "history");
    fs::create_directories(root_ / "locks");

    // Histories come from the previous index; current tags come from disk.
    std::map<std::pair<Kind, std::string>, std::vector<std::string>> histories;
    if (fs::exists(root_ / "index.json")) {
        try {
            auto j = nlohmann::json::parse(read_file(root_ / "index.json"));
            for (const auto& e : j.at("entries")) {
                if (auto k = parse_kind(e.at("kind").get<std::string>())) {
                    histories[{*k, e.at("id").get<std::string>()}] =
                        e.value("history", std::vector<std::string>{});
                }
            }
        } catch (const nlohmann::json::exception&) {
            // A damaged index is rebuilt from the resource files.
        }
    }
    for (auto k : kKinds) {
        for (const auto& f : fs::directory_iterator(root_ / directory_of(k))) {
            if (f.path().extension() != ".json") {
                continue;
            }
            std::string id = f.path().stem().string();
            std::string tag;
            try {
                tag = nlohmann::json::parse(read_file(f.path())).at("tag").get<std::string>();
            } catch (const nlohmann::json::exception&) {
                tag = "";  // load() reports the corruption
            }
            Entry e{k, id, tag, (fs::path(directory_of(k)) / f.path().filename()).generic_string(), {}};
            e.history = histories[{k, id}];
            if (!tag.empty() && (e.history.empty() || e.history.back() != tag)) {
                e.history.push_back(tag);
            }
            index_[{k, id}] = std::move(e);
        }
    }
    std::lock_guard lock(index_mutex_);
    write_index_locked();
}

fs::path Repository::resource_path(Kind kind, const std::string& id) const {
    return root_ / directory_of(kind) / (id + ".json");
}

fs::path Repository::version_path(Kind kind, const std::string& id, const std::string& tag) const {
    return root_ / "history" / directory_of(kind) / id / (tag + ".json");
}

std::mutex& Repository::lock_for(Kind kind, const std::string& id) {
    std::lock_guard lock(locks_mutex_);
    auto& m = locks_[{kind, id}];
    if (!m) {
        m = std::make_unique<std::mutex>();
    }
    return *m;
}

void Repository::write_index_locked() const {
    auto entries = nlohmann::json::array();
    for (const auto& [key, e] : index_) {
        entries.push_back(
            {{"kind", to_string(e.kind)}, {"id", e.id}, {"tag", e.tag}, {"path", e.path}, {"history", e.history}});
    }
    nlohmann::json j = {{"schema_version", kSchemaVersion}, {"entries", entries}};
    write_atomically(root_ / "index.json", j.dump(2) + "\n", nullptr);
}

std::string Repository::save(Kind kind, const std::string& id, const nlohmann::json& document,
                             const std::optional<std::string>& expected) {
    check_id(id);
    std::lock_guard write_lock(lock_for(kind, id));
    FileLock file_lock(root_ / "locks" / directory_of(kind) / (id + ".lock"));

    // The file, not the index, is authoritative: another process may have
    // committed since this repository was opened.
    auto have = tag_on_disk(resource_path(kind, id));
    if (expected && (!have || *expected != *have)) {
        throw ConflictError(std::string(to_string(kind)) + " '" + id + "' is at version " +
                            (!have ? "unreadable" : have->empty() ? "none" : *have) + ", not " +
                            (expected->empty() ? "none" : *expected));
    }

    std::string tag = version_tag(document);
    if (have && *have == tag && entry(kind, id)) {
        return tag;
    }
    nlohmann::json envelope = {{"kind", to_string(kind)}, {"id", id}, {"tag", tag}, {"document", document}};
    std::string bytes = envelope.dump(2) + "\n";
    write_atomically(version_path(kind, id, tag), bytes, nullptr);
    write_atomically(resource_path(kind, id), bytes, [&] {
        if (before_commit) {
            before_commit(kind, id);
        }
    });

    std::lock_guard lock(index_mutex_);
    Entry& e = index_[{kind, id}];
    e.kind = kind;
    e.id = id;
    e.tag = tag;
    e.path = (fs::path(directory_of(kind)) / (id + ".json")).generic_string();
    for (const auto& t : {have.value_or(""), tag}) {
        if (!t.empty() && (e.history.empty() || e.history.back() != t)) {
            e.history.push_back(t);
        }
    }
    write_index_locked();
    return tag;
}

Stored Repository::read_envelope(const fs::path& path, Kind kind, const std::string& id) const {
    std::string bytes = read_file(path);
    Stored s;
    try {
        auto envelope = nlohmann::json::parse(bytes);
        s.document = envelope.at("document");
        s.tag = envelope.at("tag").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw CorruptError(std::string(to_string(kind)) + " '" + id + "' is unreadable: " + e.what());
    }
    if (version_tag(s.document) != s.tag) {
        throw CorruptError(std::string(to_string(kind)) + " '" + id + "' does not match its version tag");
    }
    return s;
}

Stored Repository::load(Kind kind, const std::string& id) const {
    if (!valid_id(id) || !fs::exists(resource_path(kind, id))) {
        throw NotFoundError("no " + std::string(to_string(kind)) + " '" + id + "'");
    }
    return read_envelope(resource_path(kind, id), kind, id);
}

Stored Repository::load_version(Kind kind, const std::string& id, const std::string& tag) const {
    bool hex = tag.size() == 64 && std::all_of(tag.begin(), tag.end(), [](char c) {
                   return std::isdigit(static_cast<unsigned char>(c)) || (c >= 'a' && c <= 'f');
               });
    if (!valid_id(id) || !hex || !fs::exists(version_path(kind, id, tag))) {
        throw NotFoundError("no version " + tag + " of " + std::string(to_string(kind)) + " '" + id + "'");
    }
    Stored s = read_envelope(version_path(kind, id, tag), kind, id);
    if (s.tag != tag) {
        throw CorruptError("version file " + tag + " holds " + s.tag);
    }
    return s;
}

bool Repository::exists(Kind kind, const std::string& id) const {
    return valid_id(id) && fs::exists(resource_path(kind, id));
}

std::optional<Entry> Repository::entry(Kind kind, const std::string& id) const {
    std::lock_guard lock(index_mutex_);
    auto it = index_.find({kind, id});
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::vector<Entry> Repository::list(Kind kind) const {
    std::lock_guard lock(index_mutex_);
    std::vector<Entry> out;
    for (const auto& [key, e] : index_) {
        if (key.first == kind) {
            out.push_back(e);
        }
    }
    return out;
}

std::string Repository::save_chronology(const std::string& id, const Chronology& chronology,
                                        const std::optional<std::string>& expected) {
    if (auto v = validate(chronology); !v.empty()) {
        throw ValidationError(std::move(v));
    }
    return save(Kind::chronology, id, nlohmann::json(chronology), expected);
}

std::pair<Chronology, std::string> Repository::load_chronology(const std::string& id) const {
    auto s = load(Kind::chronology, id);
    try {
        return {parse_chronology(s.document), s.tag};
    } catch (const ParseError& e) {
        throw CorruptError("chronology '" + id + "': " + e.what());
    }
}

std::string Repository::save_corpus(const std::string& id, const pipeline::Corpus& corpus,
                                    const std::optional<std::string>& expected) {
    return save(Kind::corpus, id, pipeline::to_json(corpus), expected);
}

std::pair<pipeline::Corpus, std::string> Repository::load_corpus(const std::string& id) const {
    auto s = load(Kind::corpus, id);
    try {
        return {pipeline::parse_corpus(s.document), s.tag};
    } catch (const ParseError& e) {
        throw CorruptError("corpus '" + id + "': " + e.what());
    }
}

std::string Repository::save_perspective(const std::string& id, const Perspective& perspective,
                                         const std::optional<std::string>& expected) {
    return save(Kind::perspective, id, nlohmann::json(perspective), expected);
}

std::pair<Perspective, std::string> Repository::load_perspective(const std::string& id) const {
    auto s = load(Kind::perspective, id);
    try {
        return {parse_perspective(s.document), s.tag};
    } catch (const ParseError& e) {
        throw CorruptError("perspective '" + id + "': " + e.what());
    }
}

}  // namespace timeflow::store
