#include "timeflow/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "timeflow/hash.hpp"
#include "timeflow/interchange.hpp"
#include "timeflow/text.hpp"

namespace timeflow::ingest {

namespace fs = std::filesystem;

std::string content_hash(std::string_view body) { return sha256_hex(text::normalize_for_similarity(body)); }

namespace {

Diagnostic warn(std::string code, std::string subject, std::string message) {
    return {Diagnostic::Severity::warning, std::move(code), std::move(subject), std::move(message)};
}

struct Header {
    std::string name;  // lowercased
    std::string value;
};

struct MimePart {
    std::vector<Header> headers;
    std::string body;
};

// Splits at the first empty line; unfolds continuation lines.
MimePart split_message(std::string_view raw) {
    MimePart part;
    std::size_t pos = 0;
    std::string current;
    auto flush = [&] {
        if (current.empty()) {
            return;
        }
        auto colon = current.find(':');
        if (colon != std::string::npos) {
            part.headers.push_back({text::lower(text::trim(current.substr(0, colon))), text::trim(current.substr(colon + 1))});
        }
        current.clear();
    };
    while (pos < raw.size()) {
        std::size_t eol = raw.find('\n', pos);
        std::size_t next = eol == std::string_view::npos ? raw.size() : eol + 1;
        std::string_view line = raw.substr(pos, (eol == std::string_view::npos ? raw.size() : eol) - pos);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            pos = next;
            break;
        }
        if ((line.front() == ' ' || line.front() == '\t') && !current.empty()) {
            current += ' ';
            current += text::trim(line);
        } else if (line.find(':') == std::string_view::npos && current.empty() && part.headers.empty()) {
            // Not a header block at all: treat everything as body.
            part.body = std::string(raw);
            return part;
        } else {
            flush();
            current = std::string(line);
        }
        pos = next;
    }
    flush();
    if (pos < raw.size()) {
        part.body = std::string(raw.substr(pos));
    }
    return part;
}

std::optional<std::string> header(const std::vector<Header>& headers, std::string_view name) {
    for (const auto& h : headers) {
        if (h.name == name) {
            return h.value;
        }
    }
    return std::nullopt;
}

// Value of a `key=value` parameter in a structured header (Content-Type etc).
std::optional<std::string> header_param(std::string_view value, std::string_view key) {
    auto lowered = text::lower(value);
    std::string needle = text::lower(key) + "=";
    std::size_t pos = 0;
    while ((pos = lowered.find(needle, pos)) != std::string::npos) {
        if (pos == 0 || lowered[pos - 1] == ';' || lowered[pos - 1] == ' ' || lowered[pos - 1] == '\t') {
            std::size_t start = pos + needle.size();
            if (start < value.size() && value[start] == '"') {
                auto end = value.find('"', start + 1);
                return std::string(value.substr(start + 1, end == std::string_view::npos ? std::string_view::npos
                                                                                          : end - start - 1));
            }
            auto end = value.find(';', start);
            return text::trim(value.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        }
        pos += needle.size();
    }
    return std::nullopt;
}

std::string decode_quoted_printable(std::string_view s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '=') {
            out.push_back(s[i]);
            continue;
        }
        if (i + 1 < s.size() && (s[i + 1] == '\n' || s[i + 1] == '\r')) {
            i += (s[i + 1] == '\r' && i + 2 < s.size() && s[i + 2] == '\n') ? 2 : 1;
            continue;
        }
        if (i + 2 < s.size() && std::isxdigit(static_cast<unsigned char>(s[i + 1])) &&
            std::isxdigit(static_cast<unsigned char>(s[i + 2]))) {
            out.push_back(static_cast<char>(std::stoi(std::string(s.substr(i + 1, 2)), nullptr, 16)));
            i += 2;
            continue;
        }
        out.push_back('=');
    }
    return out;
}

std::string decode_base64(std::string_view s) {
    auto value = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        return -1;
    };
    std::string out;
    unsigned buffer = 0;
    int bits = 0;
    for (char c : s) {
        int v = value(c);
        if (v < 0) {
            continue;
        }
        buffer = (buffer << 6) | static_cast<unsigned>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<char>((buffer >> bits) & 0xff));
        }
    }
    return out;
}

std::string latin1_to_utf8(std::string_view s) {
    std::string out;
    for (unsigned char c : s) {
        if (c < 0x80) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back(static_cast<char>(0xc0 | (c >> 6)));
            out.push_back(static_cast<char>(0x80 | (c & 0x3f)));
        }
    }
    return out;
}

std::string decode_body(const std::vector<Header>& headers, std::string_view body) {
    std::string decoded(body);
    if (auto cte = header(headers, "content-transfer-encoding")) {
        auto enc = text::lower(*cte);
        if (enc == "quoted-printable") {
            decoded = decode_quoted_printable(body);
        } else if (enc == "base64") {
            decoded = decode_base64(body);
        }
    }
    if (auto ct = header(headers, "content-type")) {
        if (auto charset = header_param(*ct, "charset")) {
            auto cs = text::lower(*charset);
            if (cs == "iso-8859-1" || cs == "latin1" || cs == "windows-1252") {
                decoded = latin1_to_utf8(decoded);
            }
        }
    }
    return decoded;
}

std::optional<std::string> attachment_name(const std::vector<Header>& headers) {
    if (auto cd = header(headers, "content-disposition")) {
        if (auto name = header_param(*cd, "filename")) {
            return name;
        }
    }
    if (auto ct = header(headers, "content-type")) {
        if (auto name = header_param(*ct, "name")) {
            return name;
        }
    }
    return std::nullopt;
}

// Collects text parts into `texts` and attachment filenames into `files`.
void walk_mime(const std::vector<Header>& headers, std::string_view body, std::vector<std::string>& texts,
               std::vector<std::string>& files, int depth = 0) {
    auto ct = header(headers, "content-type").value_or("text/plain");
    auto type = text::lower(text::trim(ct.substr(0, ct.find(';'))));
    if (type.rfind("multipart/", 0) == 0 && depth < 8) {
        auto boundary = header_param(ct, "boundary");
        if (!boundary) {
            texts.push_back(std::string(body));
            return;
        }
        std::string delim = "--" + *boundary;
        std::size_t pos = body.find(delim);
        while (pos != std::string_view::npos) {
            std::size_t start = body.find('\n', pos);
            if (start == std::string_view::npos) {
                break;
            }
            if (body.substr(pos + delim.size(), 2) == "--") {
                break;
            }
            std::size_t next = body.find(delim, start);
            std::string_view raw = body.substr(start + 1, (next == std::string_view::npos ? body.size() : next) - start - 1);
            auto part = split_message(raw);
            walk_mime(part.headers, part.body, texts, files, depth + 1);
            pos = next;
        }
        return;
    }
    if (auto name = attachment_name(headers)) {
        files.push_back(*name);
        return;
    }
    if (type.rfind("text/", 0) == 0) {
        auto decoded = decode_body(headers, body);
        while (!decoded.empty() && (decoded.back() == '\n' || decoded.back() == '\r')) {
            decoded.pop_back();
        }
        texts.push_back(std::move(decoded));
    }
}

// Splits an address list on commas outside quotes and angle brackets.
std::vector<std::string> split_addresses(std::string_view value) {
    std::vector<std::string> out;
    std::string current;
    bool quoted = false;
    int angle = 0;
    for (char c : value) {
        if (c == '"') {
            quoted = !quoted;
        } else if (c == '<' && !quoted) {
            ++angle;
        } else if (c == '>' && !quoted && angle > 0) {
            --angle;
        } else if (c == ',' && !quoted && angle == 0) {
            if (auto t = text::trim(current); !t.empty()) {
                out.push_back(t);
            }
            current.clear();
            continue;
        }
        current.push_back(c);
    }
    if (auto t = text::trim(current); !t.empty()) {
        out.push_back(t);
    }
    return out;
}

// Display name when present, else the bare address.
std::string correspondent_name(std::string_view address) {
    auto lt = address.find('<');
    if (lt != std::string_view::npos) {
        auto name = text::trim(address.substr(0, lt));
        if (name.size() >= 2 && name.front() == '"' && name.back() == '"') {
            name = name.substr(1, name.size() - 2);
        }
        if (!name.empty()) {
            return name;
        }
        auto gt = address.find('>', lt);
        return text::trim(address.substr(lt + 1, gt == std::string_view::npos ? std::string_view::npos : gt - lt - 1));
    }
    // "addr (Display Name)" form
    auto lp = address.find('(');
    auto rp = address.rfind(')');
    if (lp != std::string_view::npos && rp != std::string_view::npos && rp > lp + 1) {
        return text::trim(address.substr(lp + 1, rp - lp - 1));
    }
    return text::trim(address);
}

std::vector<std::string> message_ids(std::string_view value) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while ((pos = value.find('<', pos)) != std::string_view::npos) {
        auto end = value.find('>', pos);
        if (end == std::string_view::npos) {
            break;
        }
        out.emplace_back(value.substr(pos + 1, end - pos - 1));
        pos = end + 1;
    }
    if (out.empty()) {
        if (auto t = text::trim(value); !t.empty()) {
            out.push_back(t);
        }
    }
    return out;
}

std::optional<unsigned> month_from_abbrev(std::string_view s) {
    static constexpr std::string_view names[] = {"jan", "feb", "mar", "apr", "may", "jun",
                                                 "jul", "aug", "sep", "oct", "nov", "dec"};
    auto l = text::lower(s.substr(0, 3));
    for (unsigned i = 0; i < 12; ++i) {
        if (l == names[i]) {
            return i + 1;
        }
    }
    return std::nullopt;
}

// Day part of an RFC 5322 date ("Wed, 8 Mar 2017 10:15:00 +0100"); ISO
// dates are accepted too.
std::optional<Date> parse_mail_date(std::string_view value) {
    auto trimmed = text::trim(value);
    if (trimmed.size() >= 10) {
        if (auto iso = Date::parse_iso(std::string_view(trimmed).substr(0, 10))) {
            return iso;
        }
    }
    auto tokens = text::tokenize(trimmed);
    for (std::size_t i = 0; i + 2 < tokens.size(); ++i) {
        auto d = tokens[i].view;
        if (d.empty() || d.size() > 2 || !std::all_of(d.begin(), d.end(), ::isdigit)) {
            continue;
        }
        auto month = month_from_abbrev(tokens[i + 1].view);
        auto y = tokens[i + 2].view;
        if (!month || y.size() != 4 || !std::all_of(y.begin(), y.end(), ::isdigit)) {
            continue;
        }
        return Date::from_ymd(std::stoi(std::string(y)), *month, static_cast<unsigned>(std::stoi(std::string(d))));
    }
    return std::nullopt;
}

}  // namespace

bool is_forward_subject(std::string_view subject, const EmailOptions& options) {
    auto s = text::lower(text::trim(subject));
    for (const auto& prefix : options.forward_prefixes) {
        if (s.rfind(text::lower(prefix), 0) == 0) {
            return true;
        }
    }
    return false;
}

std::string thread_subject(std::string_view subject, const EmailOptions& options) {
    auto s = text::lower(text::trim(subject));
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<std::string> prefixes = options.forward_prefixes;
        prefixes.emplace_back("re:");
        for (const auto& p : prefixes) {
            auto lp = text::lower(p);
            if (s.rfind(lp, 0) == 0) {
                s = text::trim(std::string_view(s).substr(lp.size()));
                changed = true;
            }
        }
    }
    return s;
}

ParsedObject parse_eml(std::string_view bytes, const EmailOptions& options) {
    ParsedObject result;
    auto& obj = result.object;
    obj.kind = ObjectKind::email;

    auto msg = split_message(bytes);
    std::vector<std::string> texts, files;
    walk_mime(msg.headers, msg.body, texts, files);
    for (std::size_t i = 0; i < texts.size(); ++i) {
        obj.body += (i ? "\n" : "") + texts[i];
    }
    obj.content_hash = content_hash(obj.body);
    for (auto& f : files) {
        obj.attachments.push_back({std::move(f), std::nullopt});
    }

    obj.title = header(msg.headers, "subject").value_or("");
    if (auto from = header(msg.headers, "from")) {
        auto addrs = split_addresses(*from);
        if (!addrs.empty()) {
            obj.sender = correspondent_name(addrs.front());
        }
    }
    for (const char* field : {"to", "cc"}) {
        if (auto v = header(msg.headers, field)) {
            for (const auto& a : split_addresses(*v)) {
                obj.recipients.push_back(correspondent_name(a));
            }
        }
    }
    if (auto date = header(msg.headers, "date")) {
        obj.created = parse_mail_date(*date);
        if (!obj.created) {
            result.warnings.push_back(warn("unparseable-date", "", "cannot parse Date header '" + *date + "'"));
        }
    }
    if (auto mid = header(msg.headers, "message-id"); mid && !message_ids(*mid).empty()) {
        obj.message_id = message_ids(*mid).front();
    } else {
        obj.message_id = "synthetic-" + obj.content_hash.substr(0, 24);
        result.warnings.push_back(warn("missing-message-id", "", "no Message-ID; using content hash"));
    }
    if (auto refs = header(msg.headers, "references")) {
        obj.references = message_ids(*refs);
    }
    if (auto irt = header(msg.headers, "in-reply-to"); irt && !message_ids(*irt).empty()) {
        obj.in_reply_to = ObjectLink{message_ids(*irt).front(), true};
    }
    if (is_forward_subject(obj.title, options)) {
        obj.forwarded_from = ObjectLink{obj.references.empty() ? std::string() : obj.references.back(), true};
    }
    return result;
}

ParsedObject parse_document(std::string_view raw) {
    ParsedObject result;
    auto& obj = result.object;
    obj.kind = ObjectKind::document;
    obj.body = std::string(raw);

    auto first_eol = raw.find('\n');
    auto first_line = text::trim(raw.substr(0, first_eol));
    if (first_line == "---" && first_eol != std::string_view::npos) {
        std::size_t pos = first_eol + 1;
        std::vector<std::pair<std::string, std::string>> fields;
        bool closed = false, malformed = false;
        while (pos < raw.size()) {
            auto eol = raw.find('\n', pos);
            auto line = raw.substr(pos, (eol == std::string_view::npos ? raw.size() : eol) - pos);
            pos = eol == std::string_view::npos ? raw.size() : eol + 1;
            auto trimmed = text::trim(line);
            if (trimmed == "---") {
                closed = true;
                break;
            }
            if (trimmed.empty()) {
                continue;
            }
            auto colon = trimmed.find(':');
            if (colon == std::string::npos || colon == 0) {
                malformed = true;
                break;
            }
            fields.emplace_back(text::lower(text::trim(trimmed.substr(0, colon))), text::trim(trimmed.substr(colon + 1)));
        }
        if (!closed || malformed) {
            result.warnings.push_back(warn("malformed-metadata", "", "metadata block is malformed; kept as body"));
        } else {
            obj.body = std::string(raw.substr(pos));
            for (auto& [key, value] : fields) {
                if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
                    value = value.substr(1, value.size() - 2);
                }
                if (key == "title") {
                    obj.title = value;
                } else if (key == "date") {
                    obj.created = Date::parse_iso(value);
                    if (!obj.created) {
                        result.warnings.push_back(warn("unparseable-date", "", "cannot parse date '" + value + "'"));
                    }
                } else if (key == "kind") {
                    if (auto k = parse_object_kind(text::lower(value))) {
                        obj.kind = *k;
                    } else {
                        result.warnings.push_back(warn("unknown-kind", "", "unknown kind '" + value + "'"));
                    }
                } else if (key == "author") {
                    obj.sender = value;
                }
            }
        }
    }
    obj.content_hash = content_hash(obj.body);
    return result;
}

CorpusManifest parse_manifest(const nlohmann::json& j, const fs::path& base_dir) {
    try {
        CorpusManifest m;
        m.name = j.value("name", "");
        m.base_dir = j.contains("base_dir") ? fs::path(j.at("base_dir").get<std::string>()) : base_dir;
        if (m.base_dir.is_relative() && j.contains("base_dir")) {
            m.base_dir = base_dir / m.base_dir;
        }
        for (const auto& e : j.value("entries", nlohmann::json::array())) {
            ManifestEntry entry;
            entry.path = e.at("path").get<std::string>();
            if (e.contains("id")) {
                entry.id = e.at("id").get<std::string>();
            }
            if (e.contains("kind")) {
                auto k = parse_object_kind(e.at("kind").get<std::string>());
                if (!k) {
                    throw ParseError("unknown kind in manifest entry '" + entry.path + "'");
                }
                entry.kind = k;
            }
            if (e.contains("metadata")) {
                entry.overrides = e.at("metadata");
            }
            m.entries.push_back(std::move(entry));
        }
        for (const auto& p : j.value("placeholders", nlohmann::json::array())) {
            PlaceholderBatch batch;
            batch.id_prefix = p.at("id_prefix").get<std::string>();
            batch.count = p.at("count").get<int>();
            batch.title_prefix = p.value("title_prefix", batch.id_prefix);
            if (p.contains("kind")) {
                batch.kind = parse_object_kind(p.at("kind").get<std::string>()).value_or(ObjectKind::other);
            }
            m.placeholders.push_back(std::move(batch));
        }
        m.attachments = j.value("attachments", std::map<std::string, std::string>{});
        auto opt_path = [&](const char* key) -> std::optional<std::string> {
            if (j.contains(key) && !j.at(key).is_null()) {
                return j.at(key).get<std::string>();
            }
            return std::nullopt;
        };
        m.gazetteer = opt_path("gazetteer");
        m.subject_lexicon = opt_path("subject_lexicon");
        m.named_periods = opt_path("named_periods");
        m.event_annotations = opt_path("event_annotations");
        m.assertions = opt_path("assertions");
        m.relate_config = opt_path("relate_config");
        m.locale = j.value("locale", "dmy");
        if (j.contains("forward_prefixes")) {
            m.email.forward_prefixes = j.at("forward_prefixes").get<std::vector<std::string>>();
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed manifest: ") + e.what());
    }
}

CorpusManifest load_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open manifest '" + path.string() + "'");
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("manifest '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_manifest(j, path.parent_path());
}

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw Error("cannot read '" + p.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void apply_overrides(InformationObject& obj, const nlohmann::json& o, std::vector<Diagnostic>& warnings) {
    if (o.contains("title")) {
        obj.title = o.at("title").get<std::string>();
    }
    if (o.contains("created")) {
        auto s = o.at("created").get<std::string>();
        obj.created = Date::parse_iso(s);
        if (!obj.created) {
            warnings.push_back(warn("unparseable-date", obj.id, "cannot parse override date '" + s + "'"));
        }
    }
    if (o.contains("sender")) {
        obj.sender = o.at("sender").get<std::string>();
    }
    if (o.contains("recipients")) {
        obj.recipients = o.at("recipients").get<std::vector<std::string>>();
    }
}

std::string default_id(const InformationObject& obj) {
    if (obj.kind == ObjectKind::email && obj.message_id) {
        return "email-" + sha256_hex(*obj.message_id).substr(0, 12);
    }
    return "doc-" + obj.content_hash.substr(0, 12);
}

}  // namespace

LoadedCorpus load_corpus(const CorpusManifest& manifest) {
    LoadedCorpus out;

    std::map<std::string, std::string> seen_paths;
    for (const auto& e : manifest.entries) {
        if (!seen_paths.emplace(e.path, e.path).second) {
            throw Error("duplicate manifest path '" + e.path + "'");
        }
        if (!fs::exists(manifest.resolve(e.path))) {
            throw Error("missing file '" + manifest.resolve(e.path).string() + "'");
        }
    }
    for (const auto* p : {&manifest.gazetteer, &manifest.subject_lexicon, &manifest.named_periods,
                          &manifest.event_annotations, &manifest.assertions, &manifest.relate_config}) {
        if (*p && !fs::exists(manifest.resolve(**p))) {
            throw Error("missing file '" + manifest.resolve(**p).string() + "'");
        }
    }

    std::map<std::string, std::string> id_to_path;
    auto register_id = [&](const InformationObject& obj) {
        auto [it, inserted] = id_to_path.emplace(obj.id, obj.source_path);
        if (!inserted) {
            throw Error("duplicate object id '" + obj.id + "' in '" + it->second + "' and '" + obj.source_path + "'");
        }
    };

    for (const auto& e : manifest.entries) {
        auto bytes = read_file(manifest.resolve(e.path));
        bool email = e.kind ? *e.kind == ObjectKind::email : fs::path(e.path).extension() == ".eml";
        ParsedObject parsed = email ? parse_eml(bytes, manifest.email) : parse_document(bytes);
        auto& obj = parsed.object;
        obj.source_path = e.path;
        if (e.kind) {
            obj.kind = *e.kind;
        }
        if (obj.title.empty()) {
            obj.title = fs::path(e.path).stem().string();
        }
        obj.id = e.id ? *e.id : default_id(obj);
        apply_overrides(obj, e.overrides, parsed.warnings);
        for (auto& w : parsed.warnings) {
            if (w.subject.empty()) {
                w.subject = obj.id;
            }
            out.warnings.push_back(std::move(w));
        }
        register_id(obj);
        out.objects.push_back(std::move(obj));
    }

    for (const auto& batch : manifest.placeholders) {
        int width = std::max<int>(3, static_cast<int>(std::to_string(batch.count).size()));
        for (int i = 1; i <= batch.count; ++i) {
            std::string n = std::to_string(i);
            n.insert(0, static_cast<std::size_t>(std::max<int>(0, width - static_cast<int>(n.size()))), '0');
            InformationObject obj;
            obj.id = batch.id_prefix + n;
            obj.kind = batch.kind;
            obj.title = batch.title_prefix + " " + n;
            obj.source_path = "placeholder:" + batch.id_prefix;
            obj.content_hash = content_hash("");
            register_id(obj);
            out.objects.push_back(std::move(obj));
        }
    }

    std::sort(out.objects.begin(), out.objects.end(), [](const InformationObject& a, const InformationObject& b) {
        return std::tie(a.source_path, a.id) < std::tie(b.source_path, b.id);
    });

    // Resolution pass.
    std::unordered_map<std::string, std::string> by_message_id;
    for (const auto& o : out.objects) {
        if (o.message_id) {
            by_message_id.emplace(*o.message_id, o.id);
        }
    }
    std::unordered_map<std::string, std::string> by_filename;
    for (const auto& o : out.objects) {
        if (o.source_path.rfind("placeholder:", 0) != 0) {
            by_filename.emplace(fs::path(o.source_path).filename().string(), o.id);
        }
    }
    for (auto& o : out.objects) {
        auto resolve = [&](std::optional<ObjectLink>& link, const char* field) {
            if (!link || !link->external || link->target.empty()) {
                return;
            }
            auto it = by_message_id.find(link->target);
            if (it != by_message_id.end() && it->second != o.id) {
                *link = ObjectLink{it->second, false};
            } else {
                out.warnings.push_back(warn("external-link", o.id,
                                            std::string(field) + " refers to message outside corpus <" +
                                                link->target + ">"));
            }
        };
        resolve(o.in_reply_to, "in_reply_to");
        resolve(o.forwarded_from, "forwarded_from");

        if (o.forwarded_from && o.forwarded_from->external && o.forwarded_from->target.empty()) {
            // No References header: fall back to the latest earlier email with the same thread subject.
            auto subject = thread_subject(o.title, manifest.email);
            const InformationObject* best = nullptr;
            for (const auto& cand : out.objects) {
                if (cand.id == o.id || cand.kind != ObjectKind::email || is_forward_subject(cand.title, manifest.email) ||
                    thread_subject(cand.title, manifest.email) != subject) {
                    continue;
                }
                if (o.created && cand.created && *cand.created > *o.created) {
                    continue;
                }
                if (!best || std::tie(cand.created, cand.id) > std::tie(best->created, best->id)) {
                    best = &cand;
                }
            }
            if (best) {
                o.forwarded_from = ObjectLink{best->id, false};
            } else {
                out.warnings.push_back(warn("unresolved-forward", o.id, "forwarded original not found in corpus"));
            }
        }

        for (auto& a : o.attachments) {
            if (auto it = manifest.attachments.find(a.name); it != manifest.attachments.end()) {
                if (id_to_path.count(it->second)) {
                    a.object_id = it->second;
                } else {
                    out.warnings.push_back(warn("unresolved-attachment", o.id,
                                                "manifest maps '" + a.name + "' to unknown object '" + it->second + "'"));
                }
            } else if (auto f = by_filename.find(a.name); f != by_filename.end() && f->second != o.id) {
                a.object_id = f->second;
            } else {
                out.warnings.push_back(warn("unresolved-attachment", o.id, "attachment '" + a.name + "' not in corpus"));
            }
        }
    }
    return out;
}

namespace {

std::unordered_set<std::u32string> shingles(std::string_view body, std::size_t k) {
    auto cps = text::decode_utf8(text::normalize_for_similarity(body));
    std::unordered_set<std::u32string> out;
    if (cps.empty()) {
        return out;
    }
    if (cps.size() < k) {
        out.insert(cps);
        return out;
    }
    for (std::size_t i = 0; i + k <= cps.size(); ++i) {
        out.insert(cps.substr(i, k));
    }
    return out;
}

double jaccard(const std::unordered_set<std::u32string>& a, const std::unordered_set<std::u32string>& b) {
    if (a.empty() || b.empty()) {
        return 0.0;
    }
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& large = a.size() <= b.size() ? b : a;
    std::size_t inter = 0;
    for (const auto& s : small) {
        inter += large.count(s);
    }
    return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

}  // namespace

double shingle_similarity(std::string_view a, std::string_view b, std::size_t shingle_size) {
    return jaccard(shingles(a, shingle_size), shingles(b, shingle_size));
}

std::vector<NearDuplicate> detect_near_duplicates(const std::vector<InformationObject>& objects, double threshold,
                                                  std::size_t shingle_size) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw Error("near-duplicate threshold must lie in [0,1]");
    }
    std::vector<const InformationObject*> sorted;
    for (const auto& o : objects) {
        sorted.push_back(&o);
    }
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->id < b->id; });
    std::vector<std::unordered_set<std::u32string>> sets;
    sets.reserve(sorted.size());
    for (const auto* o : sorted) {
        sets.push_back(shingles(o->body, shingle_size));
    }
    std::vector<NearDuplicate> out;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sets[i].empty()) {
            continue;
        }
        for (std::size_t j = i + 1; j < sorted.size(); ++j) {
            double s = jaccard(sets[i], sets[j]);
            if (!sets[j].empty() && s >= threshold) {
                out.push_back({sorted[i]->id, sorted[j]->id, s});
            }
        }
    }
    return out;
}

}  // namespace timeflow::ingest
