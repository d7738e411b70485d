#include <doctest.h>

#include <fstream>
#include <map>

#include "oracles.hpp"
#include "support.hpp"
#include "timeflow/ingest.hpp"

using namespace timeflow;
using namespace timeflow::ingest;

namespace {

void write(const std::filesystem::path& p, const std::string& s) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << s;
}

std::string mail(const std::string& mid, const std::string& subject, const std::string& date,
                 const std::string& extra_headers, const std::string& body) {
    return "From: Alice Example <alice@example.org>\r\nTo: Bob <bob@example.org>, carol@example.org\r\n"
           "Date: " + date + "\r\nSubject: " + subject + "\r\nMessage-ID: <" + mid + ">\r\n" + extra_headers +
           "\r\n" + body + "\r\n";
}

// Header values by name, reading unfolded "Name: value" lines up to the blank
// line, independent of the library's parser.
std::map<std::string, std::string> headers_of(const std::string& raw) {
    std::map<std::string, std::string> out;
    std::size_t pos = 0;
    while (pos < raw.size()) {
        auto eol = raw.find("\r\n", pos);
        std::string line = raw.substr(pos, eol - pos);
        pos = eol + 2;
        if (line.empty()) break;
        auto colon = line.find(':');
        std::string name = line.substr(0, colon);
        for (auto& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        out[name] = line.substr(colon + 2);
    }
    return out;
}

std::string strip_angles(std::string s) {
    if (s.size() >= 2 && s.front() == '<') s = s.substr(1, s.size() - 2);
    return s;
}

}  // namespace

TEST_CASE("an email's headers, parts and attachments are read") {
    std::string raw =
        "From: \"Palmen, Sarah\" <s.palmen@example.org>\r\n"
        "To: MT Member 1 <mt1@example.org>\r\n"
        "Cc: archive@example.org\r\n"
        "Date: Mon, 16 Oct 2017 09:12:00 +0200\r\n"
        "Subject: Re: Bevindingen\r\n"
        "Message-ID: <m2@example.org>\r\n"
        "In-Reply-To: <m1@example.org>\r\n"
        "References: <m0@example.org> <m1@example.org>\r\n"
        "Content-Type: multipart/mixed; boundary=\"b1\"\r\n"
        "\r\n"
        "--b1\r\n"
        "Content-Type: text/plain; charset=utf-8\r\n"
        "Content-Transfer-Encoding: quoted-printable\r\n"
        "\r\n"
        "Caf=C3=A9 findings attached.\r\n"
        "--b1\r\n"
        "Content-Type: application/pdf\r\n"
        "Content-Disposition: attachment; filename=\"memo.pdf\"\r\n"
        "Content-Transfer-Encoding: base64\r\n"
        "\r\n"
        "JVBERi0=\r\n"
        "--b1--\r\n";
    auto p = parse_eml(raw);
    const auto& o = p.object;
    CHECK(o.kind == ObjectKind::email);
    CHECK(o.title == "Re: Bevindingen");
    CHECK(o.sender == std::optional<std::string>("Palmen, Sarah"));
    CHECK(o.recipients == std::vector<std::string>{"MT Member 1", "archive@example.org"});
    CHECK(o.created == Date::from_ymd(2017, 10, 16));
    CHECK(o.message_id == std::optional<std::string>("m2@example.org"));
    CHECK(o.references == std::vector<std::string>{"m0@example.org", "m1@example.org"});
    REQUIRE(o.in_reply_to);
    CHECK(o.in_reply_to->target == "m1@example.org");
    CHECK(o.in_reply_to->external);
    CHECK_FALSE(o.forwarded_from);
    CHECK(o.body.find("Café findings attached.") != std::string::npos);
    REQUIRE(o.attachments.size() == 1);
    CHECK(o.attachments[0].name == "memo.pdf");
    CHECK(o.content_hash == content_hash(o.body));
}

TEST_CASE("messages without Message-ID get a synthetic one and a warning") {
    auto p = parse_eml("Subject: hi\r\n\r\nbody\r\n");
    REQUIRE(p.object.message_id);
    CHECK(p.object.message_id->rfind("synthetic-", 0) == 0);
    REQUIRE(p.warnings.size() == 1);
    CHECK(p.warnings[0].code == "missing-message-id");
}

TEST_CASE("forward subjects and thread subjects") {
    CHECK(is_forward_subject("Fwd: Bevindingen"));
    CHECK(is_forward_subject("  FW: x"));
    CHECK_FALSE(is_forward_subject("Re: Fwd: x"));
    CHECK(thread_subject("Re: Fwd: RE: Bevindingen CAF 11 ") == "bevindingen caf 11");
}

TEST_CASE("document metadata blocks") {
    auto p = parse_document("---\ntitle: \"Memo Palmen\"\ndate: 2017-10-13\nkind: report\nauthor: Sarah Palmen\n---\nBody text.\n");
    CHECK(p.object.title == "Memo Palmen");
    CHECK(p.object.created == Date::from_ymd(2017, 10, 13));
    CHECK(p.object.kind == ObjectKind::report);
    CHECK(p.object.sender == std::optional<std::string>("Sarah Palmen"));
    CHECK(p.object.body == "Body text.\n");
    CHECK(p.warnings.empty());

    auto bad = parse_document("---\ntitle: x\nno colon line\n---\nrest");
    CHECK(bad.object.body.rfind("---", 0) == 0);
    REQUIRE(bad.warnings.size() == 1);
    CHECK(bad.warnings[0].code == "malformed-metadata");
}

TEST_CASE("threads resolve by Message-ID as a header walk predicts") {
    testing::TempDir dir;
    std::map<std::string, std::string> files = {
        {"a.eml", mail("a@x", "Budget", "Mon, 2 Jan 2017 10:00:00 +0000", "", "Original.")},
        {"b.eml", mail("b@x", "Re: Budget", "Tue, 3 Jan 2017 10:00:00 +0000",
                       "In-Reply-To: <a@x>\r\nReferences: <a@x>\r\n", "Reply.")},
        {"c.eml", mail("c@x", "Fwd: Budget", "Wed, 4 Jan 2017 10:00:00 +0000",
                       "References: <a@x> <b@x>\r\n", "Forwarding.")},
        {"d.eml", mail("d@x", "Re: Other", "Thu, 5 Jan 2017 10:00:00 +0000",
                       "In-Reply-To: <elsewhere@y>\r\n", "Outside reply.")},
    };
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [name, raw] : files) {
        write(dir.path() / name, raw);
        entries.push_back({{"path", name}, {"id", name.substr(0, 1)}});
    }
    auto loaded = load_corpus(parse_manifest({{"name", "t"}, {"entries", entries}}, dir.path()));

    // Oracle: Message-ID -> file id, then In-Reply-To and last References
    // entry of "Fwd:" messages looked up directly.
    std::map<std::string, std::string> by_mid;
    for (const auto& [name, raw] : files) by_mid[strip_angles(headers_of(raw).at("message-id"))] = name.substr(0, 1);
    for (const auto& o : loaded.objects) {
        auto h = headers_of(files.at(o.id + ".eml"));
        if (h.count("in-reply-to")) {
            auto target = strip_angles(h.at("in-reply-to"));
            REQUIRE(o.in_reply_to);
            if (by_mid.count(target)) {
                CHECK_FALSE(o.in_reply_to->external);
                CHECK(o.in_reply_to->target == by_mid.at(target));
            } else {
                CHECK(o.in_reply_to->external);
            }
        } else {
            CHECK_FALSE(o.in_reply_to);
        }
        if (h.at("subject").rfind("Fwd:", 0) == 0) {
            auto refs = h.at("references");
            auto last = strip_angles(refs.substr(refs.rfind('<')));
            REQUIRE(o.forwarded_from);
            CHECK(o.forwarded_from->target == by_mid.at(last));
        }
    }
    bool external_warning = false;
    for (const auto& w : loaded.warnings) external_warning |= (w.code == "external-link" && w.subject == "d");
    CHECK(external_warning);
}

TEST_CASE("forwards without References fall back to the thread subject") {
    testing::TempDir dir;
    write(dir.path() / "a.eml", mail("a@x", "Budget", "Mon, 2 Jan 2017 10:00:00 +0000", "", "Original."));
    write(dir.path() / "f.eml", mail("f@x", "Fwd: Budget", "Tue, 3 Jan 2017 10:00:00 +0000", "", "See below."));
    auto loaded = load_corpus(parse_manifest(
        {{"entries", {{{"path", "a.eml"}, {"id", "a"}}, {{"path", "f.eml"}, {"id", "f"}}}}}, dir.path()));
    const auto& f = loaded.objects[1];
    REQUIRE(f.forwarded_from);
    CHECK(f.forwarded_from->target == "a");
    CHECK_FALSE(f.forwarded_from->external);
}

TEST_CASE("manifest errors name the problem") {
    testing::TempDir dir;
    write(dir.path() / "a.md", "one");
    write(dir.path() / "b.md", "two");
    auto dup = parse_manifest({{"entries", {{{"path", "a.md"}, {"id", "x"}}, {{"path", "b.md"}, {"id", "x"}}}}},
                              dir.path());
    CHECK_THROWS_WITH_AS(load_corpus(dup), doctest::Contains("duplicate object id 'x'"), Error);
    auto missing = parse_manifest({{"entries", {{{"path", "nope.md"}}}}}, dir.path());
    CHECK_THROWS_AS(load_corpus(missing), Error);
    CHECK_THROWS_AS(parse_manifest({{"entries", {{{"path", "a.md"}, {"kind", "memo"}}}}}, dir.path()), ParseError);
}

TEST_CASE("placeholders and attachment mapping on the bundled corpus") {
    auto m = load_manifest(testing::golden_manifest());
    auto loaded = load_corpus(m);
    CHECK(loaded.objects.size() == 209);
    std::size_t placeholders = 0;
    for (const auto& o : loaded.objects) placeholders += o.source_path.rfind("placeholder:", 0) == 0;
    CHECK(placeholders == 200);
    for (const auto& o : loaded.objects) {
        if (o.kind == ObjectKind::email) {
            REQUIRE(o.attachments.size() == 1);
            CHECK(o.attachments[0].object_id == std::optional<std::string>("memo-palmen"));
        }
        if (o.id == "email-forward") {
            REQUIRE(o.forwarded_from);
            CHECK(o.forwarded_from->target == "email-palmen");
        }
    }
}

TEST_CASE("shingle similarity matches the brute-force oracle on fixtures") {
    auto j = nlohmann::json::parse(testing::slurp(testing::fixture_dir() / "near_duplicates.json"));
    auto k = j.at("shingle_size").get<std::size_t>();
    REQUIRE(j.at("pairs").size() == 50);
    for (const auto& p : j.at("pairs")) {
        auto a = p.at("a").get<std::string>(), b = p.at("b").get<std::string>();
        CAPTURE(a);
        CAPTURE(b);
        CHECK(std::abs(shingle_similarity(a, b, k) - oracle::jaccard(a, b, k)) <= 1e-12);
        CHECK(shingle_similarity(a, b, k) == shingle_similarity(b, a, k));
    }
}

TEST_CASE("near-duplicate detection") {
    std::vector<InformationObject> objs(3);
    objs[0].id = "x";
    objs[0].body = "The quick brown fox jumps over the lazy dog near the river bank.";
    objs[1].id = "y";
    objs[1].body = "The quick brown fox jumps over the lazy dog near the river bank!";
    objs[2].id = "z";
    objs[2].body = "Completely different content about tax authorities.";
    auto pairs = detect_near_duplicates(objs, 0.8);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].first == "x");
    CHECK(pairs[0].second == "y");
    CHECK(pairs[0].similarity == doctest::Approx(oracle::jaccard(objs[0].body, objs[1].body, 8)));
    CHECK(shingle_similarity("", "") == 0.0);
    CHECK_THROWS_AS(detect_near_duplicates(objs, 1.5), Error);
}
