#include "timeflow/service.hpp"

#include <httplib.h>

#include <atomic>
#include <charconv>
#include <future>
#include <map>
#include <mutex>

#include "timeflow/chronology.hpp"
#include "timeflow/interchange.hpp"
#include "timeflow/layout.hpp"
#include "timeflow/pipeline.hpp"
#include "timeflow/render.hpp"
#include "timeflow/text.hpp"

namespace timeflow::service {

using json = nlohmann::json;

Address parse_address(std::string_view text) {
    Address a;
    std::string_view port = text;
    if (auto colon = text.rfind(':'); colon != std::string_view::npos) {
        if (colon > 0) {
            a.host = std::string(text.substr(0, colon));
        }
        port = text.substr(colon + 1);
    }
    auto [end, ec] = std::from_chars(port.data(), port.data() + port.size(), a.port);
    if (port.empty() || ec != std::errc() || end != port.data() + port.size() || a.port < 0 || a.port > 65535) {
        throw Error("bad address '" + std::string(text) + "', expected host:port");
    }
    return a;
}

namespace {

// A mutating request arrived without If-Match.
class PreconditionRequired : public Error {
public:
    using Error::Error;
};

struct Reply {
    int status = 200;
    json body;
    std::optional<std::string> etag;
};

std::string quote(const std::string& tag) { return "\"" + tag + "\""; }

std::optional<std::string> if_match(const httplib::Request& req) {
    if (!req.has_header("If-Match")) {
        return std::nullopt;
    }
    std::string v = text::trim(req.get_header_value("If-Match"));
    if (v.rfind("W/", 0) == 0) {
        v = v.substr(2);
    }
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
        v = v.substr(1, v.size() - 2);
    }
    return v;
}

std::string require_if_match(const httplib::Request& req) {
    auto tag = if_match(req);
    if (!tag) {
        throw PreconditionRequired("If-Match header with the current version tag is required");
    }
    return *tag;
}

json error_body(const std::string& message) { return {{"error", message}}; }

// Maps the library's exception types onto status codes.
Reply reply_for(std::exception_ptr ex) {
    try {
        std::rethrow_exception(ex);
    } catch (const ValidationError& e) {
        return {422, {{"error", e.what()}, {"violations", e.violations()}}, {}};
    } catch (const NotFoundError& e) {
        return {404, error_body(e.what()), {}};
    } catch (const ConflictError& e) {
        return {409, error_body(e.what()), {}};
    } catch (const ParseError& e) {
        return {400, error_body(e.what()), {}};
    } catch (const CorruptError& e) {
        return {500, error_body(e.what()), {}};
    } catch (const PreconditionRequired& e) {
        return {428, error_body(e.what()), {}};
    } catch (const Error& e) {
        return {422, error_body(e.what()), {}};
    } catch (const json::exception& e) {
        return {400, error_body(std::string("malformed request body: ") + e.what()), {}};
    } catch (const std::exception& e) {
        return {500, error_body(e.what()), {}};
    }
}

void send(httplib::Response& res, const Reply& r) {
    res.status = r.status;
    if (r.etag) {
        res.set_header("ETag", quote(*r.etag));
    }
    res.set_content(r.body.dump(2) + "\n", "application/json");
}

json parse_body(const httplib::Request& req) {
    try {
        return json::parse(req.body);
    } catch (const json::exception& e) {
        throw ParseError(std::string("request body is not JSON: ") + e.what());
    }
}

std::optional<std::string> param(const httplib::Request& req, const char* name) {
    if (!req.has_param(name)) {
        return std::nullopt;
    }
    return req.get_param_value(name);
}

long integer_param(const std::string& name, const std::string& value) {
    long v = 0;
    auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (value.empty() || ec != std::errc() || end != value.data() + value.size()) {
        throw ParseError(name + " must be an integer, got '" + value + "'");
    }
    return v;
}

}  // namespace

struct Server::Impl {
    store::Repository& repo;
    Options options;
    httplib::Server http;

    std::mutex jobs_mutex;
    std::map<std::string, std::shared_future<Reply>> jobs;
    std::atomic<unsigned long> job_counter{0};

    Impl(store::Repository& r, Options o) : repo(r), options(std::move(o)) {}

    template <class F>
    httplib::Server::Handler guarded(F f) {
        return [f](const httplib::Request& req, httplib::Response& res) {
            Reply r;
            try {
                r = f(req);
            } catch (...) {
                r = reply_for(std::current_exception());
            }
            send(res, r);
        };
    }

    Reply post_corpus(const httplib::Request& req) {
        json body = parse_body(req);
        pipeline::Corpus corpus;
        if (body.contains("objects")) {
            corpus = pipeline::parse_corpus(body);
        } else {
            if (!body.contains("base_dir")) {
                throw Error("a manifest upload needs base_dir so its files can be read");
            }
            corpus = pipeline::ingest_corpus(ingest::parse_manifest(body, {}));
        }
        json doc = pipeline::to_json(corpus);
        std::string id = param(req, "id").value_or("");
        if (id.empty()) {
            std::string base = text::slug(corpus.name);
            id = (base.empty() ? "corpus" : base) + "-" + store::version_tag(doc).substr(0, 12);
        }
        auto existing = repo.entry(store::Kind::corpus, id);
        auto expected = if_match(req);
        if (!expected && existing && existing->tag != store::version_tag(doc)) {
            expected = "";  // never overwrite silently
        }
        std::string tag = repo.save(store::Kind::corpus, id, doc, expected);
        return {existing ? 200 : 201,
                {{"id", id}, {"tag", tag}, {"objects", corpus.objects.size()}, {"diagnostics", corpus.diagnostics}},
                tag};
    }

    Reply extract(const std::string& corpus_id, std::optional<std::string> expected) {
        auto [corpus, corpus_tag] = repo.load_corpus(corpus_id);
        auto run = pipeline::run(corpus);
        json doc = run.chronology;
        auto existing = repo.entry(store::Kind::chronology, corpus_id);
        if (!expected && existing && existing->tag != store::version_tag(doc)) {
            expected = "";
        }
        std::string tag = repo.save_chronology(corpus_id, run.chronology, expected);
        std::vector<Diagnostic> diagnostics = run.extraction.diagnostics;
        diagnostics.insert(diagnostics.end(), run.derivation.diagnostics.begin(), run.derivation.diagnostics.end());
        return {existing ? 200 : 201,
                {{"chronology", corpus_id},
                 {"tag", tag},
                 {"corpus_tag", corpus_tag},
                 {"events", run.chronology.events().size()},
                 {"relations", run.chronology.relations.size()},
                 {"proposals", run.derivation.proposals},
                 {"candidate_events", run.extraction.candidate_events},
                 {"diagnostics", diagnostics}},
                tag};
    }

    Reply post_extract(const httplib::Request& req) {
        std::string id = req.matches[1];
        if (!repo.exists(store::Kind::corpus, id)) {
            throw NotFoundError("no corpus '" + id + "'");
        }
        auto budget = options.extract_budget;
        if (auto b = param(req, "budget_ms")) {
            budget = std::chrono::milliseconds(integer_param("budget_ms", *b));
        }
        auto expected = if_match(req);
        std::shared_future<Reply> job = std::async(std::launch::async, [this, id, expected] {
                                            try {
                                                return extract(id, expected);
                                            } catch (...) {
                                                return reply_for(std::current_exception());
                                            }
                                        }).share();
        if (job.wait_for(budget) == std::future_status::ready) {
            return job.get();
        }
        std::string job_id = "job-" + std::to_string(++job_counter);
        {
            std::lock_guard lock(jobs_mutex);
            jobs[job_id] = job;
        }
        return {202, {{"job", job_id}, {"status", "running"}, {"poll", "/jobs/" + job_id}}, {}};
    }

    Reply get_job(const httplib::Request& req) {
        std::string id = req.matches[1];
        std::shared_future<Reply> job;
        {
            std::lock_guard lock(jobs_mutex);
            auto it = jobs.find(id);
            if (it == jobs.end()) {
                throw NotFoundError("no job '" + id + "'");
            }
            job = it->second;
        }
        if (job.wait_for(std::chrono::seconds(0)) != std::future_status::ready) {
            return {200, {{"job", id}, {"status", "running"}}, {}};
        }
        const Reply& r = job.get();
        bool ok = r.status < 300;
        return {200, {{"job", id}, {"status", ok ? "done" : "failed"}, {"http_status", r.status}, {"result", r.body}}, {}};
    }

    Reply list(store::Kind kind) {
        json items = json::array();
        for (const auto& e : repo.list(kind)) {
            items.push_back({{"id", e.id}, {"tag", e.tag}});
        }
        return {200, {{"items", items}}, {}};
    }

    Reply get_resource(store::Kind kind, const httplib::Request& req) {
        std::string id = req.matches[1];
        auto s = param(req, "version") ? repo.load_version(kind, id, *param(req, "version")) : repo.load(kind, id);
        return {200, s.document, s.tag};
    }

    Reply put_chronology(const httplib::Request& req) {
        std::string id = req.matches[1];
        std::string expected = require_if_match(req);
        if (!repo.exists(store::Kind::chronology, id)) {
            throw NotFoundError("no chronology '" + id + "'");
        }
        Chronology c = parse_chronology(parse_body(req));
        std::string tag = repo.save_chronology(id, c, expected);
        return {200, {{"id", id}, {"tag", tag}}, tag};
    }

    Reply merge(const httplib::Request& req) {
        std::string id = req.matches[1];
        std::string expected = require_if_match(req);
        json body = parse_body(req);
        auto ids = body.at("events").get<std::vector<std::string>>();
        if (ids.size() < 2) {
            throw Error("merge needs at least two events");
        }
        auto [c, tag] = repo.load_chronology(id);
        if (tag != expected) {
            throw ConflictError("chronology '" + id + "' is at version " + tag + ", not " + expected);
        }
        Chronology merged = merge_events(std::move(c), ids);
        std::string new_tag = repo.save_chronology(id, merged, expected);
        return {200,
                {{"id", id}, {"tag", new_tag}, {"previous", tag}, {"composite", composite_event_id(ids)},
                 {"events", merged.events().size()}},
                new_tag};
    }

    Reply restore(const httplib::Request& req) {
        std::string id = req.matches[1];
        std::string expected = require_if_match(req);
        json body = parse_body(req);
        std::string version = body.at("version").get<std::string>();
        Chronology c = parse_chronology(repo.load_version(store::Kind::chronology, id, version).document);
        std::string tag = repo.save_chronology(id, c, expected);
        return {200, {{"id", id}, {"tag", tag}, {"events", c.events().size()}}, tag};
    }

    Reply post_perspective(const httplib::Request& req) {
        json body = parse_body(req);
        Perspective p = parse_perspective(body);
        std::string id = param(req, "id").value_or(text::slug(p.name));
        if (id.empty()) {
            throw ValidationError({{"perspective", "perspective-id", "perspective needs a name or an id"}});
        }
        auto expected = if_match(req).value_or("");
        std::string tag = repo.save_perspective(id, p, expected);
        return {201, {{"id", id}, {"tag", tag}}, tag};
    }

    Reply put_perspective(const httplib::Request& req) {
        std::string id = req.matches[1];
        std::string expected = require_if_match(req);
        if (!repo.exists(store::Kind::perspective, id)) {
            throw NotFoundError("no perspective '" + id + "'");
        }
        std::string tag = repo.save_perspective(id, parse_perspective(parse_body(req)), expected);
        return {200, {{"id", id}, {"tag", tag}}, tag};
    }

    void timeflow(const httplib::Request& req, httplib::Response& res) {
        std::string id = req.matches[1];
        auto [c, tag] = repo.load_chronology(id);
        Chronology view = std::move(c);
        if (auto p = param(req, "perspective"); p && !p->empty()) {
            view = apply_perspective(std::move(view), repo.load_perspective(*p).first);
        }
        layout::Options lo;
        if (auto s = param(req, "spacing")) {
            if (*s == "proportional") {
                lo.spacing = layout::Spacing::proportional;
            } else if (*s != "uniform") {
                throw ParseError("spacing must be uniform or proportional");
            }
        }
        auto l = layout::compute_layout(view, lo);
        std::string format = param(req, "format").value_or("json");
        res.set_header("X-Chronology-Version", tag);
        if (format == "svg") {
            res.status = 200;
            res.set_content(render::render_svg(l, view), "image/svg+xml");
        } else if (format == "json") {
            send(res, {200, render::render_view_json(l, view), {}});
        } else {
            throw ParseError("format must be json or svg");
        }
    }

    Reply gaps(const httplib::Request& req) {
        std::string id = req.matches[1];
        auto min = param(req, "min_days");
        if (!min) {
            throw ParseError("min_days is required");
        }
        long days = integer_param("min_days", *min);
        if (days <= 0) {
            throw ParseError("min_days must be positive");
        }
        auto [c, tag] = repo.load_chronology(id);
        json out = json::array();
        for (const auto& g : chronology::detect_gaps(c, days)) {
            out.push_back({{"start", g.start.iso()}, {"end", g.end.iso()}, {"days", g.length_days()}});
        }
        return {200, {{"chronology", id}, {"min_days", days}, {"gaps", out}}, tag};
    }

    void routes() {
        using K = store::Kind;
        http.Post("/corpora", guarded([this](const auto& req) { return post_corpus(req); }));
        http.Get("/corpora", guarded([this](const auto&) { return list(K::corpus); }));
        http.Get(R"(/corpora/([^/]+))", guarded([this](const auto& req) { return get_resource(K::corpus, req); }));
        http.Post(R"(/corpora/([^/]+)/extract)", guarded([this](const auto& req) { return post_extract(req); }));
        http.Get(R"(/jobs/([^/]+))", guarded([this](const auto& req) { return get_job(req); }));

        http.Get("/chronologies", guarded([this](const auto&) { return list(K::chronology); }));
        http.Get(R"(/chronologies/([^/]+))",
                 guarded([this](const auto& req) { return get_resource(K::chronology, req); }));
        http.Put(R"(/chronologies/([^/]+))", guarded([this](const auto& req) { return put_chronology(req); }));
        http.Post(R"(/chronologies/([^/]+)/merge)", guarded([this](const auto& req) { return merge(req); }));
        http.Post(R"(/chronologies/([^/]+)/restore)", guarded([this](const auto& req) { return restore(req); }));
        http.Get(R"(/chronologies/([^/]+)/gaps)", guarded([this](const auto& req) { return gaps(req); }));
        http.Get(R"(/chronologies/([^/]+)/timeflow)", [this](const httplib::Request& req, httplib::Response& res) {
            try {
                timeflow(req, res);
            } catch (...) {
                send(res, reply_for(std::current_exception()));
            }
        });

        http.Post("/perspectives", guarded([this](const auto& req) { return post_perspective(req); }));
        http.Get("/perspectives", guarded([this](const auto&) { return list(K::perspective); }));
        http.Get(R"(/perspectives/([^/]+))",
                 guarded([this](const auto& req) { return get_resource(K::perspective, req); }));
        http.Put(R"(/perspectives/([^/]+))", guarded([this](const auto& req) { return put_perspective(req); }));

        if (options.ui_dir) {
            http.set_mount_point("/ui", options.ui_dir->string());
        }
        http.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
            if (res.body.empty()) {
                json body = error_body(res.status == 404 ? "no route for " + req.method + " " + req.path
                                                         : httplib::status_message(res.status));
                res.set_content(body.dump(2) + "\n", "application/json");
            }
        });
        auto threads = options.threads;
        http.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
    }
};

Server::Server(store::Repository& repository, Options options)
    : impl_(std::make_unique<Impl>(repository, std::move(options))) {
    impl_->routes();
}

Server::~Server() { stop(); }

int Server::bind(const Address& address) {
    int port = address.port;
    if (port == 0) {
        port = impl_->http.bind_to_any_port(address.host);
    } else if (!impl_->http.bind_to_port(address.host, port)) {
        port = -1;
    }
    if (port < 0) {
        throw Error("cannot bind " + address.host + ":" + std::to_string(address.port));
    }
    return port;
}

void Server::listen() { impl_->http.listen_after_bind(); }

void Server::stop() {
    if (impl_->http.is_running()) {
        impl_->http.stop();
    }
}

void Server::wait_until_ready() const { impl_->http.wait_until_ready(); }

}  // namespace timeflow::service
