#pragma once

#include <httplib.h>

#include <thread>

#include "support.hpp"
#include "timeflow/service.hpp"

namespace testing {

/// A server on a free local port over a fresh repository.
class LiveServer {
public:
    explicit LiveServer(timeflow::service::Options options = {})
        : repo_(dir_.path()), server_(repo_, std::move(options)) {
        port_ = server_.bind({"127.0.0.1", 0});
        thread_ = std::thread([this] { server_.listen(); });
        server_.wait_until_ready();
    }
    ~LiveServer() {
        server_.stop();
        thread_.join();
    }
    LiveServer(const LiveServer&) = delete;
    LiveServer& operator=(const LiveServer&) = delete;

    httplib::Client client() const {
        httplib::Client c("127.0.0.1", port_);
        c.set_read_timeout(60, 0);
        return c;
    }
    timeflow::store::Repository& repository() { return repo_; }

private:
    TempDir dir_;
    timeflow::store::Repository repo_;
    timeflow::service::Server server_;
    int port_ = 0;
    std::thread thread_;
};

/// The bundled manifest with base_dir filled in, ready for POST /corpora.
inline std::string golden_manifest_upload() {
    auto j = nlohmann::json::parse(slurp(golden_manifest()));
    j["base_dir"] = golden_manifest().parent_path().string();
    return j.dump();
}

inline std::string quoted(const std::string& tag) { return "\"" + tag + "\""; }

}  // namespace testing
