#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "timeflow/store.hpp"

namespace timeflow::service {

struct Address {
    std::string host = "127.0.0.1";
    int port = 8080;  // 0 picks a free port
};

/// "host:port", ":port" or "port". Throws Error on anything else.
Address parse_address(std::string_view text);

struct Options {
    /// Extraction requests wait this long before answering 202 with a job URL.
    std::chrono::milliseconds extract_budget{30000};
    /// Static files served under /ui when set.
    std::optional<std::filesystem::path> ui_dir;
    std::size_t threads = 8;
};

/// HTTP/JSON front end over a repository.
///
///   POST /corpora                          corpus bundle or manifest with base_dir
///   GET  /corpora, /corpora/{id}
///   POST /corpora/{id}/extract             extract + relate + build
///   GET  /jobs/{id}
///   GET  /chronologies, /chronologies/{id} ?version=tag for an earlier version
///   PUT  /chronologies/{id}                If-Match required
///   POST /chronologies/{id}/merge          If-Match required
///   POST /chronologies/{id}/restore        If-Match required
///   GET  /chronologies/{id}/timeflow       ?perspective=&format=json|svg&spacing=
///   GET  /chronologies/{id}/gaps           ?min_days=N
///   POST /perspectives, GET /perspectives, GET/PUT /perspectives/{id}
///
/// Version tags travel in ETag and If-Match headers. Errors answer
/// {"error": message}; 422 responses also carry "violations".
class Server {
public:
    explicit Server(store::Repository& repository, Options options = {});
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Returns the bound port. Throws Error when the address is unavailable.
    int bind(const Address& address);
    /// Serves until stop(). Call bind() first.
    void listen();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace timeflow::service
