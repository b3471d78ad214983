#pragma once

#include <memory>
#include <optional>
#include <string>

#include "multgame/session.hpp"

namespace multgame {

struct ServerOptions {
    std::string addr = "127.0.0.1";
    int port = 8080;  // 0 binds an ephemeral port
    std::string allow_origin;  // empty disables CORS headers
    std::optional<std::string> static_dir;
};

/// JSON-over-HTTP facade over a SessionService.
///
///   POST /sessions                    -> 201 {session_id, config[, seed]}
///   POST /sessions/{id}/rounds/open   -> {commitment_digest, round}
///   POST /sessions/{id}/rounds/play   -> reveal and settlement
///   GET  /sessions/{id}/stats         -> settled-round statistics
///   GET  /config                      -> server capabilities
class HttpServer {
public:
    HttpServer(SessionService& service, ServerOptions opts);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds the socket; returns the bound port. Throws on failure.
    int bind();
    /// Serves until stop(); call bind() first.
    void listen();
    void stop();
    int port() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace multgame
