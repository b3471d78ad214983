#include "multgame/server.hpp"

#include <stdexcept>

#include <httplib.h>

namespace multgame {

struct HttpServer::Impl {
    SessionService& service;
    ServerOptions opts;
    httplib::Server server;
    int bound_port = -1;

    Impl(SessionService& s, ServerOptions o) : service(s), opts(std::move(o)) {}

    void send(httplib::Response& res, const ApiResponse& api) {
        res.status = api.status;
        res.set_content(api.body.dump(), "application/json");
    }

    void routes() {
        if (!opts.allow_origin.empty()) {
            server.set_default_headers({{"Access-Control-Allow-Origin", opts.allow_origin},
                                        {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                        {"Access-Control-Allow-Headers", "Content-Type"}});
            server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
                res.status = 204;
            });
        }

        server.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
            auto body = nlohmann::json::parse(req.body.empty() ? "{}" : req.body, nullptr, false);
            if (body.is_discarded()) {
                send(res, error_response(400, "invalid_json", "request body is not valid JSON"));
                return;
            }
            send(res, service.create(body));
        });
        server.Post(R"(/sessions/([0-9a-f]+)/rounds/open)",
                    [this](const httplib::Request& req, httplib::Response& res) {
                        send(res, service.open_round(req.matches[1]));
                    });
        server.Post(R"(/sessions/([0-9a-f]+)/rounds/play)",
                    [this](const httplib::Request& req, httplib::Response& res) {
                        auto body = nlohmann::json::parse(req.body, nullptr, false);
                        if (body.is_discarded()) {
                            send(res, error_response(422, "invalid_json",
                                                     "request body is not valid JSON"));
                            return;
                        }
                        send(res, service.play(req.matches[1], body));
                    });
        server.Get(R"(/sessions/([0-9a-f]+)/stats)",
                   [this](const httplib::Request& req, httplib::Response& res) {
                       send(res, service.stats(req.matches[1]));
                   });
        server.Get("/config", [this](const httplib::Request&, httplib::Response& res) {
            send(res, service.config());
        });

        if (opts.static_dir && !server.set_mount_point("/", *opts.static_dir)) {
            throw std::runtime_error("static directory '" + *opts.static_dir + "' not found");
        }

        server.set_error_handler([this](const httplib::Request&, httplib::Response& res) {
            if (res.body.empty()) {
                send(res, error_response(res.status, res.status == 404 ? "not_found" : "error",
                                         "no route for this request"));
            }
        });
        server.set_exception_handler(
            [this](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
                std::string msg = "internal error";
                try {
                    std::rethrow_exception(ep);
                } catch (const std::exception& e) {
                    msg = e.what();
                } catch (...) {
                }
                send(res, error_response(500, "internal", msg));
            });
    }
};

HttpServer::HttpServer(SessionService& service, ServerOptions opts)
    : impl_(std::make_unique<Impl>(service, std::move(opts))) {
    impl_->routes();
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
    if (impl_->opts.port == 0) {
        impl_->bound_port = impl_->server.bind_to_any_port(impl_->opts.addr);
    } else if (impl_->server.bind_to_port(impl_->opts.addr, impl_->opts.port)) {
        impl_->bound_port = impl_->opts.port;
    }
    if (impl_->bound_port <= 0) {
        throw std::runtime_error("cannot bind " + impl_->opts.addr + ":" +
                                 std::to_string(impl_->opts.port));
    }
    return impl_->bound_port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

int HttpServer::port() const { return impl_->bound_port; }

}  // namespace multgame
