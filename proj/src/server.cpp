#include "alloclab/server.hpp"

#include <charconv>
#include <httplib.h>

namespace alloclab {

using nlohmann::json;

namespace {

void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

template <class F>
void guarded(httplib::Response& res, F&& f) {
    try {
        f();
    } catch (const ApiError& e) {
        reply(res, e.status(), {{"error", e.what()}});
    } catch (const std::exception& e) {
        reply(res, 500, {{"error", e.what()}});
    }
}

json parse_body(const httplib::Request& req) {
    try {
        return json::parse(req.body);
    } catch (const json::parse_error&) {
        throw ApiError(422, "body is not valid JSON");
    }
}

std::size_t subject_index(const std::string& text) {
    std::size_t m = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), m);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ApiError(404, "unknown subject " + text);
    return m;
}

}  // namespace

ApiServer::ApiServer(SessionStore& store) : store_(store), http_(std::make_unique<httplib::Server>()) {
    http_->set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    http_->Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    http_->Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { reply(res, 201, store_.create(parse_body(req))); });
    });
    http_->Get("/sessions", [this](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] { reply(res, 200, {{"sessions", store_.ids()}}); });
    });
    http_->Get(R"(/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { reply(res, 200, store_.state(req.matches[1])); });
    });
    http_->Post(R"(/sessions/([^/]+)/enroll)", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { reply(res, 200, store_.enroll(req.matches[1])); });
    });
    http_->Post(R"(/sessions/([^/]+)/subjects/([^/]+)/outcome)",
                [this](const httplib::Request& req, httplib::Response& res) {
                    guarded(res, [&] {
                        const std::string id = req.matches[1];
                        store_.state(id);  // unknown session wins over a bad body
                        const std::size_t m = subject_index(req.matches[2]);
                        reply(res, 200, store_.record_outcome(id, m, parse_body(req)));
                    });
                });
}

ApiServer::~ApiServer() = default;

int ApiServer::bind(const std::string& host, int port) {
    if (port == 0) return http_->bind_to_any_port(host);
    return http_->bind_to_port(host, port) ? port : -1;
}

bool ApiServer::serve() { return http_->listen_after_bind(); }

void ApiServer::stop() { http_->stop(); }

void ApiServer::wait_until_ready() const { http_->wait_until_ready(); }

}  // namespace alloclab
