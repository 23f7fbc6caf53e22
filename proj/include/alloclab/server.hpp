// server.hpp: the session API over HTTP.
//
//   POST /sessions                          create; body as SessionConfig
//   POST /sessions/{id}/enroll              -> {subject_index, assignment}
//   POST /sessions/{id}/subjects/{m}/outcome  body {success}
//   GET  /sessions/{id}                     state
//   GET  /sessions                          ids
#pragma once
#include <memory>
#include <string>

#include "alloclab/session.hpp"

namespace httplib {
class Server;
}

namespace alloclab {

class ApiServer {
public:
    explicit ApiServer(SessionStore& store);
    ~ApiServer();

    // Port 0 picks a free port. Returns the bound port, or -1.
    int bind(const std::string& host = "127.0.0.1", int port = 0);
    // Blocks until stop().
    bool serve();
    void stop();
    void wait_until_ready() const;

private:
    SessionStore& store_;
    std::unique_ptr<httplib::Server> http_;
};

}  // namespace alloclab
