#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <httplib.h>
#include <thread>

#include "alloclab/server.hpp"

using namespace alloclab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// A server on a free loopback port for the lifetime of the object.
struct Running {
    SessionStore store;
    ApiServer server;
    int port;
    std::thread thread;

    explicit Running(const fs::path& dir) : store(dir), server(store), port(server.bind("127.0.0.1", 0)) {
        REQUIRE(port > 0);
        thread = std::thread([this] { server.serve(); });
        server.wait_until_ready();
    }
    ~Running() {
        server.stop();
        thread.join();
    }
};

json body_of(const httplib::Result& r) { return json::parse(r->body); }

}  // namespace

TEST_CASE("http round trip with restart replay") {
    const auto dir = fs::temp_directory_path() / "alloclab_server_test";
    fs::remove_all(dir);
    std::string id, before;
    {
        Running srv(dir);
        httplib::Client cli("127.0.0.1", srv.port);

        auto created = cli.Post("/sessions", R"({"design": {"kind": "dbcd", "gamma": 2}, "target": "rsihr", "arms": 2, "seed": 9})",
                                "application/json");
        REQUIRE(created);
        CHECK(created->status == 201);
        CHECK(created->get_header_value("Access-Control-Allow-Origin") == "*");
        id = body_of(created)["id"];

        for (int m = 0; m < 6; ++m) {
            auto e = cli.Post("/sessions/" + id + "/enroll", "", "application/json");
            REQUIRE(e);
            CHECK(e->status == 200);
            const json j = body_of(e);
            CHECK(j["subject_index"] == m);
            if (m < 4) CHECK(j["assignment"] == m % 2);
        }
        auto o = cli.Post("/sessions/" + id + "/subjects/2/outcome", R"({"success": true})", "application/json");
        REQUIRE(o);
        CHECK(o->status == 200);
        CHECK(body_of(o)["counts"]["successes"][0] == 1);

        CHECK(cli.Post("/sessions/" + id + "/subjects/2/outcome", R"({"success": false})", "application/json")->status == 409);
        CHECK(cli.Post("/sessions/" + id + "/subjects/99/outcome", R"({"success": false})", "application/json")->status == 404);
        CHECK(cli.Post("/sessions/" + id + "/subjects/x/outcome", R"({"success": false})", "application/json")->status == 404);
        CHECK(cli.Post("/sessions/" + id + "/subjects/3/outcome", R"({"success": 1})", "application/json")->status == 422);
        CHECK(cli.Post("/sessions/" + id + "/subjects/3/outcome", "not json", "application/json")->status == 422);
        CHECK(cli.Post("/sessions/nope/enroll", "", "application/json")->status == 404);
        CHECK(cli.Get("/sessions/nope")->status == 404);
        CHECK(cli.Post("/sessions", R"({"design": "dbcd", "target": "bogus"})", "application/json")->status == 422);
        CHECK(cli.Options("/sessions")->status == 204);

        auto g = cli.Get("/sessions/" + id);
        REQUIRE(g);
        CHECK(g->status == 200);
        before = g->body;
        CHECK(body_of(g)["pending"].size() == 5);
        CHECK(body_of(cli.Get("/sessions"))["sessions"] == json::array({id}));
    }
    {
        Running srv(dir);
        httplib::Client cli("127.0.0.1", srv.port);
        auto g = cli.Get("/sessions/" + id);
        REQUIRE(g);
        CHECK(g->body == before);
    }
    fs::remove_all(dir);
}
