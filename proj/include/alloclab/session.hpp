// session.hpp: live allocation sessions driven by a human operator, persisted
// as append-only event logs and rebuilt by replay.
#pragma once
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "alloclab/design.hpp"

namespace alloclab {

// Carries the HTTP status the server answers with.
class ApiError : public std::runtime_error {
public:
    ApiError(int status, const std::string& what) : std::runtime_error(what), status_(status) {}
    int status() const { return status_; }

private:
    int status_;
};

struct SessionConfig {
    DesignSpec spec;
    std::uint64_t seed = 0;
    EstimatorScheme scheme = kDefaultScheme;

    // Validates a create body; throws ApiError(422). A missing seed is drawn
    // from std::random_device and kept in the normalized form.
    static SessionConfig from_request(const nlohmann::json& body);
    // Normalized body, as written to the log.
    nlohmann::json to_json() const;
    std::optional<TargetKind> target() const;
};

// One trial. Randomness is only used for assignments; outcomes come from
// the caller.
class Session {
public:
    Session(std::string id, SessionConfig cfg);

    const std::string& id() const { return id_; }
    const SessionConfig& config() const { return cfg_; }
    const TrialState& state() const { return trial_.state(); }

    // {subject_index, assignment}
    nlohmann::json enroll();
    // ApiError 404 for an unknown subject, 409 when already resolved.
    void record_outcome(std::size_t subject, bool success);
    nlohmann::json state_json() const;

private:
    std::string id_;
    SessionConfig cfg_;
    Trial trial_;
    RandomStream rng_;
};

// Sessions by id. Mutations on one session are serialized; reads share.
// With a data directory, every mutation is appended to <dir>/<id>.jsonl as
// {"ts", "kind", "payload"} before the call returns, and the constructor
// replays every log it finds.
class SessionStore {
public:
    explicit SessionStore(std::optional<std::filesystem::path> data_dir = std::nullopt);

    nlohmann::json create(const nlohmann::json& body);
    nlohmann::json enroll(const std::string& id);
    nlohmann::json record_outcome(const std::string& id, std::size_t subject, const nlohmann::json& body);
    nlohmann::json state(const std::string& id) const;
    std::vector<std::string> ids() const;

private:
    struct Entry {
        explicit Entry(Session s) : session(std::move(s)) {}
        mutable std::shared_mutex mu;
        Session session;
        std::ofstream log;
    };

    std::shared_ptr<Entry> find(const std::string& id) const;
    void append(Entry& e, std::string_view kind, const nlohmann::json& payload);
    void replay(const std::filesystem::path& file);
    std::string fresh_id();

    std::optional<std::filesystem::path> dir_;
    mutable std::shared_mutex map_mu_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

}  // namespace alloclab
