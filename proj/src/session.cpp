#include "alloclab/session.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "alloclab/dbcd.hpp"

namespace alloclab {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw ApiError(422, what); }

double number_field(const json& obj, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_number()) invalid(std::string(key) + ": expected a number");
    return v.get<double>();
}

std::uint64_t unsigned_field(const json& obj, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        invalid(std::string(key) + ": expected a nonnegative integer");
    return v.get<std::uint64_t>();
}

std::int64_t now_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

}  // namespace

SessionConfig SessionConfig::from_request(const json& body) {
    if (!body.is_object()) invalid("body must be a JSON object");
    for (const auto& [key, _] : body.items())
        if (key != "design" && key != "target" && key != "arms" && key != "seed" && key != "estimator")
            invalid(key + ": unknown field");
    if (!body.contains("design")) invalid("design: required");

    SessionConfig cfg;
    DesignSpec& d = cfg.spec;
    const json& design = body["design"];
    try {
        if (design.is_string()) {
            d.kind = parse_design(design.get<std::string>());
        } else if (design.is_object()) {
            if (!design.contains("kind") || !design["kind"].is_string()) invalid("design.kind: required");
            d.kind = parse_design(design["kind"].get<std::string>());
            for (const auto& [key, value] : design.items()) {
                if (key == "kind") continue;
                if (key == "gamma") d.dbcd.gamma = number_field(design, "gamma");
                else if (key == "m") d.dbcd.burn_in = unsigned_field(design, "m");
                else if (key == "alpha") d.rbcd.alpha = number_field(design, "alpha");
                else if (key == "params") {
                    if (!value.is_array() || value.size() != 4) invalid("design.params: expected four numbers");
                    for (const auto& x : value)
                        if (!x.is_number()) invalid("design.params: expected four numbers");
                    d.markov = {value[0].get<double>(), value[1].get<double>(), value[2].get<double>(),
                                value[3].get<double>()};
                } else {
                    invalid("design." + key + ": unknown field");
                }
            }
        } else {
            invalid("design: expected a name or an object");
        }
        if (body.contains("target") && !body["target"].is_null()) {
            if (!body["target"].is_string()) invalid("target: expected a name");
            d.target = parse_target(body["target"].get<std::string>());
        }
        d.arms = body.contains("arms") ? unsigned_field(body, "arms") : 2;
        if (body.contains("seed")) {
            cfg.seed = unsigned_field(body, "seed");
        } else {
            std::random_device rd;
            cfg.seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
        }
        if (body.contains("estimator")) {
            const json& e = body["estimator"];
            if (!e.is_object() || !e.contains("a") || !e.contains("b")) invalid("estimator: expected {a, b}");
            cfg.scheme = {number_field(e, "a"), number_field(e, "b")};
            if (cfg.scheme.b <= 0.0) invalid("estimator.b: must be positive for a live session");
        }
        d.dbcd.scheme = d.rbcd.scheme = cfg.scheme;
        if (std::isinf(d.dbcd.gamma)) invalid("design.gamma: must be finite");
        d.validate();
    } catch (const ApiError&) {
        throw;
    } catch (const std::exception& e) {
        invalid(e.what());
    }
    return cfg;
}

json SessionConfig::to_json() const {
    json design = {{"kind", design_name(spec.kind)}};
    if (spec.kind == DesignKind::Dbcd) {
        design["gamma"] = spec.dbcd.gamma;
        design["m"] = spec.dbcd.burn_in;
    } else if (spec.kind == DesignKind::Rbcd) {
        design["alpha"] = spec.rbcd.alpha;
    } else if (spec.kind == DesignKind::Markov) {
        design["params"] = {spec.markov.alpha_s, spec.markov.alpha_f, spec.markov.beta_s, spec.markov.beta_f};
    }
    json out = {{"design", design},
                {"arms", spec.arms},
                {"seed", seed},
                {"estimator", {{"a", scheme.a}, {"b", scheme.b}}}};
    out["target"] = target() ? json(target_name(*target())) : json(nullptr);
    return out;
}

std::optional<TargetKind> SessionConfig::target() const {
    if (spec.kind == DesignKind::Dbcd || spec.kind == DesignKind::Rbcd) return spec.target;
    return spec.implied_target();
}

Session::Session(std::string id, SessionConfig cfg)
    : id_(std::move(id)), cfg_(std::move(cfg)), trial_(cfg_.spec), rng_(cfg_.seed, 0) {}

json Session::enroll() {
    const std::size_t subject = trial_.enroll(rng_);
    return {{"subject_index", subject}, {"assignment", trial_.state().history()[subject].assignment.arm}};
}

void Session::record_outcome(std::size_t subject, bool success) {
    if (subject >= trial_.state().n()) throw ApiError(404, "unknown subject " + std::to_string(subject));
    if (trial_.state().history()[subject].outcome)
        throw ApiError(409, "outcome already recorded for subject " + std::to_string(subject));
    trial_.resolve(subject, Outcome{success});
}

json Session::state_json() const {
    const TrialState& s = trial_.state();
    json out = cfg_.to_json();
    out["id"] = id_;
    out["n"] = s.n();
    out["counts"] = {{"assigned", s.assigned()}, {"observed", s.observed()}, {"successes", s.successes()}};
    out["p_hat"] = estimate(s, cfg_.scheme).p_hat;
    const auto target = cfg_.target();
    out["rho_hat"] = target ? json(estimated_target(s, *target, cfg_.scheme)) : json(nullptr);
    out["allocation_probabilities"] = trial_.allocation_probabilities();
    if (cfg_.spec.kind == DesignKind::Dbcd) {
        const std::size_t total = cfg_.spec.dbcd.burn_in * cfg_.spec.arms;
        out["burn_in"] = {{"active", s.n() < total}, {"completed", std::min(s.n(), total)}, {"total", total}};
    } else {
        out["burn_in"] = nullptr;
    }
    json pending = json::array();
    json history = json::array();
    for (std::size_t i = 0; i < s.n(); ++i) {
        const SubjectRecord& r = s.history()[i];
        if (!r.outcome) pending.push_back(i);
        history.push_back({{"subject", i},
                           {"arm", r.assignment.arm},
                           {"success", r.outcome ? json(r.outcome->success) : json(nullptr)}});
    }
    out["pending"] = pending;
    out["history"] = history;
    return out;
}

SessionStore::SessionStore(std::optional<std::filesystem::path> data_dir) : dir_(std::move(data_dir)) {
    if (!dir_) return;
    std::filesystem::create_directories(*dir_);
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(*dir_))
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) replay(f);
}

void SessionStore::replay(const std::filesystem::path& file) {
    std::ifstream in(file);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) lines.push_back(line);
    if (lines.empty()) return;

    const std::string id = file.stem().string();
    std::shared_ptr<Entry> entry;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        json rec;
        try {
            rec = json::parse(lines[i]);
        } catch (const json::parse_error&) {
            // a torn final write is dropped; anything earlier is corruption
            if (i + 1 == lines.size()) break;
            throw std::runtime_error(file.string() + ": unreadable record " + std::to_string(i + 1));
        }
        const std::string kind = rec.at("kind").get<std::string>();
        const json& payload = rec.at("payload");
        if (i == 0) {
            if (kind != "create") throw std::runtime_error(file.string() + ": log must start with create");
            entry = std::make_shared<Entry>(Session(id, SessionConfig::from_request(payload)));
        } else if (kind == "enroll") {
            const json got = entry->session.enroll();
            if (got["subject_index"] != payload.at("subject_index") || got["assignment"] != payload.at("assignment"))
                throw std::runtime_error(file.string() + ": replayed assignment differs from the log at record " +
                                         std::to_string(i + 1));
        } else if (kind == "outcome") {
            entry->session.record_outcome(payload.at("subject_index").get<std::size_t>(),
                                          payload.at("success").get<bool>());
        } else {
            throw std::runtime_error(file.string() + ": unknown record kind '" + kind + "'");
        }
    }
    if (!entry) return;
    entry->log.open(file, std::ios::app);
    sessions_[id] = entry;
}

std::string SessionStore::fresh_id() {
    std::random_device rd;
    while (true) {
        char buf[20];
        std::snprintf(buf, sizeof buf, "s%08x%04x", rd(), rd() & 0xFFFFu);
        if (!sessions_.count(buf)) return buf;
    }
}

void SessionStore::append(Entry& e, std::string_view kind, const json& payload) {
    if (!dir_) return;
    e.log << json{{"ts", now_ms()}, {"kind", kind}, {"payload", payload}}.dump() << '\n';
    e.log.flush();
    if (!e.log) throw ApiError(500, "cannot write the session log");
}

std::shared_ptr<SessionStore::Entry> SessionStore::find(const std::string& id) const {
    std::shared_lock lock(map_mu_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) throw ApiError(404, "unknown session " + id);
    return it->second;
}

json SessionStore::create(const json& body) {
    SessionConfig cfg = SessionConfig::from_request(body);
    std::unique_lock lock(map_mu_);
    const std::string id = fresh_id();
    auto entry = std::make_shared<Entry>(Session(id, std::move(cfg)));
    if (dir_) {
        entry->log.open(*dir_ / (id + ".jsonl"), std::ios::app);
        if (!entry->log) throw ApiError(500, "cannot open the session log");
    }
    append(*entry, "create", entry->session.config().to_json());
    sessions_[id] = entry;
    return entry->session.state_json();
}

json SessionStore::enroll(const std::string& id) {
    auto entry = find(id);
    std::unique_lock lock(entry->mu);
    json out = entry->session.enroll();
    append(*entry, "enroll", out);
    return out;
}

json SessionStore::record_outcome(const std::string& id, std::size_t subject, const json& body) {
    auto entry = find(id);
    if (!body.is_object() || !body.contains("success") || !body["success"].is_boolean())
        throw ApiError(422, "success: expected a boolean");
    const bool success = body["success"].get<bool>();
    std::unique_lock lock(entry->mu);
    entry->session.record_outcome(subject, success);
    append(*entry, "outcome", {{"subject_index", subject}, {"success", success}});
    return entry->session.state_json();
}

json SessionStore::state(const std::string& id) const {
    auto entry = find(id);
    std::shared_lock lock(entry->mu);
    return entry->session.state_json();
}

std::vector<std::string> SessionStore::ids() const {
    std::shared_lock lock(map_mu_);
    std::vector<std::string> out;
    for (const auto& [id, _] : sessions_) out.push_back(id);
    return out;
}

}  // namespace alloclab
