#include "alloclab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <vector>

namespace alloclab {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, std::string_view text) {
    text = trim(text);
    double value = 0.0;
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "inf" || lower == "infinity") return std::numeric_limits<double>::infinity();
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(value))
        throw ConfigError(key, "expected a number, got '" + std::string(text) + "'");
    return value;
}

template <class Int>
Int parse_int(const std::string& key, std::string_view text) {
    text = trim(text);
    Int value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ConfigError(key, "expected a nonnegative integer, got '" + std::string(text) + "'");
    return value;
}

std::vector<std::string_view> split_list(std::string_view text) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = text.find(',');
        out.push_back(trim(text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

std::vector<double> parse_doubles(const std::string& key, std::string_view text) {
    std::vector<double> out;
    for (auto item : split_list(text)) out.push_back(parse_double(key, item));
    return out;
}

void flatten(const nlohmann::json& j, const std::string& prefix, KeyValues& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
        return;
    }
    if (prefix.empty()) throw ConfigError("config", "top level must be an object");
    if (j.is_array()) {
        std::string joined;
        for (const auto& item : j) {
            if (!item.is_primitive()) throw ConfigError(prefix, "lists must hold scalars");
            if (!joined.empty()) joined += ",";
            joined += item.is_string() ? item.get<std::string>() : item.dump();
        }
        out[prefix] = joined;
    } else if (j.is_string()) {
        out[prefix] = j.get<std::string>();
    } else {
        out[prefix] = j.dump();
    }
}

// "dbcd.gamma: must be >= 0" -> {"dbcd.gamma", "must be >= 0"}
ConfigError as_config_error(const std::string& message) {
    const auto colon = message.find(':');
    if (colon == std::string::npos || message.find(' ') < colon) return {"config", message};
    std::string key = message.substr(0, colon);
    if (key == "arms") key = "arms.p";
    return {key, std::string(trim(std::string_view(message).substr(colon + 1)))};
}

}  // namespace

const std::vector<std::string_view>& known_keys() {
    static const std::vector<std::string_view> keys = {
        "scenario.name", "design.kind",      "arms.p",          "sim.n",
        "sim.replicates", "sim.seed",        "sim.test_level",  "sim.threads",
        "delay.entry_rate", "delay.response_rates", "dbcd.gamma", "dbcd.m",
        "rbcd.alpha",    "target.kind",      "mcad.params",     "estimator.a",
        "estimator.b",   "urn.initial",      "dl.initial"};
    return keys;
}

KeyValues parse_key_values(std::string_view text) {
    KeyValues out;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no), "expected key = value");
        const std::string key(trim(view.substr(0, eq)));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no), "empty key");
        out[key] = std::string(trim(view.substr(eq + 1)));
    }
    return out;
}

KeyValues parse_json_config(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    KeyValues out;
    flatten(j, "", out);
    return out;
}

KeyValues load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return parse_json_config(text);
    return parse_key_values(text);
}

void apply_override(KeyValues& kv, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) throw ConfigError(std::string(assignment), "expected key=value");
    kv[std::string(trim(assignment.substr(0, eq)))] = std::string(trim(assignment.substr(eq + 1)));
}

Scenario build_scenario(const KeyValues& kv) {
    for (const auto& [key, value] : kv)
        if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end())
            throw ConfigError(key, "unknown key");

    auto get = [&](std::string_view key) -> const std::string* {
        const auto it = kv.find(std::string(key));
        return it == kv.end() ? nullptr : &it->second;
    };

    Scenario sc;
    sc.source = kv;
    SimConfig& sim = sc.sim;
    DesignSpec& d = sim.design;

    if (auto v = get("scenario.name")) sc.name = *v;
    if (auto v = get("design.kind")) {
        try {
            d.kind = parse_design(*v);
        } catch (const std::invalid_argument&) {
            throw ConfigError("design.kind", "unknown design '" + *v + "'");
        }
    }
    if (auto v = get("arms.p")) sim.p = parse_doubles("arms.p", *v);
    d.arms = sim.p.size();
    if (auto v = get("sim.n")) sim.n = parse_int<std::size_t>("sim.n", *v);
    if (auto v = get("sim.replicates")) sim.replicates = parse_int<std::size_t>("sim.replicates", *v);
    if (auto v = get("sim.seed")) sim.seed = parse_int<std::uint64_t>("sim.seed", *v);
    if (auto v = get("sim.test_level")) sim.test_level = parse_double("sim.test_level", *v);
    if (auto v = get("sim.threads")) sim.threads = parse_int<unsigned>("sim.threads", *v);
    if (auto v = get("target.kind")) {
        try {
            d.target = parse_target(*v);
        } catch (const std::invalid_argument&) {
            throw ConfigError("target.kind", "unknown target '" + *v + "'");
        }
    }
    if (auto v = get("dbcd.gamma")) d.dbcd.gamma = parse_double("dbcd.gamma", *v);
    if (auto v = get("dbcd.m")) d.dbcd.burn_in = parse_int<std::size_t>("dbcd.m", *v);
    if (auto v = get("rbcd.alpha")) d.rbcd.alpha = parse_double("rbcd.alpha", *v);
    if (auto v = get("estimator.a")) d.dbcd.scheme.a = d.rbcd.scheme.a = parse_double("estimator.a", *v);
    if (auto v = get("estimator.b")) d.dbcd.scheme.b = d.rbcd.scheme.b = parse_double("estimator.b", *v);
    if (auto v = get("mcad.params")) {
        const auto m = parse_doubles("mcad.params", *v);
        if (m.size() != 4) throw ConfigError("mcad.params", "expected alpha_s,alpha_f,beta_s,beta_f");
        d.markov = {m[0], m[1], m[2], m[3]};
    }
    if (auto v = get("urn.initial")) d.urn_initial = parse_doubles("urn.initial", *v);
    if (auto v = get("dl.initial")) {
        d.dl_initial.clear();
        for (auto item : split_list(*v)) d.dl_initial.push_back(parse_int<std::int64_t>("dl.initial", item));
    }
    const auto* entry = get("delay.entry_rate");
    const auto* response = get("delay.response_rates");
    if (entry || response) {
        DelayModel m;
        if (entry) m.entry_rate = parse_double("delay.entry_rate", *entry);
        if (response) m.response_rates = parse_doubles("delay.response_rates", *response);
        sim.delay = m;
    }

    try {
        sim.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw as_config_error(e.what());
    }
    return sc;
}

}  // namespace alloclab
