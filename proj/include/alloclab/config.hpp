// config.hpp: scenario files: flat key=value text or JSON, both reduced to
// dotted keys before typed parsing.
#pragma once
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "alloclab/montecarlo.hpp"

namespace alloclab {

using KeyValues = std::map<std::string, std::string>;

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

struct Scenario {
    std::string name = "scenario";
    SimConfig sim;
    KeyValues source;  // the merged keys this scenario was built from
};

// Every key build_scenario understands.
const std::vector<std::string_view>& known_keys();

// "key = value" lines; '#' starts a comment; blank lines ignored.
KeyValues parse_key_values(std::string_view text);
// Nested objects become dotted keys; arrays become comma lists.
KeyValues parse_json_config(std::string_view text);
// JSON when the file starts with '{', key=value otherwise.
KeyValues load_config_file(const std::filesystem::path& path);
// Applies one "key=value" override.
void apply_override(KeyValues& kv, std::string_view assignment);

// Throws ConfigError naming the first bad key.
Scenario build_scenario(const KeyValues& kv);

}  // namespace alloclab
