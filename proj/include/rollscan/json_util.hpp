#pragma once

#include <initializer_list>
#include <string>

#include <nlohmann/json.hpp>

#include "rollscan/errors.hpp"

namespace rollscan::jsonutil {

/// Fail-closed key check: every key of obj must appear in allowed.
inline void check_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                       const std::string& context) {
    if (!obj.is_object()) {
        throw ConfigError(context + ": expected a JSON object");
    }
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* name : allowed) {
            if (key == name) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError(context + ": unknown field \"" + key + "\"");
        }
    }
}

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key,
                                     const std::string& context) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw ConfigError(context + ": missing required field \"" + std::string(key) + "\"");
    }
    return *it;
}

template <typename T>
T get_or(const nlohmann::json& obj, const char* key, T fallback) {
    const auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    return it->get<T>();
}

}  // namespace rollscan::jsonutil
