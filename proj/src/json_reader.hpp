// Strict reader over nlohmann::json: every lookup is typed, every error names
// the JSON pointer of the offending field, and leftover keys are rejected.

#pragma once

#include "qswap/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace qswap::detail {

using ordered_json = nlohmann::ordered_json;

class JsonReader {
public:
    JsonReader(const ordered_json& node, std::string pointer)
        : node_(node), pointer_(std::move(pointer)) {
        if (!node_.is_object()) {
            throw ConfigError(where(), "expected an object");
        }
    }

    const std::string& pointer() const noexcept { return pointer_; }
    std::string child(const std::string& key) const { return pointer_ + "/" + key; }
    std::string where() const { return pointer_.empty() ? "/" : pointer_; }

    bool has(const std::string& key) const { return node_.contains(key) && !node_.at(key).is_null(); }

    const ordered_json& raw(const std::string& key) {
        seen_.insert(key);
        if (!node_.contains(key)) {
            throw ConfigError(child(key), "missing required field");
        }
        return node_.at(key);
    }

    std::optional<std::reference_wrapper<const ordered_json>> raw_optional(const std::string& key) {
        seen_.insert(key);
        if (!has(key)) {
            return std::nullopt;
        }
        return std::cref(node_.at(key));
    }

    double number(const std::string& key) { return as_number(raw(key), child(key)); }
    std::optional<double> number_optional(const std::string& key) {
        auto v = raw_optional(key);
        return v ? std::optional<double>(as_number(v->get(), child(key))) : std::nullopt;
    }
    int integer(const std::string& key) { return as_integer(raw(key), child(key)); }
    std::optional<int> integer_optional(const std::string& key) {
        auto v = raw_optional(key);
        return v ? std::optional<int>(as_integer(v->get(), child(key))) : std::nullopt;
    }
    std::string string(const std::string& key) { return as_string(raw(key), child(key)); }
    std::optional<std::string> string_optional(const std::string& key) {
        auto v = raw_optional(key);
        return v ? std::optional<std::string>(as_string(v->get(), child(key))) : std::nullopt;
    }
    bool boolean(const std::string& key, bool fallback) {
        auto v = raw_optional(key);
        if (!v) {
            return fallback;
        }
        if (!v->get().is_boolean()) {
            throw ConfigError(child(key), "expected true or false");
        }
        return v->get().get<bool>();
    }
    const ordered_json& array(const std::string& key) {
        const ordered_json& v = raw(key);
        if (!v.is_array()) {
            throw ConfigError(child(key), "expected an array");
        }
        return v;
    }

    // Throws on the first key that was never looked up.
    void finish() const {
        for (auto it = node_.begin(); it != node_.end(); ++it) {
            if (!seen_.count(it.key())) {
                throw ConfigError(child(it.key()), "unknown key");
            }
        }
    }

    static double as_number(const ordered_json& v, const std::string& where) {
        if (!v.is_number()) {
            throw ConfigError(where, "expected a number");
        }
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
            throw ConfigError(where, "expected a finite number");
        }
        return d;
    }
    static int as_integer(const ordered_json& v, const std::string& where) {
        if (!v.is_number_integer()) {
            throw ConfigError(where, "expected an integer");
        }
        return v.get<int>();
    }
    static std::string as_string(const ordered_json& v, const std::string& where) {
        if (!v.is_string()) {
            throw ConfigError(where, "expected a string");
        }
        return v.get<std::string>();
    }

private:
    const ordered_json& node_;
    std::string pointer_;
    std::set<std::string> seen_;
};

}  // namespace qswap::detail
