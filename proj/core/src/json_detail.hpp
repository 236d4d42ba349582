#pragma once

// Strict readers shared by the JSON codecs. Every failure is a SchemaError naming the field path.

#include "covkit/error.hpp"
#include "covkit/rational.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace covkit::detail {

using nlohmann::json;

inline std::string join_path(std::string_view base, std::string_view key) {
    return std::string(base) + "/" + std::string(key);
}

inline void expect_object(const json& doc, const std::string& path) {
    if (!doc.is_object()) throw SchemaError(path.empty() ? "/" : path, "expected an object");
}

/// Rejects keys outside `allowed` and requires every key in `required`.
inline void check_keys(const json& doc, const std::string& path, std::initializer_list<std::string_view> allowed,
                       std::initializer_list<std::string_view> required) {
    expect_object(doc, path);
    for (const auto& [key, value] : doc.items()) {
        bool ok = false;
        for (const auto a : allowed) ok = ok || a == key;
        if (!ok) throw SchemaError(join_path(path, key), "unknown field");
    }
    for (const auto r : required) {
        if (!doc.contains(std::string(r))) throw SchemaError(join_path(path, r), "missing required field");
    }
}

inline std::int64_t as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw SchemaError(path, "expected an integer");
    return v.get<std::int64_t>();
}

inline std::uint64_t as_uint(const json& v, const std::string& path) {
    const std::int64_t x = as_int(v, path);
    if (x < 0) throw SchemaError(path, "expected a non-negative integer");
    return static_cast<std::uint64_t>(x);
}

inline bool as_bool(const json& v, const std::string& path) {
    if (!v.is_boolean()) throw SchemaError(path, "expected a boolean");
    return v.get<bool>();
}

inline const json& as_array(const json& v, const std::string& path) {
    if (!v.is_array()) throw SchemaError(path, "expected an array");
    return v;
}

inline std::vector<std::int64_t> as_int_array(const json& v, const std::string& path) {
    as_array(v, path);
    std::vector<std::int64_t> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_int(v[i], path + "/" + std::to_string(i)));
    return out;
}

inline Rational as_rational(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) throw SchemaError(path, "expected [numerator, denominator]");
    const std::int64_t num = as_int(v[0], path + "/0");
    const std::int64_t den = as_int(v[1], path + "/1");
    if (den <= 0) throw SchemaError(path + "/1", "denominator must be positive");
    return Rational(num, den);
}

inline json rational_json(const Rational& r) { return json::array({r.numerator(), r.denominator()}); }

}  // namespace covkit::detail
