#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "lnayield/error.hpp"

// Typed field access that reports the JSON pointer of a bad field.
namespace lnayield::json_util {

using nlohmann::json;

[[noreturn]] inline void fail(const std::string& module, const std::string& path, const std::string& what) {
  throw ValidationError(module, "at " + (path.empty() ? std::string("/") : path) + ": " + what);
}

inline std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
inline std::string child(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

inline const json& require(const json& j, const std::string& key, const std::string& path, const std::string& module) {
  if (!j.is_object()) fail(module, path, "expected object");
  auto it = j.find(key);
  if (it == j.end()) fail(module, child(path, key), "missing required field");
  return *it;
}

inline double number(const json& j, const std::string& key, const std::string& path, const std::string& module) {
  const json& v = require(j, key, path, module);
  if (!v.is_number()) fail(module, child(path, key), "expected number");
  return v.get<double>();
}

inline double number_or(const json& j, const std::string& key, double fallback, const std::string& path,
                        const std::string& module) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return number(j, key, path, module);
}

inline std::optional<double> optional_number(const json& j, const std::string& key, const std::string& path,
                                             const std::string& module) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return number(j, key, path, module);
}

inline std::string string(const json& j, const std::string& key, const std::string& path, const std::string& module) {
  const json& v = require(j, key, path, module);
  if (!v.is_string()) fail(module, child(path, key), "expected string");
  return v.get<std::string>();
}

inline const json& array(const json& j, const std::string& key, const std::string& path, const std::string& module) {
  const json& v = require(j, key, path, module);
  if (!v.is_array()) fail(module, child(path, key), "expected array");
  return v;
}

inline const json& object(const json& j, const std::string& key, const std::string& path, const std::string& module) {
  const json& v = require(j, key, path, module);
  if (!v.is_object()) fail(module, child(path, key), "expected object");
  return v;
}

inline void check_schema_version(const json& j, int expected, const std::string& path, const std::string& module) {
  const json& v = require(j, "schema_version", path, module);
  if (!v.is_number_integer() || v.get<int>() != expected)
    fail(module, child(path, "schema_version"), "unsupported schema version (expected " + std::to_string(expected) + ")");
}

}  // namespace lnayield::json_util
