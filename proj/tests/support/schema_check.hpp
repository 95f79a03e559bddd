#pragma once

// Checks a JSON document against the subset of JSON Schema used in schemas/:
// type, const, enum, properties, required, additionalProperties (bool),
// items, minItems, minimum, maximum, exclusiveMinimum.

#include <json.hpp>

#include <fstream>
#include <string>
#include <vector>

namespace schema_check {

using json = nlohmann::json;

inline bool has_type(const json& v, const std::string& t) {
  if (t == "null") return v.is_null();
  if (t == "boolean") return v.is_boolean();
  if (t == "integer") return v.is_number_integer() || v.is_number_unsigned();
  if (t == "number") return v.is_number();
  if (t == "string") return v.is_string();
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  return false;
}

inline void check(const json& v, const json& s, const std::string& path,
                  std::vector<std::string>& errors) {
  auto fail = [&](const std::string& what) { errors.push_back(path + ": " + what); };
  if (s.contains("type")) {
    bool ok = false;
    if (s["type"].is_array()) {
      for (const auto& t : s["type"]) ok = ok || has_type(v, t.get<std::string>());
    } else {
      ok = has_type(v, s["type"].get<std::string>());
    }
    if (!ok) return fail("expected type " + s["type"].dump() + ", got " + v.dump());
  }
  if (s.contains("const") && v != s["const"]) fail("expected " + s["const"].dump());
  if (s.contains("enum")) {
    bool found = false;
    for (const auto& e : s["enum"]) found = found || v == e;
    if (!found) fail(v.dump() + " not in " + s["enum"].dump());
  }
  if (v.is_number()) {
    const double x = v.get<double>();
    if (s.contains("minimum") && x < s["minimum"].get<double>()) fail("below minimum");
    if (s.contains("maximum") && x > s["maximum"].get<double>()) fail("above maximum");
    if (s.contains("exclusiveMinimum") && x <= s["exclusiveMinimum"].get<double>())
      fail("not above exclusiveMinimum");
  }
  if (v.is_object()) {
    if (s.contains("required"))
      for (const auto& r : s["required"])
        if (!v.contains(r.get<std::string>())) fail("missing " + r.get<std::string>());
    const json props = s.value("properties", json::object());
    for (const auto& [key, child] : v.items()) {
      if (props.contains(key))
        check(child, props[key], path + "." + key, errors);
      else if (s.contains("additionalProperties") && s["additionalProperties"] == false)
        fail("unexpected property " + key);
    }
  }
  if (v.is_array()) {
    if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) fail("too few items");
    if (s.contains("items"))
      for (std::size_t i = 0; i < v.size(); ++i)
        check(v[i], s["items"], path + "[" + std::to_string(i) + "]", errors);
  }
}

// Empty result means valid.
inline std::vector<std::string> validate(const json& doc, const json& schema) {
  std::vector<std::string> errors;
  check(doc, schema, "$", errors);
  return errors;
}

inline json load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return json::parse(f);
}

}  // namespace schema_check
