#pragma once

// JSON schemas for the interchange formats, with a validator for the subset of
// JSON Schema they use: type, const, enum, required, properties,
// additionalProperties (boolean), items, minItems, maxItems, minimum, pattern
// and local $ref into "$defs". The same documents are shipped under schemas/.

#include <map>
#include <regex>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctxforge/errors.hpp"

namespace ctxforge::schema {

using Json = nlohmann::ordered_json;

inline const std::map<std::string, std::string>& documents() {
    static const std::map<std::string, std::string> docs{
        {"projector-set", R"json({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "ctxforge projector set",
  "type": "object",
  "required": ["schema", "dim", "vectors"],
  "additionalProperties": false,
  "properties": {
    "schema": {"const": "ctxforge.projector-set/1"},
    "dim": {"type": "integer", "minimum": 1},
    "normalization": {"enum": ["none", "1/sqrt(sum)"]},
    "vectors": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["label", "entries"],
        "additionalProperties": false,
        "properties": {
          "label": {"type": "string"},
          "entries": {"type": "array", "minItems": 1, "items": {"type": "string"}}
        }
      }
    },
    "metadata": {"type": "object"}
  }
})json"},
        {"graph", R"json({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "ctxforge weighted graph",
  "type": "object",
  "required": ["n", "edges"],
  "additionalProperties": false,
  "properties": {
    "schema": {"const": "ctxforge.graph/1"},
    "n": {"type": "integer", "minimum": 0},
    "edges": {"type": "array", "items": {"$ref": "#/$defs/edge"}},
    "weights": {"type": "array", "items": {"$ref": "#/$defs/rational"}},
    "labels": {"type": "array", "items": {"type": "string"}}
  },
  "$defs": {
    "edge": {"type": "array", "minItems": 2, "maxItems": 2, "items": {"type": "integer", "minimum": 0}},
    "rational": {"type": "string", "pattern": "^-?[0-9]+(/[0-9]+)?$"}
  }
})json"},
        {"ks-instance", R"json({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "ctxforge KS instance",
  "type": "object",
  "required": ["d", "graph", "bases"],
  "additionalProperties": false,
  "properties": {
    "schema": {"const": "ctxforge.ks-instance/1"},
    "d": {"type": "integer", "minimum": 1},
    "graph": {"type": "object"},
    "bases": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}}
  }
})json"},
        {"weights", R"json({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "ctxforge weight vector",
  "type": "object",
  "required": ["weights"],
  "additionalProperties": false,
  "properties": {
    "schema": {"const": "ctxforge.weights/1"},
    "weights": {"type": "array", "items": {"type": "string", "pattern": "^[0-9]+(/[0-9]+)?$"}}
  }
})json"},
        {"inequality", R"json({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "ctxforge inequality",
  "type": "object",
  "required": ["schema", "kind", "n", "vertex_coeffs", "bound", "provenance"],
  "properties": {
    "schema": {"const": "ctxforge.inequality/1"},
    "kind": {"enum": ["nc", "bell"]},
    "n": {"type": "integer", "minimum": 0},
    "vertex_coeffs": {"type": "array", "items": {"$ref": "#/$defs/rational"}},
    "edge_coeffs": {"type": "array", "items": {"$ref": "#/$defs/term"}},
    "terms": {"type": "array", "items": {"$ref": "#/$defs/term"}},
    "bound": {"$ref": "#/$defs/rational"},
    "provenance": {
      "type": "object",
      "required": ["set_hash", "weights"],
      "properties": {
        "set_hash": {"type": "string", "pattern": "^fnv1a64:[0-9a-f]{16}$"},
        "weights": {"type": "array", "items": {"$ref": "#/$defs/rational"}}
      }
    }
  },
  "$defs": {
    "rational": {"type": "string", "pattern": "^-?[0-9]+(/[0-9]+)?$"},
    "term": {"type": "array", "minItems": 3, "maxItems": 3}
  }
})json"},
        {"sample", R"json({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "ctxforge sampler output",
  "type": "object",
  "required": ["schema", "estimate", "stderr", "rounds", "seed"],
  "properties": {
    "schema": {"const": "ctxforge.sample/1"},
    "estimate": {"type": "number"},
    "stderr": {"type": ["number", "null"]},
    "rounds": {"type": "integer", "minimum": 1},
    "seed": {"type": "integer", "minimum": 0}
  }
})json"},
        {"report", R"json({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "ctxforge pipeline report",
  "type": "object",
  "required": ["schema", "input", "stages", "checks", "status"],
  "properties": {
    "schema": {"const": "ctxforge.report/1"},
    "input": {"type": "object"},
    "stages": {"type": "object"},
    "checks": {"type": "array", "items": {"type": "object", "required": ["name", "pass"]}},
    "status": {"enum": ["ok", "error"]},
    "error": {"type": "object", "required": ["stage", "kind", "message"]}
  }
})json"},
    };
    return docs;
}

inline const Json& get(const std::string& name) {
    static std::map<std::string, Json> parsed;
    auto it = parsed.find(name);
    if (it != parsed.end()) return it->second;
    const auto& docs = documents();
    auto d = docs.find(name);
    if (d == docs.end()) throw Error("unknown schema '" + name + "'");
    return parsed.emplace(name, Json::parse(d->second)).first->second;
}

namespace detail {

inline bool has_type(const Json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "integer") return v.is_number_integer();
    if (t == "number") return v.is_number();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    return false;
}

inline void check(const Json& v, const Json& s, const Json& root, const std::string& path, std::vector<std::string>& errs) {
    if (s.contains("$ref")) {
        const std::string ref = s["$ref"];
        const std::string prefix = "#/$defs/";
        if (ref.rfind(prefix, 0) != 0) throw Error("unsupported $ref " + ref);
        check(v, root["$defs"][ref.substr(prefix.size())], root, path, errs);
        return;
    }
    if (s.contains("type")) {
        bool ok = false;
        if (s["type"].is_array()) {
            for (const auto& t : s["type"]) ok = ok || has_type(v, t.get<std::string>());
        } else {
            ok = has_type(v, s["type"].get<std::string>());
        }
        if (!ok) {
            errs.push_back(path + ": expected " + s["type"].dump());
            return;
        }
    }
    if (s.contains("const") && v != s["const"]) errs.push_back(path + ": expected " + s["const"].dump());
    if (s.contains("enum")) {
        bool ok = false;
        for (const auto& e : s["enum"]) ok = ok || v == e;
        if (!ok) errs.push_back(path + ": not one of " + s["enum"].dump());
    }
    if (s.contains("minimum") && v.is_number() && v.get<double>() < s["minimum"].get<double>())
        errs.push_back(path + ": below minimum " + s["minimum"].dump());
    if (s.contains("pattern") && v.is_string() && !std::regex_search(v.get<std::string>(), std::regex(s["pattern"].get<std::string>())))
        errs.push_back(path + ": does not match " + s["pattern"].get<std::string>());
    if (v.is_array()) {
        if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) errs.push_back(path + ": too few items");
        if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>()) errs.push_back(path + ": too many items");
        if (s.contains("items"))
            for (std::size_t i = 0; i < v.size(); ++i) check(v[i], s["items"], root, path + "/" + std::to_string(i), errs);
    }
    if (v.is_object()) {
        if (s.contains("required"))
            for (const auto& r : s["required"])
                if (!v.contains(r.get<std::string>())) errs.push_back(path + ": missing '" + r.get<std::string>() + "'");
        const bool closed = s.contains("additionalProperties") && s["additionalProperties"] == false;
        for (const auto& [key, val] : v.items()) {
            if (s.contains("properties") && s["properties"].contains(key))
                check(val, s["properties"][key], root, path + "/" + key, errs);
            else if (closed)
                errs.push_back(path + ": unexpected property '" + key + "'");
        }
    }
}

}  // namespace detail

inline std::vector<std::string> validate(const Json& v, const std::string& name) {
    std::vector<std::string> errs;
    const auto& s = get(name);
    detail::check(v, s, s, "", errs);
    return errs;
}

inline void require_valid(const Json& v, const std::string& name) {
    auto errs = validate(v, name);
    if (errs.empty()) return;
    std::string msg = "document does not match schema '" + name + "'";
    for (const auto& e : errs) msg += "\n  " + (e.empty() ? std::string("/") : e);
    throw SchemaError(msg);
}

}  // namespace ctxforge::schema
