#include "ocular/schema.hpp"

#include <fmt/format.h>

namespace ocular::schema {

using nlohmann::json;

namespace {

bool has_type(const json& doc, const std::string& type) {
  if (type == "object") return doc.is_object();
  if (type == "array") return doc.is_array();
  if (type == "string") return doc.is_string();
  if (type == "boolean") return doc.is_boolean();
  if (type == "null") return doc.is_null();
  if (type == "integer") return doc.is_number_integer();
  if (type == "number") return doc.is_number();
  return false;
}

void check(const json& s, const json& doc, const std::string& path, std::vector<std::string>& out) {
  if (const auto t = s.find("type"); t != s.end()) {
    bool ok = false;
    if (t->is_string()) {
      ok = has_type(doc, t->get<std::string>());
    } else {
      for (const json& alt : *t) ok = ok || has_type(doc, alt.get<std::string>());
    }
    if (!ok) {
      out.push_back(fmt::format("{}: expected type {}", path, t->dump()));
      return;
    }
  }
  if (const auto c = s.find("const"); c != s.end() && doc != *c) {
    out.push_back(fmt::format("{}: expected {}", path, c->dump()));
  }
  if (const auto e = s.find("enum"); e != s.end()) {
    bool found = false;
    for (const json& v : *e) found = found || v == doc;
    if (!found) out.push_back(fmt::format("{}: {} not in {}", path, doc.dump(), e->dump()));
  }
  if (doc.is_number()) {
    const double v = doc.get<double>();
    if (const auto m = s.find("minimum"); m != s.end() && v < m->get<double>()) {
      out.push_back(fmt::format("{}: {} below minimum {}", path, v, m->get<double>()));
    }
    if (const auto m = s.find("maximum"); m != s.end() && v > m->get<double>()) {
      out.push_back(fmt::format("{}: {} above maximum {}", path, v, m->get<double>()));
    }
  }
  if (doc.is_object()) {
    if (const auto req = s.find("required"); req != s.end()) {
      for (const json& k : *req) {
        if (!doc.contains(k.get<std::string>())) out.push_back(fmt::format("{}: missing '{}'", path, k.get<std::string>()));
      }
    }
    const auto props = s.find("properties");
    const bool closed = s.value("additionalProperties", true) == false;
    for (const auto& [key, value] : doc.items()) {
      if (props != s.end() && props->contains(key)) {
        check((*props)[key], value, path + "." + key, out);
      } else if (closed) {
        out.push_back(fmt::format("{}: unexpected '{}'", path, key));
      }
    }
  }
  if (doc.is_array()) {
    if (const auto items = s.find("items"); items != s.end()) {
      for (std::size_t i = 0; i < doc.size(); ++i) check(*items, doc[i], fmt::format("{}[{}]", path, i), out);
    }
  }
}

}  // namespace

std::vector<std::string> validate(const json& schema, const json& doc) {
  std::vector<std::string> out;
  check(schema, doc, "$", out);
  return out;
}

}  // namespace ocular::schema
