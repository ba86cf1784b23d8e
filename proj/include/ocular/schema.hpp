#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace ocular::schema {

// Supported keywords: type (string or array), properties, required,
// additionalProperties (boolean), items, enum, const, minimum, maximum.
// Returns one "path: problem" line per violation; empty means valid.
std::vector<std::string> validate(const nlohmann::json& schema, const nlohmann::json& doc);

inline bool conforms(const nlohmann::json& schema, const nlohmann::json& doc) { return validate(schema, doc).empty(); }

}  // namespace ocular::schema
