// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <fstream>
#include <json.hpp>
#include <string>

namespace mbf::test {

// Minimal checker for the fixture schema dialect: type, nullable, properties
// (all required, no extras), items, and "$ref" into top-level definitions.
// Returns an empty string on success, otherwise the first mismatching path.
inline std::string schema_mismatch(const nlohmann::json& doc, const nlohmann::json& schema,
                                   const nlohmann::json& root, const std::string& path = "$") {
  if (schema.contains("$ref")) return schema_mismatch(doc, root.at("definitions").at(schema.at("$ref").get<std::string>()), root, path);
  if (doc.is_null() && schema.value("nullable", false)) return {};
  const std::string type = schema.at("type");
  const bool ok = (type == "object" && doc.is_object()) || (type == "array" && doc.is_array()) ||
                  (type == "string" && doc.is_string()) || (type == "number" && doc.is_number());
  if (!ok) return path + ": expected " + type;
  if (schema.contains("properties")) {
    const auto& props = schema.at("properties");
    for (auto it = props.begin(); it != props.end(); ++it) {
      if (!doc.contains(it.key())) return path + "." + it.key() + ": missing";
      const std::string m = schema_mismatch(doc.at(it.key()), it.value(), root, path + "." + it.key());
      if (!m.empty()) return m;
    }
    for (auto it = doc.begin(); it != doc.end(); ++it)
      if (!props.contains(it.key())) return path + "." + it.key() + ": unexpected";
  }
  if (schema.contains("items"))
    for (std::size_t i = 0; i < doc.size(); ++i) {
      const std::string m = schema_mismatch(doc[i], schema.at("items"), root, path + "[" + std::to_string(i) + "]");
      if (!m.empty()) return m;
    }
  return {};
}

inline nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  return nlohmann::json::parse(in);
}

}  // namespace mbf::test
