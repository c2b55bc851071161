// Copyright 2026 The SBN Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON form of an SBN:
//
//   { "players": 2,
//     "probability": "float" | "rational",        (optional, default float)
//     "nodes": [
//       { "id": "a", "kind": "chance", "domain": [0, 1], "parents": [],
//         "cpd": [ { "given": [], "p": [0.5, 0.5] } ] },
//       { "id": "x", "kind": "strategic", "domain": [0, 1], "parents": ["a"],
//         "owner": 0,
//         "family": { "name": "f", "deterministic": false,
//                     "strategies": [ { "label": "copy", "cpd": [...] } ] } },
//       { "id": "pi", "kind": "payoff", "owner": "all",
//         "domain": [[0, 1], [1, 0]], "parents": ["a", "x"], "cpd": [...] } ] }
//
// Unknown fields are rejected. Probabilities may be numbers or exact strings
// such as "1/3". Rule-based CPDs are written out as explicit tables.

#ifndef SBN_SERIALIZATION_H_
#define SBN_SERIALIZATION_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sbn/graph.h"

namespace sbn {

// Throws ParseError (with line/column for syntax errors, a JSON path for
// schema errors). Does not run Validate.
SbnGraph ParseSbnJson(std::string_view text);
SbnGraph LoadSbnFile(const std::filesystem::path& path);

// Throws CapacityError if materializing rule CPDs would exceed
// `max_entries` probabilities in total.
nlohmann::ordered_json ToJson(const SbnGraph& graph,
                              std::size_t max_entries = 50'000'000);
std::string SerializeSbn(const SbnGraph& graph);

nlohmann::ordered_json ValueToJson(const Value& value);

// Rows of `cpd` in canonical parent-assignment order (first parent slowest),
// with dense probabilities; rule CPDs are evaluated.
std::vector<Cpd::Row> MaterializeRows(const SbnGraph& graph, const Node& node,
                                      const Cpd& cpd);

// Field-by-field equality with CPDs compared by their materialized rows.
bool StructurallyEqual(const SbnGraph& a, const SbnGraph& b);

// Converts a byte offset into a 1-based (line, column).
std::pair<int, int> LineColumn(std::string_view text, std::size_t offset);

}  // namespace sbn

#endif  // SBN_SERIALIZATION_H_
