#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "seqdual/optimize.hpp"

namespace seqdual {

// Canonical serialization: object keys sorted, doubles at 17 significant
// digits, integral values as integers, no whitespace. Parsing the output and
// dumping again reproduces the bytes exactly, which is what the report
// determinism checks compare. Non-finite numbers are rejected.
std::string canonical_json_dump(const nlohmann::json& j);

// nlohmann parse wrapped to report 1-based line/column on failure.
nlohmann::json parse_json_text(const std::string& text);

// A batch job: named spaces, sequences and operators, plus a task list that
// refers to them by name.
//
// {
//   "version": 1,
//   "spaces":    {"E": <space>},
//   "sequences": {"x": {"space": "E", "vectors": [[...], ...]}},
//   "operators": {"T": {"domain": "E", "codomain": "F", "matrix": [[...]]}},
//   "tasks": [
//     {"task": "norm",    "class": "lp:2",  "sequence": "x"},
//     {"task": "opnorm",  "x": "lpw:2", "y": "lp:2", "operator": "T", "k": 2},
//     {"task": "adjoint-report", "x": "...", "y": "...", "operator": "T",
//      "k": 2, "reverse": false}
//   ]
// }
//
// Unknown names and malformed entries raise with the offending reference.
nlohmann::json run_manifest(const nlohmann::json& manifest,
                            const OptConfig& cfg);

}  // namespace seqdual
