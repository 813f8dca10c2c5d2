#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "sqlrepair/table.hpp"

namespace sqlrepair {

// Problem file layout:
//   { "id", "description", "ordered",
//     "pairs": [ { "source": TABLE, "destination": TABLE, "ordered"? } ] }
//   TABLE = { "name", "columns": [ {"name", "type": "int"|"str"} ], "rows": [[...]] }
// A pair-level "ordered" overrides the problem-level flag, which defaults to false.

ProblemSpec problem_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ProblemSpec& problem);
nlohmann::json to_json(const Table& table);
Table table_from_json(const nlohmann::json& doc);

/// Reads and validates one problem file. Throws SchemaError, TypeError or ArityError.
ProblemSpec load_problem(const std::filesystem::path& path);

/// Every `*.json` file in `dir`, keyed by problem id.
std::map<std::string, ProblemSpec> load_problem_dir(const std::filesystem::path& dir);

}  // namespace sqlrepair
