#include "sqlrepair/problem_io.hpp"

#include <algorithm>
#include <fstream>
#include <vector>

namespace sqlrepair {

namespace {

using nlohmann::json;

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw SchemaError(where + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

std::string string_field(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_string()) throw SchemaError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

ColumnType column_type(const std::string& name, const std::string& where) {
  if (name == "int") return ColumnType::Int;
  if (name == "str") return ColumnType::Str;
  throw SchemaError(where + ": unknown column type '" + name + "'");
}

Value cell(const json& v, const std::string& where) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_string()) return v.get<std::string>();
  throw TypeError(where + ": cells must be integers or strings");
}

}  // namespace

Table table_from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("table must be an object");
  Table table;
  table.name = string_field(doc, "name", "table");
  const std::string where = "table '" + table.name + "'";
  const json& columns = field(doc, "columns", where);
  if (!columns.is_array()) throw SchemaError(where + ": 'columns' must be an array");
  for (const json& c : columns) {
    table.columns.push_back(
        {string_field(c, "name", where), column_type(string_field(c, "type", where), where)});
  }
  const json& rows = field(doc, "rows", where);
  if (!rows.is_array()) throw SchemaError(where + ": 'rows' must be an array");
  for (const json& r : rows) {
    if (!r.is_array()) throw SchemaError(where + ": each row must be an array");
    Row row;
    for (const json& v : r) row.push_back(cell(v, where));
    table.rows.push_back(std::move(row));
  }
  validate(table);
  return table;
}

ProblemSpec problem_from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("problem must be a JSON object");
  ProblemSpec problem;
  problem.id = string_field(doc, "id", "problem");
  const std::string where = "problem '" + problem.id + "'";
  if (doc.contains("description")) problem.description = string_field(doc, "description", where);
  bool ordered = false;
  if (doc.contains("ordered")) {
    if (!doc["ordered"].is_boolean()) throw SchemaError(where + ": 'ordered' must be a boolean");
    ordered = doc["ordered"].get<bool>();
  }
  const json& pairs = field(doc, "pairs", where);
  if (!pairs.is_array() || pairs.empty()) {
    throw SchemaError(where + ": 'pairs' must be a non-empty array");
  }
  for (const json& p : pairs) {
    TablePair pair;
    pair.source = table_from_json(field(p, "source", where));
    pair.destination = table_from_json(field(p, "destination", where));
    pair.ordered = ordered;
    if (p.contains("ordered")) {
      if (!p["ordered"].is_boolean()) throw SchemaError(where + ": 'ordered' must be a boolean");
      pair.ordered = p["ordered"].get<bool>();
    }
    problem.pairs.push_back(std::move(pair));
  }
  validate(problem);
  return problem;
}

json to_json(const Table& table) {
  json columns = json::array();
  for (const Column& c : table.columns) {
    columns.push_back({{"name", c.name}, {"type", std::string(to_string(c.type))}});
  }
  json rows = json::array();
  for (const Row& row : table.rows) {
    json r = json::array();
    for (const Value& v : row) {
      if (const auto* i = std::get_if<std::int64_t>(&v)) {
        r.push_back(*i);
      } else {
        r.push_back(std::get<std::string>(v));
      }
    }
    rows.push_back(std::move(r));
  }
  return {{"name", table.name}, {"columns", std::move(columns)}, {"rows", std::move(rows)}};
}

json to_json(const ProblemSpec& problem) {
  json pairs = json::array();
  const bool ordered = !problem.pairs.empty() && problem.pairs.front().ordered;
  for (const TablePair& p : problem.pairs) {
    json pair = {{"source", to_json(p.source)}, {"destination", to_json(p.destination)}};
    if (p.ordered != ordered) pair["ordered"] = p.ordered;
    pairs.push_back(std::move(pair));
  }
  return {{"id", problem.id},
          {"description", problem.description},
          {"ordered", ordered},
          {"pairs", std::move(pairs)}};
}

ProblemSpec load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open problem file " + path.string());
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw SchemaError("malformed JSON in " + path.string());
  return problem_from_json(doc);
}

std::map<std::string, ProblemSpec> load_problem_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw SchemaError("problem directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::map<std::string, ProblemSpec> problems;
  for (const auto& file : files) {
    ProblemSpec p = load_problem(file);
    std::string id = p.id;
    if (!problems.emplace(id, std::move(p)).second) {
      throw SchemaError("duplicate problem id '" + id + "' in " + file.string());
    }
  }
  return problems;
}

}  // namespace sqlrepair
