#include "sqlrepair/table.hpp"

#include <algorithm>
#include <set>

namespace sqlrepair {

std::string_view to_string(ColumnType type) { return type == ColumnType::Int ? "int" : "str"; }

ColumnType type_of(const Value& v) {
  return std::holds_alternative<std::int64_t>(v) ? ColumnType::Int : ColumnType::Str;
}

std::string format_value(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  return std::get<std::string>(v);
}

std::optional<std::size_t> Table::column_index(std::string_view column) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == column) return i;
  }
  return std::nullopt;
}

std::vector<std::string> Table::column_names() const {
  std::vector<std::string> names;
  names.reserve(columns.size());
  for (const Column& c : columns) names.push_back(c.name);
  return names;
}

void validate(const Table& table) {
  std::set<std::string> seen;
  for (const Column& c : table.columns) {
    if (c.name.empty()) throw SchemaError("table '" + table.name + "' has an unnamed column");
    if (!seen.insert(c.name).second) {
      throw SchemaError("table '" + table.name + "' repeats column '" + c.name + "'");
    }
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const Row& row = table.rows[r];
    if (row.size() != table.columns.size()) {
      throw ArityError("table '" + table.name + "' row " + std::to_string(r) + " has " +
                       std::to_string(row.size()) + " cells, expected " +
                       std::to_string(table.columns.size()));
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (type_of(row[c]) != table.columns[c].type) {
        throw TypeError("table '" + table.name + "' row " + std::to_string(r) + " column '" +
                        table.columns[c].name + "' expects " +
                        std::string(to_string(table.columns[c].type)));
      }
    }
  }
}

void validate(const ProblemSpec& problem) {
  if (problem.pairs.empty()) throw SchemaError("problem '" + problem.id + "' has no pairs");
  const TablePair& first = problem.pairs.front();
  for (const TablePair& pair : problem.pairs) {
    validate(pair.source);
    validate(pair.destination);
    if (pair.source.name != first.source.name || pair.source.columns != first.source.columns) {
      throw SchemaError("problem '" + problem.id + "' mixes source schemas");
    }
    if (pair.destination.columns != first.destination.columns) {
      throw SchemaError("problem '" + problem.id + "' mixes destination schemas");
    }
  }
}

bool tables_equal(const Table& a, const Table& b, bool ordered) {
  if (a.columns != b.columns) return false;
  if (a.rows.size() != b.rows.size()) return false;
  if (ordered) return a.rows == b.rows;
  std::vector<Row> lhs = a.rows;
  std::vector<Row> rhs = b.rows;
  std::sort(lhs.begin(), lhs.end());
  std::sort(rhs.begin(), rhs.end());
  return lhs == rhs;
}

}  // namespace sqlrepair
