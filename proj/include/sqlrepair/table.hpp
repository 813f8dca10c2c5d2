#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sqlrepair {

enum class ColumnType { Int, Str };

std::string_view to_string(ColumnType type);

/// A cell. Int and Str never compare equal and are never coerced into each other.
using Value = std::variant<std::int64_t, std::string>;

ColumnType type_of(const Value& v);
std::string format_value(const Value& v);

struct Column {
  std::string name;
  ColumnType type = ColumnType::Int;

  friend bool operator==(const Column&, const Column&) = default;
};

using Row = std::vector<Value>;

struct Table {
  std::string name;
  std::vector<Column> columns;
  std::vector<Row> rows;

  std::optional<std::size_t> column_index(std::string_view column) const;
  std::vector<std::string> column_names() const;

  friend bool operator==(const Table&, const Table&) = default;
};

/// One example: the query must map `source` onto `destination`.
struct TablePair {
  Table source;
  Table destination;
  bool ordered = false;
};

/// A problem and its example set. All pairs share one source and one destination schema.
struct ProblemSpec {
  std::string id;
  std::string description;
  std::vector<TablePair> pairs;

  const Table& source_schema() const { return pairs.front().source; }
  const Table& destination_schema() const { return pairs.front().destination; }
};

class ProblemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SchemaError : public ProblemError {
 public:
  using ProblemError::ProblemError;
};

class TypeError : public ProblemError {
 public:
  using ProblemError::ProblemError;
};

class ArityError : public ProblemError {
 public:
  using ProblemError::ProblemError;
};

/// Throws ArityError / TypeError / SchemaError when a table breaks its invariants.
void validate(const Table& table);

/// Validates every table plus the shared-schema and non-empty-pairs invariants.
void validate(const ProblemSpec& problem);

/// Column names, order and types must agree; rows are compared as sequences when
/// `ordered`, otherwise as multisets.
bool tables_equal(const Table& a, const Table& b, bool ordered);

}  // namespace sqlrepair
