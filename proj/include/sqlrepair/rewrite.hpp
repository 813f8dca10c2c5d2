#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sqlrepair/ast.hpp"
#include "sqlrepair/table.hpp"

namespace sqlrepair {

// Rule-based rewrites that need no search: C/Java operators, the column list and
// string quoting.

enum class RewriteKind { OperatorMismatch, ColumnMismatch, StringRepair };

std::string_view to_string(RewriteKind kind);

struct RewriteStep {
  RewriteKind kind;
  std::string before;
  std::string after;
};

/// Empty iff the query came back unchanged.
using RewriteLog = std::vector<RewriteStep>;

enum class RewriteIssue {
  NoFix,      // the select list cannot be reconciled with the destination
  Ambiguous,  // an unquoted word is compared against a non-string operand
};

struct Rewrite {
  Query query;
  RewriteLog log;
  std::optional<RewriteIssue> issue;

  bool changed() const { return !log.empty(); }
};

/// `==` -> `=`, `&&` -> AND, `||` -> OR. The AST already holds the SQL form, so this
/// only retires the corresponding lenient flags and logs the edits.
Rewrite fix_operators(const Query& query);

/// Reconciles the select list with the destination schema. First applicable wins:
/// `*` expansion, positional AS-renaming, rebuilding the list in destination order,
/// case correction of unknown column names.
Rewrite fix_columns(const Query& query, const ProblemSpec& problem);

/// Double-quoted strings become single-quoted; unquoted words become column
/// references when they name a column, or string literals when compared to a
/// string column.
Rewrite fix_strings(const Query& query, const Table& source);

}  // namespace sqlrepair
