#pragma once

#include <string_view>
#include <vector>

#include "sqlrepair/evaluator.hpp"
#include "sqlrepair/synth.hpp"

namespace sqlrepair {

enum class Category {
  // syntax
  BrokenOperator,
  ColumnReferenceError,
  QuotesOnStrings,
  IncompleteQuery,
  WrongOrder,
  TableReferenceError,
  ExtraCommas,
  MissingCommas,
  MiscSyntax,
  // semantic
  WrongSubclausesInWhere,
  MissingOrExtraOperator,
  WrongValuesInWhere,
  WrongOrdering,
  ColumnMismatch,
  WrongOperatorInWhere,
  MissingJoin,
  MiscSemantic,
};

std::string_view to_string(Category c);
bool is_syntax(Category c);

struct ErrorReport {
  Verdict verdict = Verdict::SyntaxError;
  /// Sorted by enum order, no duplicates. Empty only for a correct query.
  std::vector<Category> categories;

  bool has(Category c) const;
};

/// Token and AST heuristics for syntax errors; a diff of actual and expected
/// output, then trial synthesis, for semantic errors.
ErrorReport classify(std::string_view text, const Triage& triage, const ProblemSpec& problem,
                     const SynthOptions& options = {});

}  // namespace sqlrepair
