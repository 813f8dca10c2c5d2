#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sqlrepair/ast.hpp"
#include "sqlrepair/table.hpp"

namespace sqlrepair {

enum class EvalErrorKind { UnknownColumn, TypeMismatch, UnknownTable, NotStrict };

/// What a database would report as an error message. Triage counts these as syntax errors.
class EvalError : public std::runtime_error {
 public:
  EvalError(EvalErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  EvalErrorKind kind() const { return kind_; }

 private:
  EvalErrorKind kind_;
};

/// Applies `op` to two values of the same kind. Ints compare numerically, strings bytewise.
/// Throws EvalError(TypeMismatch) for mixed kinds.
bool compare(const Value& lhs, CmpOp op, const Value& rhs);

/// Value of an operand on `row`; the operand must be a column reference or a literal.
Value operand_value(const Operand& operand, const Table& source, const Row& row);

/// Runs `query` against `source`: filter, stable ORDER BY, projection, DISTINCT.
Table eval(const Query& query, const Table& source);

enum class Verdict { Correct, SyntaxError, SemanticError };

std::string_view to_string(Verdict v);

struct Triage {
  Verdict verdict = Verdict::SyntaxError;
  std::optional<std::size_t> first_failing_pair;
  std::optional<Table> actual_output;
  std::string detail;
};

/// Lenient parse that knows the problem's source columns.
ParseResult parse_for(std::string_view text, const ProblemSpec& problem);

/// Syntax error when parsing fails, lenient tokens remain or evaluation errors out;
/// otherwise Correct or SemanticError against the pairs in order.
Triage triage(std::string_view text, const ProblemSpec& problem);

/// What a student sees after an attempt.
struct FeedbackView {
  std::size_t revealed_pairs = 1;
  std::optional<std::size_t> pair;
  Table expected;
  std::optional<Table> actual;
  std::string message;
};

}  // namespace sqlrepair
