#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sqlrepair/ast.hpp"
#include "sqlrepair/table.hpp"

namespace sqlrepair {

// Hole-based synthesis. A query is abstracted by replacing constants, operators,
// columns or connectors with typed holes; `solve` searches the finite hole domains
// for values under which every example pair passes.
//
// Domains:
//   Col   - source columns (original first), restricted to types the leaf's
//           operator supports
//   Op    - {=, !=} over strings, all six comparisons over integers
//   Bop   - {AND, OR}
//   Const - distinct values of the compared column across every source, plus
//           min-1 and max+1 for integers or one absent sentinel for strings
// Enumeration is lexicographic over holes in id order: leaves left to right, and
// inside a leaf the connector, then column holes, then the constant, with the
// operator varying fastest. Each hole tries its original value first, then its
// domain in ascending order. The first satisfying assignment wins.

enum class HoleKind { Const, Op, Col, Bop };
enum class HoleSlot { Lhs, Op, Rhs, Connector };

struct ColumnName {
  std::string name;
  friend bool operator==(const ColumnName&, const ColumnName&) = default;
};

using HoleValue = std::variant<Value, CmpOp, ColumnName, BoolOp>;

struct Hole {
  HoleKind kind = HoleKind::Const;
  std::size_t id = 0;
  /// Leaf the hole sits in; a connector hole belongs to the leaf it precedes.
  std::size_t leaf = 0;
  HoleSlot slot = HoleSlot::Lhs;
  /// Type of a Const/Op hole. nullopt when it follows a Col hole in the same leaf.
  std::optional<ColumnType> type;
  std::optional<HoleValue> original;
};

/// `base` keeps the original token (or a placeholder for a new leaf) at every hole.
struct HoleQuery {
  Query base;
  std::vector<Hole> holes;
};

/// Indexed by hole id.
using Assignment = std::vector<HoleValue>;

struct SolveVerdict {
  std::optional<Assignment> model;
  bool sat() const { return model.has_value(); }
};

using SteadyClock = std::chrono::steady_clock;

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SynthOptions {
  std::chrono::milliseconds per_solve{2000};
  /// Overall deadline. Passing it turns a timed-out solve into BudgetExceeded
  /// instead of Unsat.
  SteadyClock::time_point deadline = SteadyClock::time_point::max();
};

/// True iff every pair's source evaluates to its destination. EvalError propagates.
bool check(const Query& query, const ProblemSpec& problem);

Query substitute(const HoleQuery& hq, const Assignment& assignment);

/// The query with holes written as CONST_i / OP_i / COL_i / BOP_i.
std::string render(const HoleQuery& hq);

/// Throws BudgetExceeded once `deadline` passes. A returned model always passes `check`.
SolveVerdict solve(const HoleQuery& hq, const ProblemSpec& problem,
                   SteadyClock::time_point deadline = SteadyClock::time_point::max());

// Abstractions used by the stages below; exposed for tests and tooling.
HoleQuery abstract_constants(const Query& query, const ProblemSpec& problem);
/// Operator holes; the constants of the abstracted comparisons are reopened too.
HoleQuery abstract_operators(const Query& query, const ProblemSpec& problem);
/// Column holes for every column operand (or only those of `leaf`). The constant of
/// an abstracted comparison is reopened; its operator stays fixed.
HoleQuery abstract_columns(const Query& query, const ProblemSpec& problem,
                           std::optional<std::size_t> leaf = std::nullopt);
/// Appends `BOP COL OP CONST` (just `COL OP CONST` when there is no WHERE yet).
HoleQuery append_clause(HoleQuery hq, const ProblemSpec& problem);

struct SynthResult {
  Query query;
  /// A column of a comparison kept from the input was replaced.
  bool reworked_columns = false;
};

// Each returns nullopt for Unsat. A solve that runs out of its per-solve budget
// counts as Unsat; BudgetExceeded escapes only once the overall deadline passes.
std::optional<SynthResult> synth_constants(const Query& query, const ProblemSpec& problem,
                                           const SynthOptions& options = {});
std::optional<SynthResult> synth_operators(const Query& query, const ProblemSpec& problem,
                                           const SynthOptions& options = {});
std::optional<SynthResult> synth_columns(const Query& query, const ProblemSpec& problem,
                                         const SynthOptions& options = {});
/// Keeps ever smaller subsets of the leaves (largest first, lexicographic by index),
/// splicing connectors, and reruns column synthesis on each.
std::optional<SynthResult> remove_clauses(const Query& query, const ProblemSpec& problem,
                                          const SynthOptions& options = {});
/// Appends abstract leaves to the column abstraction of the query until a model is
/// found or the predicate holds five leaves; then retries from an empty predicate.
std::optional<SynthResult> synth_clauses(const Query& query, const ProblemSpec& problem,
                                         const SynthOptions& options = {});

inline constexpr std::size_t kMaxLeaves = 5;

}  // namespace sqlrepair
