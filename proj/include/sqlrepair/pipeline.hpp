#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sqlrepair/evaluator.hpp"
#include "sqlrepair/synth.hpp"

namespace sqlrepair {

enum class RepairTag {
  OperatorMismatch,
  ColumnMismatch,
  StringRepair,
  ConstantSynthesis,
  OperatorSynthesis,
  ColumnSynthesis,
  ClauseRemoval,
  ClauseSynthesis,
};

std::string_view to_string(RepairTag tag);
bool is_synthesis(RepairTag tag);

enum class RepairStatus { Repaired, Unrepairable };

std::string_view to_string(RepairStatus s);

enum class FailureReason {
  ParseFailure,
  UnresolvedLenient,  // an unquoted word could not be placed
  AlreadyCorrect,
  Exhausted,          // every stage came back Unsat
  BudgetExceeded,
  EvalFailure,        // still fails to run after the rewrites and no stage applies
};

std::string_view to_string(FailureReason r);

struct RepairResult {
  RepairStatus status = RepairStatus::Unrepairable;
  std::string original;
  std::optional<Query> repaired;
  /// Pipeline order; rewrites before synthesis.
  std::vector<RepairTag> operations;
  std::optional<FailureReason> reason;
  std::chrono::duration<double, std::milli> elapsed{0};

  bool has(RepairTag tag) const;
};

struct RepairBudget {
  std::chrono::milliseconds total{10000};
  std::chrono::milliseconds per_solve{2000};
};

RepairResult repair(std::string_view text, const ProblemSpec& problem, const RepairBudget& budget = {});

struct Attempt {
  std::string text;
  Triage triage;
};

using RepairFn = std::function<RepairResult(std::string_view, const ProblemSpec&, const RepairBudget&)>;

inline constexpr std::size_t kMaxRepairFailures = 10;

/// `attempts` are in submission order. Incorrect ones are tried newest first; the
/// first repair wins, and the search gives up after kMaxRepairFailures failures.
RepairResult repair_latest(const std::vector<Attempt>& attempts, const ProblemSpec& problem,
                           const RepairBudget& budget = {}, const RepairFn& repair_fn = repair);

}  // namespace sqlrepair
