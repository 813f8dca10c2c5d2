#include "sqlrepair/pipeline.hpp"

#include <algorithm>

#include "sqlrepair/rewrite.hpp"

namespace sqlrepair {

std::string_view to_string(RepairTag tag) {
  switch (tag) {
    case RepairTag::OperatorMismatch: return "OperatorMismatch";
    case RepairTag::ColumnMismatch: return "ColumnMismatch";
    case RepairTag::StringRepair: return "StringRepair";
    case RepairTag::ConstantSynthesis: return "ConstantSynthesis";
    case RepairTag::OperatorSynthesis: return "OperatorSynthesis";
    case RepairTag::ColumnSynthesis: return "ColumnSynthesis";
    case RepairTag::ClauseRemoval: return "ClauseRemoval";
    case RepairTag::ClauseSynthesis: return "ClauseSynthesis";
  }
  return "?";
}

bool is_synthesis(RepairTag tag) { return tag >= RepairTag::ConstantSynthesis; }

std::string_view to_string(RepairStatus s) {
  return s == RepairStatus::Repaired ? "repaired" : "unrepairable";
}

std::string_view to_string(FailureReason r) {
  switch (r) {
    case FailureReason::ParseFailure: return "parse-failure";
    case FailureReason::UnresolvedLenient: return "unresolved-token";
    case FailureReason::AlreadyCorrect: return "already-correct";
    case FailureReason::Exhausted: return "exhausted";
    case FailureReason::BudgetExceeded: return "budget-exceeded";
    case FailureReason::EvalFailure: return "eval-failure";
  }
  return "?";
}

bool RepairResult::has(RepairTag tag) const {
  return std::find(operations.begin(), operations.end(), tag) != operations.end();
}

namespace {

bool passes(const Query& q, const ProblemSpec& problem, bool& ran) {
  try {
    const bool ok = check(q, problem);
    ran = true;
    return ok;
  } catch (const EvalError&) {
    ran = false;
    return false;
  }
}

using Stage = std::optional<SynthResult> (*)(const Query&, const ProblemSpec&, const SynthOptions&);

struct StageEntry {
  Stage run;
  RepairTag tag;
};

}  // namespace

RepairResult repair(std::string_view text, const ProblemSpec& problem, const RepairBudget& budget) {
  const auto start = SteadyClock::now();
  RepairResult result;
  result.original = std::string(text);
  auto finish = [&](RepairResult& r) -> RepairResult& {
    r.elapsed = SteadyClock::now() - start;
    return r;
  };
  auto fail = [&](FailureReason reason) {
    result.status = RepairStatus::Unrepairable;
    result.reason = reason;
    result.repaired.reset();
    return finish(result);
  };

  ParseResult parsed = parse_for(text, problem);
  if (!sqlrepair::parsed(parsed)) return fail(FailureReason::ParseFailure);
  Query q = std::get<Query>(std::move(parsed));

  Rewrite ops = fix_operators(q);
  if (ops.changed()) result.operations.push_back(RepairTag::OperatorMismatch);
  Rewrite cols = fix_columns(ops.query, problem);
  if (cols.changed()) result.operations.push_back(RepairTag::ColumnMismatch);
  Rewrite strs = fix_strings(cols.query, problem.source_schema());
  if (strs.changed()) result.operations.push_back(RepairTag::StringRepair);
  q = std::move(strs.query);
  if (!q.strict()) return fail(FailureReason::UnresolvedLenient);

  bool ran = false;
  if (passes(q, problem, ran)) {
    if (result.operations.empty()) return fail(FailureReason::AlreadyCorrect);
    result.status = RepairStatus::Repaired;
    result.repaired = std::move(q);
    return finish(result);
  }

  SynthOptions options;
  options.per_solve = budget.per_solve;
  options.deadline = start + budget.total;
  const StageEntry stages[] = {
      {synth_constants, RepairTag::ConstantSynthesis}, {synth_operators, RepairTag::OperatorSynthesis},
      {synth_columns, RepairTag::ColumnSynthesis},     {remove_clauses, RepairTag::ClauseRemoval},
      {synth_clauses, RepairTag::ClauseSynthesis},
  };
  try {
    for (const StageEntry& stage : stages) {
      auto found = stage.run(q, problem, options);
      if (!found) continue;
      if (found->reworked_columns && stage.tag != RepairTag::ColumnSynthesis) {
        result.operations.push_back(RepairTag::ColumnSynthesis);
      }
      result.operations.push_back(stage.tag);
      result.status = RepairStatus::Repaired;
      result.repaired = std::move(found->query);
      return finish(result);
    }
  } catch (const BudgetExceeded&) {
    return fail(FailureReason::BudgetExceeded);
  }
  return fail(ran ? FailureReason::Exhausted : FailureReason::EvalFailure);
}

RepairResult repair_latest(const std::vector<Attempt>& attempts, const ProblemSpec& problem,
                           const RepairBudget& budget, const RepairFn& repair_fn) {
  RepairResult last;
  last.reason = FailureReason::AlreadyCorrect;
  std::size_t failures = 0;
  for (auto it = attempts.rbegin(); it != attempts.rend() && failures < kMaxRepairFailures; ++it) {
    if (it->triage.verdict == Verdict::Correct) continue;
    RepairResult r = repair_fn(it->text, problem, budget);
    if (r.status == RepairStatus::Repaired) return r;
    last = std::move(r);
    ++failures;
  }
  return last;
}

}  // namespace sqlrepair
