#include <algorithm>

#include "sqlrepair/evaluator.hpp"
#include "sqlrepair/synth.hpp"

namespace sqlrepair {

namespace {

std::optional<Query> run_solve(const HoleQuery& hq, const ProblemSpec& problem, const SynthOptions& options) {
  const auto now = SteadyClock::now();
  if (now >= options.deadline) throw BudgetExceeded("repair budget exhausted");
  const auto window = options.deadline - now > options.per_solve ? now + options.per_solve : options.deadline;
  try {
    SolveVerdict verdict = solve(hq, problem, window);
    if (!verdict.sat()) return std::nullopt;
    return substitute(hq, *verdict.model);
  } catch (const BudgetExceeded&) {
    if (SteadyClock::now() >= options.deadline) throw;
    return std::nullopt;
  }
}

bool passes(const Query& q, const ProblemSpec& problem) {
  try {
    return check(q, problem);
  } catch (const EvalError&) {
    return false;
  }
}

// Whether any column operand of `before` was replaced in `after` (same leaf count).
bool columns_changed(const Query& before, const Query& after) {
  if (!before.where || !after.where) return false;
  const auto& a = before.where->leaves;
  const auto& b = after.where->leaves;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i].lhs.is_column() && a[i].lhs != b[i].lhs) return true;
    if (a[i].rhs.is_column() && a[i].rhs != b[i].rhs) return true;
  }
  return false;
}

std::optional<SynthResult> solve_abstraction(const HoleQuery& hq, const ProblemSpec& problem,
                                             const SynthOptions& options) {
  if (hq.holes.empty()) return std::nullopt;
  auto q = run_solve(hq, problem, options);
  if (!q) return std::nullopt;
  return SynthResult{std::move(*q), false};
}

}  // namespace

std::optional<SynthResult> synth_constants(const Query& query, const ProblemSpec& problem,
                                           const SynthOptions& options) {
  return solve_abstraction(abstract_constants(query, problem), problem, options);
}

std::optional<SynthResult> synth_operators(const Query& query, const ProblemSpec& problem,
                                           const SynthOptions& options) {
  return solve_abstraction(abstract_operators(query, problem), problem, options);
}

std::optional<SynthResult> synth_columns(const Query& query, const ProblemSpec& problem,
                                         const SynthOptions& options) {
  auto found = solve_abstraction(abstract_columns(query, problem), problem, options);
  for (std::size_t i = 0; !found && i < query.leaf_count(); ++i) {
    const Comparison& c = query.where->leaves[i];
    if (!c.lhs.is_column() && !c.rhs.is_column()) continue;
    // One comparison at a time keeps the others intact.
    if (query.leaf_count() == 1) break;
    found = solve_abstraction(abstract_columns(query, problem, i), problem, options);
  }
  if (found) found->reworked_columns = columns_changed(query, found->query);
  return found;
}

std::optional<SynthResult> remove_clauses(const Query& query, const ProblemSpec& problem,
                                          const SynthOptions& options) {
  const std::size_t n = query.leaf_count();
  if (n < 2) return std::nullopt;
  const Predicate& p = *query.where;
  for (std::size_t k = n - 1; k >= 1; --k) {
    // Lexicographic k-subsets of [0, n).
    std::vector<std::size_t> kept(k);
    for (std::size_t i = 0; i < k; ++i) kept[i] = i;
    while (true) {
      Query sub = query;
      Predicate pred;
      for (std::size_t j = 0; j < k; ++j) {
        pred.leaves.push_back(p.leaves[kept[j]]);
        if (j > 0) pred.connectors.push_back(p.connectors[kept[j - 1]]);
      }
      sub.where = std::move(pred);
      if (passes(sub, problem)) return SynthResult{std::move(sub), false};
      if (auto found = synth_columns(sub, problem, options)) return found;

      std::size_t i = k;
      while (i > 0 && kept[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++kept[i - 1];
      for (std::size_t j = i; j < k; ++j) kept[j] = kept[j - 1] + 1;
    }
  }
  return std::nullopt;
}

std::optional<SynthResult> synth_clauses(const Query& query, const ProblemSpec& problem,
                                         const SynthOptions& options) {
  if (passes(query, problem)) return SynthResult{query, false};

  HoleQuery grown = abstract_columns(query, problem);
  while (grown.base.leaf_count() < kMaxLeaves) {
    grown = append_clause(std::move(grown), problem);
    if (auto q = run_solve(grown, problem, options)) {
      const bool reworked = columns_changed(query, *q);
      return SynthResult{std::move(*q), reworked};
    }
  }

  if (!query.where) return std::nullopt;
  // Fresh predicates, so the search covers everything up to the leaf bound.
  Query bare = query;
  bare.where.reset();
  HoleQuery fresh{bare, {}};
  for (std::size_t m = 1; m <= kMaxLeaves; ++m) {
    fresh = append_clause(std::move(fresh), problem);
    if (auto q = run_solve(fresh, problem, options)) return SynthResult{std::move(*q), false};
  }
  return std::nullopt;
}

}  // namespace sqlrepair
