#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sqlrepair/ast.hpp"
#include "sqlrepair/table.hpp"

// Test-only oracles, written independently of the library's evaluator and solver.
namespace reference {

using sqlrepair::ProblemSpec;
using sqlrepair::Query;
using sqlrepair::Table;

std::string fixture(const std::string& relative);

/// Straightforward interpreter for strict queries. nullopt where a database would error.
std::optional<Table> run(const Query& q, const Table& source);

/// Every pair reproduced exactly.
bool solves(const Query& q, const ProblemSpec& problem);

/// Searches every WHERE clause of at most `max_leaves` `column op constant` leaves
/// (plus no WHERE at all) over the candidate constants, keeping the rest of `shape`.
/// Returns a witness query when one solves the problem.
std::optional<Query> brute_force(const Query& shape, const ProblemSpec& problem, std::size_t max_leaves = 5);

struct RandomCase {
  ProblemSpec problem;
  Query gold;
  Query mutated;
};

/// Tiny random problem (<= 3 columns, <= 4 rows per source, <= 3 distinct values per
/// column, 1-2 pairs) generated from a gold query, plus a copy whose WHERE was mutated.
RandomCase random_case(std::mt19937_64& rng);

/// Random strict query over the columns of `schema`.
Query random_query(std::mt19937_64& rng, const Table& schema);

}  // namespace reference
