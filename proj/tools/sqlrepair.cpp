#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "sqlrepair/harness.hpp"
#include "sqlrepair/problem_io.hpp"

#ifdef SQLREPAIR_WITH_SERVICE
#include "sqlrepair/practice_http.hpp"
#endif

namespace {

constexpr int kInputError = 2;

int run_command(const std::string& corpus_path, const std::string& problems_dir, long budget_ms,
                const std::string& out_path, const std::string& jsonl_path) {
  using namespace sqlrepair;
  std::map<std::string, ProblemSpec> problems;
  std::vector<CorpusRecord> corpus;
  RunReport report;
  RepairBudget budget;
  budget.total = std::chrono::milliseconds(budget_ms);
  try {
    problems = load_problem_dir(problems_dir);
    corpus = load_corpus(corpus_path);
    report = run_corpus(corpus, problems, budget);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }

  std::ofstream jsonl_file;
  std::ostream* lines = nullptr;
  if (!jsonl_path.empty()) {
    jsonl_file.open(jsonl_path);
    if (!jsonl_file) {
      std::cerr << "error: cannot write " << jsonl_path << '\n';
      return kInputError;
    }
    lines = &jsonl_file;
  }
  if (lines) {
    for (const RecordOutcome& o : report.outcomes) *lines << to_json(o).dump() << '\n';
  }

  const std::string summary = to_json(report).dump(2);
  if (out_path.empty()) {
    std::cout << summary << '\n';
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "error: cannot write " << out_path << '\n';
      return kInputError;
    }
    out << summary << '\n';
  }
  return 0;
}

int repair_command(const std::string& problem_path, const std::string& query, long budget_ms) {
  using namespace sqlrepair;
  ProblemSpec problem;
  try {
    problem = load_problem(problem_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  const Triage t = triage(query, problem);
  RecordOutcome outcome{{problem.id, query, std::nullopt, std::nullopt}, classify(query, t, problem), std::nullopt};
  if (t.verdict != Verdict::Correct) {
    RepairBudget budget;
    budget.total = std::chrono::milliseconds(budget_ms);
    outcome.repair = repair(query, problem, budget);
  }
  std::cout << to_json(outcome).dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Example-driven SQL query repair"};
  app.require_subcommand(1);

  std::string corpus, problems_dir, out, jsonl;
  long budget_ms = 10000;
  auto* run = app.add_subcommand("run", "Triage, classify and repair a corpus of submissions");
  run->add_option("--corpus", corpus, "JSON Lines corpus")->required();
  run->add_option("--problems", problems_dir, "Directory of problem files")->required();
  run->add_option("--budget-ms", budget_ms, "Repair budget per query")->check(CLI::PositiveNumber);
  run->add_option("--out", out, "Write the summary report here instead of stdout");
  run->add_option("--jsonl", jsonl, "Write one result line per record here");

  std::string problem_path, query;
  auto* fix = app.add_subcommand("repair", "Repair a single query");
  fix->add_option("--problem", problem_path, "Problem file")->required();
  fix->add_option("query", query, "Query text")->required();
  fix->add_option("--budget-ms", budget_ms, "Repair budget")->check(CLI::PositiveNumber);

#ifdef SQLREPAIR_WITH_SERVICE
  auto* serve = app.add_subcommand("serve", "Run the practice service");
#endif

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kInputError;
  }

  if (*run) return run_command(corpus, problems_dir, budget_ms, out, jsonl);
  if (*fix) return repair_command(problem_path, query, budget_ms);
#ifdef SQLREPAIR_WITH_SERVICE
  if (*serve) return sqlrepair::serve_from_env();
#endif
  return 0;
}
