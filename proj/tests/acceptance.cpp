// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "reference.hpp"
#include "sqlrepair/harness.hpp"
#include "sqlrepair/problem_io.hpp"

using namespace sqlrepair;

namespace {

int failures = 0;

void report(bool ok, const char* name, const std::string& detail) {
  std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  if (!ok) ++failures;
}

std::map<std::string, ProblemSpec> problems() { return load_problem_dir(reference::fixture("problems")); }

void running_example() {
  const auto all = problems();
  const ProblemSpec& p = all.at("fruitSellers");
  const RepairResult r = repair("SELECT * FROM fruitSellers WHERE country=US && quantity < 800", p);
  bool ok = r.status == RepairStatus::Repaired && r.has(RepairTag::OperatorMismatch) &&
            r.has(RepairTag::ColumnMismatch) && r.has(RepairTag::StringRepair) &&
            std::any_of(r.operations.begin(), r.operations.end(), is_synthesis);
  std::string text = r.repaired ? print(*r.repaired) : "<none>";
  if (ok) ok = eval(*r.repaired, p.pairs[0].source) == p.pairs[0].destination;
  ok = ok && r.elapsed.count() < 2000.0;
  report(ok, "running-example", text + " (" + std::to_string(r.elapsed.count()) + " ms)");
}

RunReport run_file(const std::string& corpus) {
  return run_corpus(load_corpus(reference::fixture("corpus/" + corpus)), problems());
}

void coverage_and_performance() {
  const RunReport rep = run_file("coverage.jsonl");
  const char* tags[] = {"OperatorMismatch", "ColumnMismatch",  "StringRepair", "ConstantSynthesis",
                        "OperatorSynthesis", "ColumnSynthesis", "ClauseRemoval", "ClauseSynthesis"};
  bool every = true;
  std::string missing;
  for (const char* t : tags) {
    if (!rep.per_repair_type.count(t)) {
      every = false;
      missing += std::string(" ") + t;
    }
  }
  const bool rate_ok = rep.repair_rate && *rep.repair_rate == 1.0;
  report(every && rate_ok, "repair-type-coverage",
         "repairRate=" + (rep.repair_rate ? std::to_string(*rep.repair_rate) : std::string("null")) +
             (missing.empty() ? "" : " missing:" + missing));

  const double median = rep.repaired_timing.median_ms.value_or(1e9);
  const double max = rep.repaired_timing.max_ms.value_or(1e9);
  report(median < 500.0 && max < 2000.0, "performance",
         "median " + std::to_string(median) + " ms, max " + std::to_string(max) + " ms");
}

void soundness_and_completeness() {
  std::mt19937_64 rng(20220301);
  int repaired = 0, unsound = 0, oracle_sat = 0, missed = 0, cases = 1000;
  std::string first_miss;
  for (int i = 0; i < cases; ++i) {
    const reference::RandomCase rc = reference::random_case(rng);
    const std::string text = print(rc.mutated);
    const RepairResult r = repair(text, rc.problem);
    if (r.status == RepairStatus::Repaired) {
      ++repaired;
      if (!r.repaired || !reference::solves(*r.repaired, rc.problem)) ++unsound;
    }
    if (reference::solves(rc.mutated, rc.problem)) continue;
    if (reference::brute_force(rc.mutated, rc.problem)) {
      ++oracle_sat;
      if (r.status != RepairStatus::Repaired) {
        ++missed;
        if (first_miss.empty()) first_miss = " first miss: " + text;
      }
    }
  }
  report(unsound == 0, "soundness",
         std::to_string(cases) + " cases, " + std::to_string(repaired) + " repaired, " + std::to_string(unsound) +
             " violations");
  report(missed == 0, "bounded-completeness",
         std::to_string(oracle_sat) + " oracle-solvable, " + std::to_string(missed) + " missed" + first_miss);
}

std::string jsonl_without_timing(const RunReport& rep) {
  std::ostringstream out;
  for (const RecordOutcome& o : rep.outcomes) {
    auto line = to_json(o);
    line.erase("elapsed_ms");
    out << line.dump() << '\n';
  }
  return out.str();
}

void determinism() {
  bool same = true;
  for (const char* corpus : {"coverage.jsonl", "taxonomy.jsonl"}) {
    same = same && jsonl_without_timing(run_file(corpus)) == jsonl_without_timing(run_file(corpus));
  }
  report(same, "determinism", same ? "byte-identical JSONL across runs" : "JSONL differs between runs");
}

void triage_split() {
  const auto all = problems();
  std::ifstream in(reference::fixture("corpus/taxonomy.jsonl"));
  std::string line;
  int checked = 0, wrong = 0;
  std::string first_wrong;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto doc = nlohmann::json::parse(line);
    const ProblemSpec& p = all.at(doc["problem"].get<std::string>());
    const std::string query = doc["query"];
    const Triage t = triage(query, p);
    const ErrorReport e = classify(query, t, p);
    bool ok = to_string(t.verdict) == doc["expect"].get<std::string>();
    const std::string expected = doc["category"];
    if (!expected.empty()) {
      ok = ok && std::any_of(e.categories.begin(), e.categories.end(),
                             [&](Category c) { return to_string(c) == expected; });
    }
    ++checked;
    if (!ok) {
      ++wrong;
      if (first_wrong.empty()) first_wrong = " first mismatch: " + query;
    }
  }
  report(wrong == 0 && checked > 0, "triage-and-categories",
         std::to_string(checked) + " examples, " + std::to_string(wrong) + " mismatches" + first_wrong);
}

void repair_call_budget() {
  const auto all = problems();
  const ProblemSpec& p = all.at("golf_dup");
  std::vector<Attempt> attempts;
  for (int i = 0; i < 11; ++i) {
    const std::string q = "SELECT DISTINCT SVER FROM golf WHERE SVER > " + std::to_string(1990 + i);
    attempts.push_back({q, triage(q, p)});
  }
  int calls = 0;
  const RepairFn counting = [&](std::string_view text, const ProblemSpec& spec, const RepairBudget& b) {
    ++calls;
    return repair(text, spec, b);
  };
  const RepairResult r = repair_latest(attempts, p, {}, counting);
  report(calls == 10 && r.status == RepairStatus::Unrepairable, "repair-latest-budget",
         std::to_string(calls) + " repair calls for 11 unrepairable attempts");
}

}  // namespace

int main() {
  running_example();
  coverage_and_performance();
  soundness_and_completeness();
  determinism();
  triage_split();
  repair_call_budget();
  return failures;
}
