#include "sqlrepair/harness.hpp"

#include <algorithm>
#include <fstream>

namespace sqlrepair {

using nlohmann::json;

std::vector<CorpusRecord> parse_corpus(std::istream& in) {
  std::vector<CorpusRecord> out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    const json doc = json::parse(line, nullptr, false);
    const std::string where = "corpus line " + std::to_string(n);
    if (doc.is_discarded() || !doc.is_object()) throw CorpusError(where + ": not a JSON object");
    auto text = [&](const char* key, bool required) -> std::optional<std::string> {
      if (!doc.contains(key) || doc[key].is_null()) {
        if (required) throw CorpusError(where + ": missing '" + key + "'");
        return std::nullopt;
      }
      if (!doc[key].is_string()) throw CorpusError(where + ": '" + key + "' must be a string");
      return doc[key].get<std::string>();
    };
    out.push_back({*text("problem", true), *text("query", true), text("participant", false), text("ts", false)});
  }
  return out;
}

std::vector<CorpusRecord> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open corpus " + path.string());
  return parse_corpus(in);
}

namespace {

Timing timing_of(std::vector<double> ms) {
  if (ms.empty()) return {};
  std::sort(ms.begin(), ms.end());
  const std::size_t n = ms.size();
  const double median = n % 2 == 1 ? ms[n / 2] : (ms[n / 2 - 1] + ms[n / 2]) / 2.0;
  return {median, ms.back()};
}

json timing_json(const Timing& t) {
  return {{"median_ms", t.median_ms ? json(*t.median_ms) : json(nullptr)},
          {"max_ms", t.max_ms ? json(*t.max_ms) : json(nullptr)}};
}

}  // namespace

RunReport run_corpus(const std::vector<CorpusRecord>& corpus, const std::map<std::string, ProblemSpec>& problems,
                     const RepairBudget& budget) {
  for (const CorpusRecord& r : corpus) {
    if (!problems.count(r.problem)) throw CorpusError("unknown problem '" + r.problem + "'");
  }
  RunReport report;
  std::vector<double> ok_ms, failed_ms;
  SynthOptions classify_options;
  classify_options.per_solve = budget.per_solve;
  for (const CorpusRecord& r : corpus) {
    const ProblemSpec& problem = problems.at(r.problem);
    const Triage t = triage(r.query, problem);
    RecordOutcome outcome{r, {}, std::nullopt};
    classify_options.deadline = SteadyClock::now() + budget.total;
    outcome.report = classify(r.query, t, problem, classify_options);
    for (Category c : outcome.report.categories) ++report.per_category[std::string(to_string(c))];
    switch (t.verdict) {
      case Verdict::Correct: ++report.correct; break;
      case Verdict::SyntaxError: ++report.syntax_error; break;
      case Verdict::SemanticError: ++report.semantic_error; break;
    }
    if (t.verdict != Verdict::Correct) {
      outcome.repair = repair(r.query, problem, budget);
      const double ms = static_cast<double>(outcome.repair->elapsed.count());
      if (outcome.repair->status == RepairStatus::Repaired) {
        ++report.repaired;
        ok_ms.push_back(ms);
        for (RepairTag tag : outcome.repair->operations) ++report.per_repair_type[std::string(to_string(tag))];
      } else {
        failed_ms.push_back(ms);
      }
    }
    report.outcomes.push_back(std::move(outcome));
  }
  const std::size_t incorrect = report.syntax_error + report.semantic_error;
  if (incorrect > 0) report.repair_rate = static_cast<double>(report.repaired) / static_cast<double>(incorrect);
  report.repaired_timing = timing_of(ok_ms);
  report.unrepaired_timing = timing_of(failed_ms);
  return report;
}

json to_json(const RunReport& report) {
  json tags = json::object();
  for (const auto& [k, v] : report.per_repair_type) tags[k] = v;
  json cats = json::object();
  for (const auto& [k, v] : report.per_category) cats[k] = v;
  return {
      {"totals",
       {{"records", report.outcomes.size()},
        {"correct", report.correct},
        {"syntax_error", report.syntax_error},
        {"semantic_error", report.semantic_error},
        {"repaired", report.repaired}}},
      {"per_category", std::move(cats)},
      {"per_repair_type", std::move(tags)},
      {"repair_rate", report.repair_rate ? json(*report.repair_rate) : json(nullptr)},
      {"timing", {{"repaired", timing_json(report.repaired_timing)},
                  {"unrepaired", timing_json(report.unrepaired_timing)}}},
  };
}

json to_json(const RecordOutcome& o) {
  json categories = json::array();
  for (Category c : o.report.categories) categories.push_back(std::string(to_string(c)));
  json line = {{"problem", o.record.problem},
               {"query", o.record.query},
               {"verdict", std::string(to_string(o.report.verdict))},
               {"categories", std::move(categories)}};
  if (o.record.participant) line["participant"] = *o.record.participant;
  if (!o.repair) {
    line["repair"] = nullptr;
    line["elapsed_ms"] = 0;
    return line;
  }
  json tags = json::array();
  for (RepairTag t : o.repair->operations) tags.push_back(std::string(to_string(t)));
  json repair = {{"status", std::string(to_string(o.repair->status))}, {"tags", std::move(tags)}};
  repair["repaired"] = o.repair->repaired ? json(print(*o.repair->repaired)) : json(nullptr);
  if (o.repair->reason) repair["reason"] = std::string(to_string(*o.repair->reason));
  line["repair"] = std::move(repair);
  line["elapsed_ms"] = o.repair->elapsed.count();
  return line;
}

}  // namespace sqlrepair
