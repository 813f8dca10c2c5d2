#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqlrepair/classifier.hpp"
#include "sqlrepair/pipeline.hpp"

namespace sqlrepair {

struct CorpusRecord {
  std::string problem;
  std::string query;
  std::optional<std::string> participant;
  std::optional<std::string> ts;
};

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// JSON Lines, blank lines skipped. Throws CorpusError naming the offending line.
std::vector<CorpusRecord> load_corpus(const std::filesystem::path& path);
std::vector<CorpusRecord> parse_corpus(std::istream& in);

struct RecordOutcome {
  CorpusRecord record;
  ErrorReport report;
  std::optional<RepairResult> repair;  // absent for correct queries
};

struct Timing {
  std::optional<double> median_ms;
  std::optional<double> max_ms;
};

struct RunReport {
  std::size_t correct = 0;
  std::size_t syntax_error = 0;
  std::size_t semantic_error = 0;
  std::size_t repaired = 0;
  std::map<std::string, std::size_t> per_category;
  std::map<std::string, std::size_t> per_repair_type;
  /// repaired / (syntax + semantic); nullopt when nothing needed repair.
  std::optional<double> repair_rate;
  Timing repaired_timing;
  Timing unrepaired_timing;
  std::vector<RecordOutcome> outcomes;
};

/// Every record's problem must be in `problems`; throws CorpusError otherwise.
RunReport run_corpus(const std::vector<CorpusRecord>& corpus,
                     const std::map<std::string, ProblemSpec>& problems, const RepairBudget& budget = {});

nlohmann::json to_json(const RunReport& report);
/// One line per record, in input order. `elapsed_ms` is the only timing field.
nlohmann::json to_json(const RecordOutcome& outcome);

}  // namespace sqlrepair
