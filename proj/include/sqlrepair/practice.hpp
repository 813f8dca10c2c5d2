#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqlrepair/pipeline.hpp"

namespace sqlrepair {

// Transport-independent core of the practice service. Every public call returns an
// HTTP-style status and a JSON body; the httplib binding only routes requests here.
// State is a fold over an append-only event log, so replaying the log on startup
// restores it.

enum class VoteCategory { MCQ, MRQ, OCQ, ORQ };

std::string_view to_string(VoteCategory c);
std::optional<VoteCategory> vote_category_from(std::string_view s);

/// Someone else's query, shown for rating. Only OCQ and ORQ belong in the pool.
struct PoolEntry {
  std::string problem;
  VoteCategory category = VoteCategory::OCQ;
  std::string query;
};

/// `[{"problem", "category": "OCQ"|"ORQ", "query"}]`
std::vector<PoolEntry> load_pool(const std::filesystem::path& path);

struct Response {
  int status = 200;
  nlohmann::json body;
};

using WallClock = std::chrono::system_clock;

struct PracticeOptions {
  std::map<std::string, ProblemSpec> problems;
  std::vector<PoolEntry> pool;
  /// Empty keeps the log in memory only.
  std::filesystem::path log_path;
  std::function<WallClock::time_point()> clock = [] { return WallClock::now(); };
  std::uint64_t seed = std::random_device{}();
  RepairBudget budget;
  RepairFn repair_fn = repair;
};

inline constexpr std::size_t kFatigueAttempts = 5;
inline constexpr std::chrono::minutes kFatigueWindow{5};
inline constexpr int kMinScore = 1;
inline constexpr int kMaxScore = 7;

class PracticeService {
 public:
  /// Replays `options.log_path` when it exists. Throws std::runtime_error on a corrupt log.
  explicit PracticeService(PracticeOptions options);

  Response create_session();
  Response list_problems(const std::string& participant);
  Response get_problem(const std::string& participant, const std::string& problem);
  /// `body` is either `{"query": ...}` JSON or the raw query text.
  Response submit_attempt(const std::string& participant, const std::string& problem, const std::string& body);
  Response vote_options(const std::string& participant, const std::string& problem);
  Response rate(const std::string& participant, const std::string& body);
  Response ratings(const std::string& participant, const std::string& problem);

  /// Copy of every event applied so far, in order.
  std::vector<nlohmann::json> events() const;
  /// How often each pool entry has been offered, indexed like `options.pool`.
  std::vector<std::size_t> pool_show_counts() const;

 private:
  struct AttemptRecord {
    std::string query;
    Verdict verdict = Verdict::SyntaxError;
    std::int64_t at_ms = 0;
  };
  struct IssuedOption {
    char label = 'A';
    std::string query;
    std::vector<VoteCategory> categories;
  };
  struct Rating {
    int score = 0;
    std::optional<std::string> rationale;
  };
  struct ProblemState {
    std::vector<AttemptRecord> attempts;
    std::size_t revealed = 1;
    bool solved = false;
    std::optional<std::vector<IssuedOption>> issued;
    std::map<char, Rating> ratings;
  };
  struct Participant {
    std::map<std::string, ProblemState> problems;
  };

  void apply(const nlohmann::json& event);
  void record(nlohmann::json event);
  std::int64_t now_ms() const;
  bool known(const std::string& participant) const;
  bool fatigued(const ProblemState& state, std::int64_t now) const;
  nlohmann::json problem_view(const ProblemSpec& spec, const ProblemState* state) const;
  nlohmann::json options_view(const std::vector<IssuedOption>& options) const;
  std::vector<std::size_t> pick_pool(const std::string& problem, VoteCategory category, std::size_t count) const;

  PracticeOptions options_;
  mutable std::mutex mutex_;
  std::mt19937_64 rng_;
  std::ofstream log_;
  std::vector<nlohmann::json> events_;
  std::map<std::string, Participant> participants_;
  std::vector<std::size_t> shown_;
};

}  // namespace sqlrepair
