#include "sqlrepair/practice.hpp"

#include <algorithm>
#include <cstdio>

#include "sqlrepair/problem_io.hpp"

namespace sqlrepair {

using nlohmann::json;

std::string_view to_string(VoteCategory c) {
  switch (c) {
    case VoteCategory::MCQ: return "MCQ";
    case VoteCategory::MRQ: return "MRQ";
    case VoteCategory::OCQ: return "OCQ";
    case VoteCategory::ORQ: return "ORQ";
  }
  return "?";
}

std::optional<VoteCategory> vote_category_from(std::string_view s) {
  for (VoteCategory c : {VoteCategory::MCQ, VoteCategory::MRQ, VoteCategory::OCQ, VoteCategory::ORQ}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

std::vector<PoolEntry> load_pool(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vote pool " + path.string());
  const json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_array()) throw std::runtime_error("vote pool must be a JSON array");
  std::vector<PoolEntry> pool;
  for (const json& e : doc) {
    if (!e.is_object() || !e.contains("problem") || !e.contains("query") || !e.contains("category")) {
      throw std::runtime_error("vote pool entries need problem, category and query");
    }
    const auto category = vote_category_from(e["category"].get<std::string>());
    if (category != VoteCategory::OCQ && category != VoteCategory::ORQ) {
      throw std::runtime_error("vote pool categories are OCQ or ORQ");
    }
    pool.push_back({e["problem"].get<std::string>(), *category, e["query"].get<std::string>()});
  }
  return pool;
}

namespace {

Response error(int status, std::string message) { return {status, {{"error", std::move(message)}}}; }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<Verdict> verdict_from(std::string_view s) {
  for (Verdict v : {Verdict::Correct, Verdict::SyntaxError, Verdict::SemanticError}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

// Two submissions are the same query when their canonical forms agree.
std::string identity(const std::string& text, const ProblemSpec& problem) {
  const auto columns = problem.source_schema().column_names();
  const ParseResult r = parse_strict(text, columns);
  if (const auto* q = std::get_if<Query>(&r)) return print(*q);
  return trim(text);
}

std::string message_for(const Triage& t) {
  switch (t.verdict) {
    case Verdict::Correct:
      return "Nicely done! Your query produces the expected output for every example.";
    case Verdict::SemanticError:
      return "Your query ran, but its output does not match the expected table for example " +
             std::to_string(*t.first_failing_pair + 1) + ".";
    case Verdict::SyntaxError:
      break;
  }
  return "Your query could not be run: " + t.detail;
}

}  // namespace

PracticeService::PracticeService(PracticeOptions options)
    : options_(std::move(options)), rng_(options_.seed), shown_(options_.pool.size(), 0) {
  if (options_.log_path.empty()) return;
  if (std::filesystem::exists(options_.log_path)) {
    std::ifstream in(options_.log_path);
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
      if (trim(line).empty()) continue;
      json event = json::parse(line, nullptr, false);
      if (event.is_discarded() || !event.is_object() || event.value("v", 0) != 1) {
        throw std::runtime_error("corrupt event log at line " + std::to_string(n));
      }
      apply(event);
    }
  } else if (options_.log_path.has_parent_path()) {
    std::filesystem::create_directories(options_.log_path.parent_path());
  }
  log_.open(options_.log_path, std::ios::app);
  if (!log_) throw std::runtime_error("cannot open event log " + options_.log_path.string());
}

std::int64_t PracticeService::now_ms() const {
  return std::chrono::duration_cast<std::chrono::milliseconds>(options_.clock().time_since_epoch()).count();
}

bool PracticeService::known(const std::string& participant) const { return participants_.count(participant) > 0; }

bool PracticeService::fatigued(const ProblemState& state, std::int64_t now) const {
  if (state.attempts.size() < kFatigueAttempts) return false;
  const auto window = std::chrono::duration_cast<std::chrono::milliseconds>(kFatigueWindow).count();
  return now - state.attempts.front().at_ms >= window;
}

void PracticeService::record(json event) {
  event["v"] = 1;
  if (log_.is_open()) {
    log_ << event.dump() << '\n';
    log_.flush();
  }
  apply(event);
}

// The only place state changes; used both live and during replay.
void PracticeService::apply(const json& event) {
  const std::string type = event.at("type").get<std::string>();
  const std::string participant = event.at("participant").get<std::string>();
  if (type == "session") {
    participants_[participant];
  } else if (type == "attempt") {
    const std::string problem = event.at("problem").get<std::string>();
    ProblemState& state = participants_[participant].problems[problem];
    const auto verdict = verdict_from(event.at("verdict").get<std::string>());
    if (!verdict) throw std::runtime_error("unknown verdict in event log");
    state.attempts.push_back({event.at("query").get<std::string>(), *verdict, event.at("at").get<std::int64_t>()});
    if (*verdict == Verdict::Correct) state.solved = true;
    if (event.contains("failing_pair") && !event["failing_pair"].is_null()) {
      state.revealed = std::max(state.revealed, event["failing_pair"].get<std::size_t>() + 1);
    }
  } else if (type == "vote_options") {
    ProblemState& state = participants_[participant].problems[event.at("problem").get<std::string>()];
    std::vector<IssuedOption> issued;
    for (const json& o : event.at("options")) {
      IssuedOption option{o.at("label").get<std::string>().at(0), o.at("query").get<std::string>(), {}};
      for (const json& c : o.at("categories")) {
        const auto category = vote_category_from(c.get<std::string>());
        if (!category) throw std::runtime_error("unknown vote category in event log");
        option.categories.push_back(*category);
      }
      issued.push_back(std::move(option));
    }
    state.issued = std::move(issued);
    for (const json& idx : event.at("pool")) {
      const auto i = idx.get<std::size_t>();
      if (i < shown_.size()) ++shown_[i];
    }
  } else if (type == "rating") {
    ProblemState& state = participants_[participant].problems[event.at("problem").get<std::string>()];
    Rating rating{event.at("score").get<int>(), std::nullopt};
    if (event.contains("rationale") && event["rationale"].is_string()) rating.rationale = event["rationale"];
    state.ratings[event.at("label").get<std::string>().at(0)] = std::move(rating);
  } else {
    throw std::runtime_error("unknown event type '" + type + "'");
  }
  events_.push_back(event);
}

Response PracticeService::create_session() {
  std::lock_guard lock(mutex_);
  std::string id;
  do {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng_()));
    id = buf;
  } while (known(id));
  record({{"type", "session"}, {"participant", id}, {"at", now_ms()}});
  return {201, {{"participant", id}}};
}

json PracticeService::problem_view(const ProblemSpec& spec, const ProblemState* state) const {
  const std::size_t revealed = std::min(state ? state->revealed : 1, spec.pairs.size());
  json view = {{"id", spec.id},
               {"description", spec.description},
               {"revealedPairs", revealed},
               {"solved", state && state->solved},
               {"attempts", state ? state->attempts.size() : 0}};
  return view;
}

Response PracticeService::list_problems(const std::string& participant) {
  std::lock_guard lock(mutex_);
  if (!known(participant)) return error(401, "unknown participant");
  const Participant& p = participants_.at(participant);
  json list = json::array();
  for (const auto& [id, spec] : options_.problems) {
    const auto it = p.problems.find(id);
    list.push_back(problem_view(spec, it == p.problems.end() ? nullptr : &it->second));
  }
  return {200, {{"problems", std::move(list)}}};
}

Response PracticeService::get_problem(const std::string& participant, const std::string& problem) {
  std::lock_guard lock(mutex_);
  if (!known(participant)) return error(401, "unknown participant");
  const auto spec = options_.problems.find(problem);
  if (spec == options_.problems.end()) return error(404, "no such problem");
  const Participant& p = participants_.at(participant);
  const auto it = p.problems.find(problem);
  const ProblemState* state = it == p.problems.end() ? nullptr : &it->second;
  json view = problem_view(spec->second, state);
  json pairs = json::array();
  const std::size_t revealed = view["revealedPairs"].get<std::size_t>();
  for (std::size_t i = 0; i < revealed; ++i) {
    const TablePair& pair = spec->second.pairs[i];
    pairs.push_back({{"source", to_json(pair.source)}, {"destination", to_json(pair.destination)}, {"ordered", pair.ordered}});
  }
  view["pairs"] = std::move(pairs);
  view["fatigueButton"] = state != nullptr && fatigued(*state, now_ms());
  return {200, std::move(view)};
}

Response PracticeService::submit_attempt(const std::string& participant, const std::string& problem,
                                         const std::string& body) {
  const auto spec = options_.problems.find(problem);
  {
    std::lock_guard lock(mutex_);
    if (!known(participant)) return error(401, "unknown participant");
  }
  if (spec == options_.problems.end()) return error(404, "no such problem");

  std::string query = body;
  const json doc = json::parse(body, nullptr, false);
  if (!doc.is_discarded() && doc.is_object()) {
    if (!doc.contains("query") || !doc["query"].is_string()) return error(400, "expected a 'query' string");
    query = doc["query"].get<std::string>();
  }
  query = trim(query);
  if (query.empty()) return error(400, "empty query");

  const Triage t = triage(query, spec->second);

  std::lock_guard lock(mutex_);
  const std::int64_t at = now_ms();
  json event = {{"type", "attempt"},   {"participant", participant},
                {"problem", problem},  {"query", query},
                {"verdict", std::string(to_string(t.verdict))}, {"at", at}};
  event["failing_pair"] = t.first_failing_pair ? json(*t.first_failing_pair) : json(nullptr);
  record(std::move(event));
  const ProblemState& state = participants_.at(participant).problems.at(problem);

  json feedback = {{"revealedPairs", std::min(state.revealed, spec->second.pairs.size())},
                   {"pair", t.first_failing_pair ? json(*t.first_failing_pair) : json(nullptr)},
                   {"expected", nullptr},
                   {"actual", nullptr},
                   {"detail", t.detail}};
  if (t.first_failing_pair) {
    feedback["expected"] = to_json(spec->second.pairs[*t.first_failing_pair].destination);
    if (t.actual_output) feedback["actual"] = to_json(*t.actual_output);
  }
  return {200,
          {{"verdict", std::string(to_string(t.verdict))},
           {"message", message_for(t)},
           {"feedback", std::move(feedback)},
           {"fatigueButton", fatigued(state, at)}}};
}

std::vector<std::size_t> PracticeService::pick_pool(const std::string& problem, VoteCategory category,
                                                    std::size_t count) const {
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < options_.pool.size(); ++i) {
    if (options_.pool[i].problem == problem && options_.pool[i].category == category) candidates.push_back(i);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](std::size_t a, std::size_t b) { return shown_[a] < shown_[b]; });
  if (candidates.size() > count) candidates.resize(count);
  return candidates;
}

json PracticeService::options_view(const std::vector<IssuedOption>& options) const {
  json list = json::array();
  for (const IssuedOption& o : options) list.push_back({{"label", std::string(1, o.label)}, {"query", o.query}});
  return {{"options", std::move(list)}};
}

Response PracticeService::vote_options(const std::string& participant, const std::string& problem) {
  const auto spec = options_.problems.find(problem);
  std::vector<AttemptRecord> attempts;
  {
    std::lock_guard lock(mutex_);
    if (!known(participant)) return error(401, "unknown participant");
    if (spec == options_.problems.end()) return error(404, "no such problem");
    auto& problems = participants_.at(participant).problems;
    const auto it = problems.find(problem);
    if (it != problems.end() && it->second.issued) return {200, options_view(*it->second.issued)};
    if (it == problems.end() || !(it->second.solved || fatigued(it->second, now_ms()))) {
      return error(409, "solve the problem or keep trying a little longer first");
    }
    attempts = it->second.attempts;
  }

  // Repair can take seconds, so it runs without the lock.
  struct Candidate {
    VoteCategory category;
    std::string query;
    std::optional<std::size_t> pool_index;
  };
  std::vector<Candidate> candidates;
  for (auto it = attempts.rbegin(); it != attempts.rend(); ++it) {
    if (it->verdict == Verdict::Correct) {
      candidates.push_back({VoteCategory::MCQ, it->query, std::nullopt});
      break;
    }
  }
  std::vector<Attempt> history;
  for (const AttemptRecord& a : attempts) {
    Triage t;
    t.verdict = a.verdict;
    history.push_back({a.query, std::move(t)});
  }
  if (std::any_of(attempts.begin(), attempts.end(), [](const AttemptRecord& a) { return a.verdict != Verdict::Correct; })) {
    const RepairResult r = repair_latest(history, spec->second, options_.budget, options_.repair_fn);
    if (r.status == RepairStatus::Repaired && r.repaired) {
      candidates.push_back({VoteCategory::MRQ, print(*r.repaired), std::nullopt});
    }
  }

  std::lock_guard lock(mutex_);
  ProblemState& state = participants_.at(participant).problems.at(problem);
  if (state.issued) return {200, options_view(*state.issued)};
  for (VoteCategory c : {VoteCategory::OCQ, VoteCategory::ORQ}) {
    for (std::size_t i : pick_pool(problem, c, 1)) candidates.push_back({c, options_.pool[i].query, i});
  }

  std::vector<IssuedOption> options;
  std::vector<std::string> keys;
  json pool_shown = json::array();
  for (const Candidate& c : candidates) {
    if (c.pool_index) pool_shown.push_back(*c.pool_index);
    const std::string key = identity(c.query, spec->second);
    const auto same = std::find(keys.begin(), keys.end(), key);
    if (same != keys.end()) {
      options[static_cast<std::size_t>(same - keys.begin())].categories.push_back(c.category);
      continue;
    }
    keys.push_back(key);
    options.push_back({'A', c.query, {c.category}});
  }
  std::shuffle(options.begin(), options.end(), rng_);
  json issued = json::array();
  for (std::size_t i = 0; i < options.size(); ++i) {
    options[i].label = static_cast<char>('A' + i);
    json categories = json::array();
    for (VoteCategory c : options[i].categories) categories.push_back(std::string(to_string(c)));
    issued.push_back({{"label", std::string(1, options[i].label)},
                      {"query", options[i].query},
                      {"categories", std::move(categories)}});
  }
  record({{"type", "vote_options"},
          {"participant", participant},
          {"problem", problem},
          {"options", std::move(issued)},
          {"pool", std::move(pool_shown)},
          {"at", now_ms()}});
  return {200, options_view(*state.issued)};
}

Response PracticeService::rate(const std::string& participant, const std::string& body) {
  const json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return error(400, "expected a JSON object");
  if (!doc.contains("problem") || !doc["problem"].is_string() || !doc.contains("label") ||
      !doc["label"].is_string()) {
    return error(400, "expected 'problem' and 'label'");
  }
  if (!doc.contains("score") || !doc["score"].is_number_integer()) return error(400, "expected an integer 'score'");
  const auto score = doc["score"].get<std::int64_t>();
  if (score < kMinScore || score > kMaxScore) return error(400, "score must be between 1 and 7");
  std::optional<std::string> rationale;
  if (doc.contains("rationale") && !doc["rationale"].is_null()) {
    if (!doc["rationale"].is_string()) return error(400, "'rationale' must be a string");
    rationale = doc["rationale"].get<std::string>();
  }
  const std::string problem = doc["problem"].get<std::string>();
  const std::string label = doc["label"].get<std::string>();

  std::lock_guard lock(mutex_);
  if (!known(participant)) return error(401, "unknown participant");
  if (!options_.problems.count(problem)) return error(404, "no such problem");
  const auto& problems = participants_.at(participant).problems;
  const auto it = problems.find(problem);
  const IssuedOption* option = nullptr;
  if (it != problems.end() && it->second.issued && label.size() == 1) {
    for (const IssuedOption& o : *it->second.issued) {
      if (o.label == label[0]) option = &o;
    }
  }
  if (!option) return error(409, "that label was not offered to you for this problem");
  json categories = json::array();
  for (VoteCategory c : option->categories) categories.push_back(std::string(to_string(c)));
  json event = {{"type", "rating"},   {"participant", participant}, {"problem", problem},
                {"label", label},     {"categories", std::move(categories)},
                {"score", score},     {"at", now_ms()}};
  event["rationale"] = rationale ? json(*rationale) : json(nullptr);
  record(std::move(event));
  return {204, nullptr};
}

Response PracticeService::ratings(const std::string& participant, const std::string& problem) {
  std::lock_guard lock(mutex_);
  if (!known(participant)) return error(401, "unknown participant");
  if (!options_.problems.count(problem)) return error(404, "no such problem");
  json list = json::array();
  const auto& problems = participants_.at(participant).problems;
  if (const auto it = problems.find(problem); it != problems.end() && it->second.issued) {
    for (const IssuedOption& o : *it->second.issued) {
      const auto r = it->second.ratings.find(o.label);
      if (r == it->second.ratings.end()) continue;
      json categories = json::array();
      for (VoteCategory c : o.categories) categories.push_back(std::string(to_string(c)));
      list.push_back({{"label", std::string(1, o.label)},
                      {"categories", std::move(categories)},
                      {"score", r->second.score},
                      {"rationale", r->second.rationale ? json(*r->second.rationale) : json(nullptr)}});
    }
  }
  return {200, {{"problem", problem}, {"ratings", std::move(list)}}};
}

std::vector<json> PracticeService::events() const {
  std::lock_guard lock(mutex_);
  return events_;
}

std::vector<std::size_t> PracticeService::pool_show_counts() const {
  std::lock_guard lock(mutex_);
  return shown_;
}

}  // namespace sqlrepair
