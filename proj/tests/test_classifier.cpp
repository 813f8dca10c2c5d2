#include <doctest.h>

#include <algorithm>
#include <fstream>

#include "reference.hpp"
#include "sqlrepair/classifier.hpp"
#include "sqlrepair/problem_io.hpp"

using namespace sqlrepair;

namespace {

const std::map<std::string, ProblemSpec>& problems() {
  static const auto all = load_problem_dir(reference::fixture("problems"));
  return all;
}

ErrorReport classify_text(const std::string& id, std::string_view text) {
  const ProblemSpec& p = problems().at(id);
  return classify(text, triage(text, p), p);
}

}  // namespace

TEST_CASE("each labelled example lands in its category") {
  std::ifstream in(reference::fixture("corpus/taxonomy.jsonl"));
  std::string line;
  int seen = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto doc = nlohmann::json::parse(line);
    const std::string query = doc["query"];
    CAPTURE(query);
    const ErrorReport r = classify_text(doc["problem"], query);
    CHECK(to_string(r.verdict) == doc["expect"].get<std::string>());
    const std::string expected = doc["category"];
    if (expected.empty()) {
      CHECK(r.categories.empty());
    } else {
      CHECK(std::any_of(r.categories.begin(), r.categories.end(),
                        [&](Category c) { return to_string(c) == expected; }));
    }
    ++seen;
  }
  CHECK(seen == 17);
}

TEST_CASE("categories never mix the syntax and semantic families") {
  std::ifstream in(reference::fixture("corpus/taxonomy.jsonl"));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto doc = nlohmann::json::parse(line);
    const std::string query = doc["query"];
    CAPTURE(query);
    const ErrorReport r = classify_text(doc["problem"], query);
    for (Category c : r.categories) CHECK(is_syntax(c) == (r.verdict == Verdict::SyntaxError));
    CHECK(std::is_sorted(r.categories.begin(), r.categories.end()));
    CHECK(std::adjacent_find(r.categories.begin(), r.categories.end()) == r.categories.end());
    if (r.verdict != Verdict::Correct) CHECK_FALSE(r.categories.empty());
  }
}

TEST_CASE("every incorrect query gets at least one category") {
  CHECK_FALSE(classify_text("alpha", "SELECT").categories.empty());
  CHECK_FALSE(classify_text("alpha", "DELETE FROM alpha").categories.empty());
  CHECK_FALSE(classify_text("alpha", "SELECT * FROM alpha WHERE max = 100000").categories.empty());
}

TEST_CASE("the running example has several syntax problems at once") {
  const ErrorReport r = classify_text("fruitSellers", "SELECT * FROM fruitSellers WHERE country=US && quantity < 800");
  CHECK(r.verdict == Verdict::SyntaxError);
  CHECK(r.has(Category::BrokenOperator));
  CHECK(r.has(Category::QuotesOnStrings));
}

TEST_CASE("a wrong output schema is a column mismatch") {
  CHECK(classify_text("hotel", "SELECT CUI, TUI FROM hotel").has(Category::ColumnMismatch));
}

TEST_CASE("a fixable constant is a wrong value, not a wrong operator") {
  const ErrorReport r = classify_text("delta", "SELECT RSAB, CFR FROM delta WHERE CFR < 1834");
  CHECK(r.has(Category::WrongValuesInWhere));
  CHECK_FALSE(r.has(Category::WrongOperatorInWhere));
}

TEST_CASE("joins are out of reach") {
  CHECK_FALSE(classify_text("juliett", "SELECT * FROM juliett WHERE LAT = 'ENG'").has(Category::MissingJoin));
}

TEST_CASE("category names and families") {
  CHECK(to_string(Category::BrokenOperator) == "BrokenOperator");
  CHECK(to_string(Category::MiscSemantic) == "MiscSemantic");
  CHECK(is_syntax(Category::MiscSyntax));
  CHECK_FALSE(is_syntax(Category::WrongSubclausesInWhere));
}
