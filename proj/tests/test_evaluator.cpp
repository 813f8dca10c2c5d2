#include <doctest.h>

#include "reference.hpp"
#include "sqlrepair/evaluator.hpp"
#include "sqlrepair/problem_io.hpp"

using namespace sqlrepair;

namespace {

const ProblemSpec& problem(const std::string& id) {
  static const auto all = load_problem_dir(reference::fixture("problems"));
  return all.at(id);
}

Query q(std::string_view text) {
  ParseResult r = parse_strict(text, problem("fruitSellers").source_schema().column_names());
  REQUIRE_MESSAGE(parsed(r), text);
  return std::get<Query>(r);
}

const Table& fruit() { return problem("fruitSellers").pairs[0].source; }

}  // namespace

TEST_CASE("compare orders ints numerically and strings bytewise") {
  CHECK(compare(Value{std::int64_t{9}}, CmpOp::Lt, Value{std::int64_t{10}}));
  CHECK(compare(Value{std::string("B")}, CmpOp::Lt, Value{std::string("a")}));
  CHECK(compare(Value{std::string("10")}, CmpOp::Lt, Value{std::string("9")}));
  CHECK_THROWS_AS(compare(Value{std::int64_t{1}}, CmpOp::Eq, Value{std::string("1")}), EvalError);
}

TEST_CASE("the expected query for the fruit problem reproduces the destination") {
  const Table out = eval(q("SELECT item, price, quantity, country FROM fruitSellers "
                           "WHERE country = 'US' AND quantity < 300"),
                         fruit());
  CHECK(out == problem("fruitSellers").pairs[0].destination);
}

TEST_CASE("AND binds tighter than OR") {
  const Table out = eval(q("SELECT item FROM fruitSellers WHERE price = 11 OR country = 'US' AND price = 1"), fruit());
  REQUIRE(out.rows.size() == 2);
  CHECK(out.rows[0][0] == Value{std::string("oranges")});
  CHECK(out.rows[1][0] == Value{std::string("grapes")});
}

TEST_CASE("constants may appear on the left") {
  const Table out = eval(q("SELECT item FROM fruitSellers WHERE 5 < price"), fruit());
  CHECK(out.rows.size() == 2);
}

TEST_CASE("ORDER BY is stable and DISTINCT keeps first occurrences") {
  const Table out = eval(q("SELECT country FROM fruitSellers ORDER BY price DESC"), fruit());
  REQUIRE(out.rows.size() == 4);
  CHECK(out.rows[0][0] == Value{std::string("MA")});
  const Table d = eval(q("SELECT DISTINCT country FROM fruitSellers"), fruit());
  REQUIRE(d.rows.size() == 3);
  CHECK(d.rows[0][0] == Value{std::string("US")});
  CHECK(d.rows[2][0] == Value{std::string("MA")});

  const Table same_key = eval(q("SELECT SVER FROM golf ORDER BY SVER"), problem("golf").pairs[0].source);
  CHECK(same_key.rows.size() == 7);
}

TEST_CASE("aliases rename output columns") {
  const Table out = eval(q("SELECT item AS name FROM fruitSellers WHERE price = 3"), fruit());
  CHECK(out.columns == std::vector<Column>{{"name", ColumnType::Str}});
}

TEST_CASE("evaluation errors are independent of the data") {
  Table empty = fruit();
  empty.rows.clear();
  auto kind_of = [&](std::string_view text) {
    try {
      eval(q(text), empty);
    } catch (const EvalError& e) {
      return std::optional<EvalErrorKind>(e.kind());
    }
    return std::optional<EvalErrorKind>();
  };
  CHECK(kind_of("SELECT nope FROM fruitSellers") == EvalErrorKind::UnknownColumn);
  CHECK(kind_of("SELECT * FROM fruitSellers WHERE price = 'x'") == EvalErrorKind::TypeMismatch);
  CHECK(kind_of("SELECT * FROM fruitSellers WHERE price = country") == EvalErrorKind::TypeMismatch);
  CHECK(kind_of("SELECT * FROM sellers") == EvalErrorKind::UnknownTable);
  CHECK(kind_of("SELECT * FROM fruitSellers ORDER BY nope") == EvalErrorKind::UnknownColumn);
  CHECK_FALSE(kind_of("SELECT * FROM fruitSellers WHERE price = 1"));
}

TEST_CASE("lenient queries refuse to run") {
  const Query lenient = std::get<Query>(parse_lenient("SELECT * FROM fruitSellers WHERE price == 1"));
  CHECK_THROWS_AS(eval(lenient, fruit()), EvalError);
}

TEST_CASE("triage separates syntax errors, semantic errors and correct queries") {
  const ProblemSpec& delta = problem("delta");
  CHECK(triage("SELECT RSAB, CFR FROM delta WHERE CFR < 1865", delta).verdict == Verdict::Correct);

  const Triage wrong = triage("SELECT RSAB, CFR FROM delta WHERE CFR < 1851", delta);
  CHECK(wrong.verdict == Verdict::SemanticError);
  CHECK(wrong.first_failing_pair == 1u);
  REQUIRE(wrong.actual_output);
  CHECK(wrong.actual_output->rows.size() == 1);

  CHECK(triage("SELECT RSAB CFR FROM delta", delta).verdict == Verdict::SyntaxError);
  CHECK(triage("SELECT * FROM delta WHERE CFR == 1", delta).verdict == Verdict::SyntaxError);
  const Triage unknown = triage("SELECT XYZ FROM delta", delta);
  CHECK(unknown.verdict == Verdict::SyntaxError);
  CHECK(unknown.detail.find("XYZ") != std::string::npos);
}

TEST_CASE("triage checks pairs in order and stops at the first failure") {
  const Triage t = triage("SELECT RSAB, CFR FROM delta WHERE CFR < 1834", problem("delta"));
  CHECK(t.first_failing_pair == 0u);
}

TEST_CASE("ordered pairs need the right row order") {
  const ProblemSpec& echo = problem("echo");
  CHECK(triage("SELECT * FROM echo ORDER BY MRRANK_RANK", echo).verdict == Verdict::Correct);
  CHECK(triage("SELECT * FROM echo ORDER BY MRRANK_RANK DESC", echo).verdict == Verdict::SemanticError);
  CHECK(triage("SELECT * FROM echo", echo).verdict == Verdict::SemanticError);
}

TEST_CASE("verdict names") {
  CHECK(to_string(Verdict::Correct) == "correct");
  CHECK(to_string(Verdict::SyntaxError) == "syntax-error");
  CHECK(to_string(Verdict::SemanticError) == "semantic-error");
}
