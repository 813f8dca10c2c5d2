#include "sqlrepair/classifier.hpp"

#include <algorithm>
#include <set>

#include "sqlrepair/lexer.hpp"

namespace sqlrepair {

std::string_view to_string(Category c) {
  switch (c) {
    case Category::BrokenOperator: return "BrokenOperator";
    case Category::ColumnReferenceError: return "ColumnReferenceError";
    case Category::QuotesOnStrings: return "QuotesOnStrings";
    case Category::IncompleteQuery: return "IncompleteQuery";
    case Category::WrongOrder: return "WrongOrder";
    case Category::TableReferenceError: return "TableReferenceError";
    case Category::ExtraCommas: return "ExtraCommas";
    case Category::MissingCommas: return "MissingCommas";
    case Category::MiscSyntax: return "MiscSyntax";
    case Category::WrongSubclausesInWhere: return "WrongSubclausesInWhere";
    case Category::MissingOrExtraOperator: return "MissingOrExtraOperator";
    case Category::WrongValuesInWhere: return "WrongValuesInWhere";
    case Category::WrongOrdering: return "WrongOrdering";
    case Category::ColumnMismatch: return "ColumnMismatch";
    case Category::WrongOperatorInWhere: return "WrongOperatorInWhere";
    case Category::MissingJoin: return "MissingJoin";
    case Category::MiscSemantic: return "MiscSemantic";
  }
  return "?";
}

bool is_syntax(Category c) { return c <= Category::MiscSyntax; }

bool ErrorReport::has(Category c) const {
  return std::find(categories.begin(), categories.end(), c) != categories.end();
}

namespace {

std::size_t find_word(const std::vector<Token>& tokens, std::string_view kw, std::size_t from = 0) {
  for (std::size_t i = from; i < tokens.size(); ++i) {
    if (tokens[i].is_word(kw)) return i;
  }
  return tokens.size();
}

bool is_ident(const Token& t) { return t.kind == TokenKind::Word && !is_keyword(t.text); }

bool is_cmp_symbol(const Token& t) {
  static const std::set<std::string> ops = {"=", "==", "!=", "<>", "<", "<=", ">", ">="};
  return t.kind == TokenKind::Symbol && ops.count(t.text) > 0;
}

// Tables named after FROM, up to the next clause keyword. Handles `a, b` and `a x, b y`.
std::vector<std::string> from_tables(const std::vector<Token>& tokens, bool& comma_join) {
  std::vector<std::string> tables;
  comma_join = false;
  const std::size_t from = find_word(tokens, "FROM");
  bool expect_table = true;
  for (std::size_t i = from + 1; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (t.is_symbol(",")) {
      comma_join = true;
      expect_table = true;
    } else if (is_ident(t)) {
      if (expect_table) tables.push_back(t.text);
      expect_table = false;
    } else {
      break;
    }
  }
  return tables;
}

struct SyntaxSignals {
  const std::vector<Token>& tokens;
  const ProblemSpec& problem;
  const ParseResult& parsed;
  std::optional<EvalErrorKind> eval_error;
};

bool broken_operator(const SyntaxSignals& s) {
  return std::any_of(s.tokens.begin(), s.tokens.end(), [](const Token& t) {
    return t.is_symbol("==") || t.is_symbol("&&") || t.is_symbol("||");
  });
}

bool quotes_on_strings(const SyntaxSignals& s) {
  if (const auto* q = std::get_if<Query>(&s.parsed)) {
    return std::any_of(q->lenient.begin(), q->lenient.end(), [](const LenientToken& t) {
      return t.kind == LenientKind::DoubleQuotedString || t.kind == LenientKind::BareToken;
    });
  }
  // Unparsable: look for a double-quoted token or an unknown word next to a comparison.
  const Table& schema = s.problem.source_schema();
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    if (!is_cmp_symbol(s.tokens[i])) continue;
    const Token* left = i > 0 ? &s.tokens[i - 1] : nullptr;
    const Token& right = s.tokens[i + 1 < s.tokens.size() ? i + 1 : i];
    if ((left && left->kind == TokenKind::DoubleQuoted) || right.kind == TokenKind::DoubleQuoted) return true;
    if (left && is_ident(*left) && schema.column_index(left->text) && is_ident(right) &&
        !schema.column_index(right.text) && right.text.find('.') == std::string::npos &&
        !(i + 2 < s.tokens.size() && s.tokens[i + 2].is_symbol("."))) {
      return true;
    }
  }
  return false;
}

bool extra_commas(const SyntaxSignals& s) {
  const auto& t = s.tokens;
  const std::size_t from = find_word(t, "FROM");
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (!t[i].is_symbol(",")) continue;
    const Token& next = t[i + 1];
    if (next.is_symbol(",") || next.is_word("FROM")) return true;
    if (i > 0 && (t[i - 1].is_word("SELECT") || t[i - 1].is_word("DISTINCT"))) return true;
    if (i > from && (next.is_word("WHERE") || next.kind == TokenKind::End)) return true;
  }
  const std::size_t where = find_word(t, "WHERE");
  for (std::size_t i = where; i < t.size(); ++i) {
    if (t[i].is_word("ORDER")) break;
    if (t[i].is_symbol(",")) return true;
  }
  return false;
}

bool missing_commas(const SyntaxSignals& s) {
  const auto& t = s.tokens;
  const std::size_t select = find_word(t, "SELECT");
  const std::size_t from = find_word(t, "FROM", select);
  if (select >= t.size()) return false;
  for (std::size_t i = select + 1; i + 1 < from && i + 1 < t.size(); ++i) {
    if (is_ident(t[i]) && is_ident(t[i + 1]) && !(i > 0 && t[i - 1].is_word("AS"))) return true;
  }
  return false;
}

bool wrong_order(const SyntaxSignals& s) {
  const auto& t = s.tokens;
  std::vector<std::size_t> seen;
  for (std::string_view kw : {"SELECT", "FROM", "WHERE", "ORDER"}) {
    const std::size_t at = find_word(t, kw);
    if (at < t.size()) seen.push_back(at);
  }
  if (!std::is_sorted(seen.begin(), seen.end())) return true;
  const std::size_t distinct = find_word(t, "DISTINCT");
  return distinct < t.size() && (distinct == 0 || !t[distinct - 1].is_word("SELECT"));
}

bool incomplete_query(const SyntaxSignals& s) {
  const auto& t = s.tokens;
  const std::size_t select = find_word(t, "SELECT");
  const std::size_t from = find_word(t, "FROM");
  if (select >= t.size() || from >= t.size()) return true;
  std::size_t first_item = select + 1;
  if (first_item < t.size() && t[first_item].is_word("DISTINCT")) ++first_item;
  if (first_item == from) return true;
  return from + 1 >= t.size() || !is_ident(t[from + 1]);
}

// Names written as `qualifier.column`.
std::vector<std::string> qualifiers(const std::vector<Token>& t) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    if (t[i].is_symbol(".") && is_ident(t[i - 1]) && is_ident(t[i + 1])) out.push_back(t[i - 1].text);
  }
  return out;
}

bool column_reference_error(const SyntaxSignals& s) {
  if (s.eval_error == EvalErrorKind::UnknownColumn) return true;
  bool comma_join = false;
  const auto tables = from_tables(s.tokens, comma_join);
  if (!comma_join || tables.size() < 2) return false;
  // An unqualified select-list column is ambiguous over a comma join.
  const auto& t = s.tokens;
  const std::size_t select = find_word(t, "SELECT");
  const std::size_t from = find_word(t, "FROM");
  for (std::size_t i = select + 1; i < from && i < t.size(); ++i) {
    if (!is_ident(t[i])) continue;
    const bool qualified = (i > 0 && t[i - 1].is_symbol(".")) || (i + 1 < t.size() && t[i + 1].is_symbol("."));
    if (!qualified) return true;
  }
  return false;
}

bool table_reference_error(const SyntaxSignals& s) {
  if (s.eval_error == EvalErrorKind::UnknownTable) return true;
  bool comma_join = false;
  const auto tables = from_tables(s.tokens, comma_join);
  // Aliases count as table names too.
  std::set<std::string> known(tables.begin(), tables.end());
  const std::size_t from = find_word(s.tokens, "FROM");
  for (std::size_t i = from + 1; i + 1 < s.tokens.size(); ++i) {
    if (is_ident(s.tokens[i]) && is_ident(s.tokens[i + 1])) known.insert(s.tokens[i + 1].text);
  }
  const auto q = qualifiers(s.tokens);
  return std::any_of(q.begin(), q.end(), [&](const std::string& name) { return !known.count(name); });
}

std::vector<Category> classify_syntax(std::string_view text, const ProblemSpec& problem) {
  const std::vector<Token> tokens = tokenize(text);
  const ParseResult parsed = parse_for(text, problem);
  std::optional<EvalErrorKind> eval_error;
  if (const auto* q = std::get_if<Query>(&parsed); q && q->strict()) {
    for (const TablePair& pair : problem.pairs) {
      try {
        eval(*q, pair.source);
      } catch (const EvalError& e) {
        eval_error = e.kind();
        break;
      }
    }
  }
  const SyntaxSignals s{tokens, problem, parsed, eval_error};
  std::vector<Category> out;
  if (broken_operator(s)) out.push_back(Category::BrokenOperator);
  if (column_reference_error(s)) out.push_back(Category::ColumnReferenceError);
  if (quotes_on_strings(s)) out.push_back(Category::QuotesOnStrings);
  if (incomplete_query(s)) out.push_back(Category::IncompleteQuery);
  if (wrong_order(s)) out.push_back(Category::WrongOrder);
  if (table_reference_error(s)) out.push_back(Category::TableReferenceError);
  if (extra_commas(s)) out.push_back(Category::ExtraCommas);
  if (missing_commas(s)) out.push_back(Category::MissingCommas);
  if (out.empty()) out.push_back(Category::MiscSyntax);
  return out;
}

std::vector<std::string> sorted_names(const std::vector<Column>& columns) {
  std::vector<std::string> names;
  for (const Column& c : columns) names.push_back(c.name);
  std::sort(names.begin(), names.end());
  return names;
}

bool stage_passes(const std::optional<SynthResult>& r) { return r.has_value(); }

std::vector<Category> classify_semantic(std::string_view text, const Triage& triage, const ProblemSpec& problem,
                                        const SynthOptions& options) {
  std::vector<Category> out;
  const ParseResult parsed = parse_for(text, problem);
  const auto* q = std::get_if<Query>(&parsed);
  if (!q || !triage.first_failing_pair) return {Category::MiscSemantic};
  const TablePair& pair = problem.pairs.at(*triage.first_failing_pair);
  Table actual = triage.actual_output ? *triage.actual_output : eval(*q, pair.source);

  if (sorted_names(actual.columns) != sorted_names(pair.destination.columns)) {
    out.push_back(Category::ColumnMismatch);
  }
  if (pair.ordered && tables_equal(actual, pair.destination, false)) out.push_back(Category::WrongOrdering);
  Query toggled = *q;
  toggled.distinct = !toggled.distinct;
  if (tables_equal(eval(toggled, pair.source), pair.destination, pair.ordered)) {
    out.push_back(Category::MissingOrExtraOperator);
  }

  if (out.empty()) {
    try {
      if (stage_passes(synth_constants(*q, problem, options))) {
        out.push_back(Category::WrongValuesInWhere);
      } else {
        // Operators alone, constants left as written.
        HoleQuery ops = abstract_operators(*q, problem);
        std::erase_if(ops.holes, [](const Hole& h) { return h.kind != HoleKind::Op; });
        for (std::size_t i = 0; i < ops.holes.size(); ++i) ops.holes[i].id = i;
        const auto now = SteadyClock::now();
        const auto window = std::min(options.deadline, now + options.per_solve);
        bool ops_only = false;
        if (!ops.holes.empty()) {
          try {
            ops_only = solve(ops, problem, window).sat();
          } catch (const BudgetExceeded&) {
            if (SteadyClock::now() >= options.deadline) throw;
          }
        }
        if (ops_only) {
          out.push_back(Category::WrongOperatorInWhere);
        } else if (stage_passes(synth_columns(*q, problem, options)) ||
                   stage_passes(remove_clauses(*q, problem, options)) ||
                   stage_passes(synth_clauses(*q, problem, options))) {
          out.push_back(Category::WrongSubclausesInWhere);
        }
      }
    } catch (const BudgetExceeded&) {
    }
  }
  if (out.empty()) out.push_back(Category::MiscSemantic);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ErrorReport classify(std::string_view text, const Triage& triage, const ProblemSpec& problem,
                     const SynthOptions& options) {
  ErrorReport report;
  report.verdict = triage.verdict;
  switch (triage.verdict) {
    case Verdict::Correct: break;
    case Verdict::SyntaxError: report.categories = classify_syntax(text, problem); break;
    case Verdict::SemanticError: report.categories = classify_semantic(text, triage, problem, options); break;
  }
  return report;
}

}  // namespace sqlrepair
