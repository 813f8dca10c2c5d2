#include "sqlrepair/evaluator.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace sqlrepair {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Correct: return "correct";
    case Verdict::SyntaxError: return "syntax-error";
    case Verdict::SemanticError: return "semantic-error";
  }
  return "?";
}

bool compare(const Value& lhs, CmpOp op, const Value& rhs) {
  if (lhs.index() != rhs.index()) {
    throw EvalError(EvalErrorKind::TypeMismatch, "cannot compare " + format_value(lhs) + " with " +
                                                     format_value(rhs) + ": type mismatch");
  }
  switch (op) {
    case CmpOp::Eq: return lhs == rhs;
    case CmpOp::Ne: return lhs != rhs;
    case CmpOp::Lt: return lhs < rhs;
    case CmpOp::Le: return lhs <= rhs;
    case CmpOp::Gt: return lhs > rhs;
    case CmpOp::Ge: return lhs >= rhs;
  }
  return false;
}

Value operand_value(const Operand& operand, const Table& source, const Row& row) {
  switch (operand.kind) {
    case OperandKind::ColumnRef: {
      const auto idx = source.column_index(operand.text);
      if (!idx) throw EvalError(EvalErrorKind::UnknownColumn, "unknown column '" + operand.text + "'");
      return row[*idx];
    }
    case OperandKind::IntLiteral: return operand.integer;
    case OperandKind::StrLiteral: return operand.text;
    case OperandKind::BareToken: break;
  }
  throw EvalError(EvalErrorKind::NotStrict, "unquoted word '" + operand.text + "'");
}

namespace {

struct Resolved {
  std::optional<std::size_t> column;
  Value constant;
};

Resolved resolve(const Operand& operand, const Table& source) {
  if (operand.kind == OperandKind::ColumnRef) {
    const auto idx = source.column_index(operand.text);
    if (!idx) throw EvalError(EvalErrorKind::UnknownColumn, "unknown column '" + operand.text + "'");
    return {idx, {}};
  }
  if (operand.kind == OperandKind::BareToken) {
    throw EvalError(EvalErrorKind::NotStrict, "unquoted word '" + operand.text + "'");
  }
  return {std::nullopt, operand_value(operand, source, {})};
}

ColumnType resolved_type(const Resolved& r, const Table& source) {
  return r.column ? source.columns[*r.column].type : type_of(r.constant);
}

}  // namespace

Table eval(const Query& query, const Table& source) {
  if (!query.strict()) {
    throw EvalError(EvalErrorKind::NotStrict, "non-standard token '" + query.lenient.front().text + "'");
  }
  if (query.table != source.name) {
    throw EvalError(EvalErrorKind::UnknownTable, "unknown table '" + query.table + "'");
  }

  // Resolve and type-check everything up front, so errors do not depend on the data.
  struct Leaf {
    Resolved lhs, rhs;
    CmpOp op;
  };
  std::vector<Leaf> leaves;
  if (query.where) {
    for (const Comparison& c : query.where->leaves) {
      Leaf leaf{resolve(c.lhs, source), resolve(c.rhs, source), c.op};
      if (resolved_type(leaf.lhs, source) != resolved_type(leaf.rhs, source)) {
        throw EvalError(EvalErrorKind::TypeMismatch,
                        "type mismatch in '" + print(c) + "'");
      }
      leaves.push_back(std::move(leaf));
    }
  }

  std::vector<std::size_t> projection;
  Table out;
  out.name = source.name;
  if (query.select.star) {
    projection.resize(source.columns.size());
    std::iota(projection.begin(), projection.end(), 0);
    out.columns = source.columns;
  } else {
    for (const SelectItem& item : query.select.items) {
      const auto idx = source.column_index(item.column);
      if (!idx) throw EvalError(EvalErrorKind::UnknownColumn, "unknown column '" + item.column + "'");
      projection.push_back(*idx);
      out.columns.push_back({item.output_name(), source.columns[*idx].type});
    }
  }

  std::optional<std::size_t> order_column;
  if (query.order_by) {
    order_column = source.column_index(query.order_by->column);
    if (!order_column) {
      throw EvalError(EvalErrorKind::UnknownColumn,
                      "unknown column '" + query.order_by->column + "'");
    }
  }

  auto value_of = [](const Resolved& r, const Row& row) -> const Value& {
    return r.column ? row[*r.column] : r.constant;
  };

  std::vector<const Row*> selected;
  for (const Row& row : source.rows) {
    bool keep = true;
    if (!leaves.empty()) {
      // OR of AND-groups.
      bool any_group = false;
      bool group = true;
      for (std::size_t i = 0; i < leaves.size(); ++i) {
        if (i > 0 && query.where->connectors[i - 1] == BoolOp::Or) {
          any_group = any_group || group;
          group = true;
        }
        const Leaf& leaf = leaves[i];
        group = group && compare(value_of(leaf.lhs, row), leaf.op, value_of(leaf.rhs, row));
      }
      keep = any_group || group;
    }
    if (keep) selected.push_back(&row);
  }

  if (order_column) {
    const std::size_t col = *order_column;
    const bool desc = query.order_by->direction == Direction::Desc;
    std::stable_sort(selected.begin(), selected.end(), [&](const Row* a, const Row* b) {
      return desc ? (*b)[col] < (*a)[col] : (*a)[col] < (*b)[col];
    });
  }

  std::set<Row> seen;
  for (const Row* row : selected) {
    Row projected;
    projected.reserve(projection.size());
    for (std::size_t idx : projection) projected.push_back((*row)[idx]);
    if (query.distinct && !seen.insert(projected).second) continue;
    out.rows.push_back(std::move(projected));
  }
  return out;
}

ParseResult parse_for(std::string_view text, const ProblemSpec& problem) {
  const std::vector<std::string> columns = problem.source_schema().column_names();
  return parse_lenient(text, columns);
}

Triage triage(std::string_view text, const ProblemSpec& problem) {
  Triage result;
  ParseResult parsed_query = parse_for(text, problem);
  if (const auto* failure = std::get_if<ParseFailure>(&parsed_query)) {
    result.detail = failure->message + " at '" + failure->token + "'";
    return result;
  }
  const Query& query = std::get<Query>(parsed_query);
  if (!query.strict()) {
    result.detail = "non-standard token '" + query.lenient.front().text + "'";
    return result;
  }
  for (std::size_t i = 0; i < problem.pairs.size(); ++i) {
    const TablePair& pair = problem.pairs[i];
    Table actual;
    try {
      actual = eval(query, pair.source);
    } catch (const EvalError& e) {
      result.verdict = Verdict::SyntaxError;
      result.detail = e.what();
      return result;
    }
    if (!tables_equal(actual, pair.destination, pair.ordered)) {
      result.verdict = Verdict::SemanticError;
      result.first_failing_pair = i;
      result.actual_output = std::move(actual);
      return result;
    }
  }
  result.verdict = Verdict::Correct;
  return result;
}

}  // namespace sqlrepair
