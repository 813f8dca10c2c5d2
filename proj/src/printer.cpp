#include <string>

#include "sqlrepair/ast.hpp"

namespace sqlrepair {

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

std::string_view to_string(BoolOp op) { return op == BoolOp::And ? "AND" : "OR"; }

std::string_view to_string(LenientKind kind) {
  switch (kind) {
    case LenientKind::DoubleEq: return "DoubleEq";
    case LenientKind::AmpAmp: return "AmpAmp";
    case LenientKind::PipePipe: return "PipePipe";
    case LenientKind::DoubleQuotedString: return "DoubleQuotedString";
    case LenientKind::BareToken: return "BareToken";
  }
  return "?";
}

CmpOp flipped(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return CmpOp::Gt;
    case CmpOp::Le: return CmpOp::Ge;
    case CmpOp::Gt: return CmpOp::Lt;
    case CmpOp::Ge: return CmpOp::Le;
    default: return op;
  }
}

Operand Operand::column(std::string name) {
  return {OperandKind::ColumnRef, std::move(name), 0};
}
Operand Operand::int_literal(std::int64_t value) { return {OperandKind::IntLiteral, {}, value}; }
Operand Operand::str_literal(std::string value) {
  return {OperandKind::StrLiteral, std::move(value), 0};
}
Operand Operand::bare(std::string word) { return {OperandKind::BareToken, std::move(word), 0}; }

std::string print(const Operand& operand) {
  switch (operand.kind) {
    case OperandKind::ColumnRef:
    case OperandKind::BareToken:
      return operand.text;
    case OperandKind::IntLiteral:
      return std::to_string(operand.integer);
    case OperandKind::StrLiteral: {
      std::string out = "'";
      for (char c : operand.text) {
        if (c == '\'') out.push_back('\'');
        out.push_back(c);
      }
      out.push_back('\'');
      return out;
    }
  }
  return {};
}

std::string print(const Comparison& leaf) {
  std::string out = print(leaf.lhs);
  out += ' ';
  out += to_string(leaf.op);
  out += ' ';
  out += print(leaf.rhs);
  return out;
}

std::string print(const Query& query) {
  if (!query.strict()) {
    throw RenderError("query still contains non-standard token '" + query.lenient.front().text +
                      "'");
  }
  std::string out = "SELECT ";
  if (query.distinct) out += "DISTINCT ";
  if (query.select.star) {
    out += '*';
  } else {
    for (std::size_t i = 0; i < query.select.items.size(); ++i) {
      if (i > 0) out += ", ";
      const SelectItem& item = query.select.items[i];
      out += item.column;
      if (item.alias) out += " AS " + *item.alias;
    }
  }
  out += " FROM ";
  out += query.table;
  if (query.where) {
    out += " WHERE ";
    const Predicate& p = *query.where;
    for (std::size_t i = 0; i < p.leaves.size(); ++i) {
      if (i > 0) {
        out += ' ';
        out += to_string(p.connectors[i - 1]);
        out += ' ';
      }
      out += print(p.leaves[i]);
    }
  }
  if (query.order_by) {
    out += " ORDER BY " + query.order_by->column;
    if (query.order_by->direction == Direction::Desc) out += " DESC";
  }
  return out;
}

}  // namespace sqlrepair
