#include <algorithm>
#include <map>

#include "sqlrepair/synth.hpp"

namespace sqlrepair {

namespace {

int slot_rank(const Hole& h) {
  switch (h.slot) {
    case HoleSlot::Connector: return 0;
    case HoleSlot::Lhs: return h.kind == HoleKind::Col ? 1 : 3;
    case HoleSlot::Rhs: return h.kind == HoleKind::Col ? 2 : 3;
    case HoleSlot::Op: return 4;
  }
  return 5;
}

// Ids follow the enumeration order documented in synth.hpp.
void renumber(HoleQuery& hq) {
  std::stable_sort(hq.holes.begin(), hq.holes.end(), [](const Hole& a, const Hole& b) {
    if (a.leaf != b.leaf) return a.leaf < b.leaf;
    return slot_rank(a) < slot_rank(b);
  });
  for (std::size_t i = 0; i < hq.holes.size(); ++i) hq.holes[i].id = i;
}

std::optional<ColumnType> column_type(const Operand& operand, const Table& schema) {
  if (!operand.is_column()) return std::nullopt;
  const auto idx = schema.column_index(operand.text);
  if (!idx) return std::nullopt;
  return schema.columns[*idx].type;
}

Value literal_value(const Operand& operand) {
  if (operand.kind == OperandKind::IntLiteral) return operand.integer;
  return operand.text;
}

Operand literal_operand(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return Operand::int_literal(*i);
  return Operand::str_literal(std::get<std::string>(v));
}

// Const hole over the constant side of a `column op constant` comparison.
void add_constant_hole(HoleQuery& hq, std::size_t leaf, const Table& schema,
                       std::optional<ColumnType> type_hint, bool follows_column_hole) {
  const Comparison& c = hq.base.where->leaves[leaf];
  const bool lhs_const = c.lhs.is_constant() && c.rhs.is_column();
  const bool rhs_const = c.rhs.is_constant() && c.lhs.is_column();
  if (!lhs_const && !rhs_const) return;
  const Operand& constant = lhs_const ? c.lhs : c.rhs;
  const Operand& column = lhs_const ? c.rhs : c.lhs;
  Hole h;
  h.kind = HoleKind::Const;
  h.leaf = leaf;
  h.slot = lhs_const ? HoleSlot::Lhs : HoleSlot::Rhs;
  h.type = follows_column_hole ? std::nullopt : (type_hint ? type_hint : column_type(column, schema));
  h.original = HoleValue{literal_value(constant)};
  hq.holes.push_back(std::move(h));
}

}  // namespace

Query substitute(const HoleQuery& hq, const Assignment& assignment) {
  Query q = hq.base;
  for (const Hole& h : hq.holes) {
    const HoleValue& v = assignment.at(h.id);
    if (h.slot == HoleSlot::Connector) {
      q.where->connectors.at(h.leaf - 1) = std::get<BoolOp>(v);
      continue;
    }
    Comparison& leaf = q.where->leaves.at(h.leaf);
    switch (h.slot) {
      case HoleSlot::Op:
        leaf.op = std::get<CmpOp>(v);
        break;
      case HoleSlot::Lhs:
      case HoleSlot::Rhs: {
        Operand& target = h.slot == HoleSlot::Lhs ? leaf.lhs : leaf.rhs;
        if (const auto* col = std::get_if<ColumnName>(&v)) {
          target = Operand::column(col->name);
        } else {
          target = literal_operand(std::get<Value>(v));
        }
        break;
      }
      default:
        break;
    }
  }
  return q;
}

std::string render(const HoleQuery& hq) {
  std::map<HoleKind, int> counters;
  std::map<std::pair<std::size_t, HoleSlot>, std::string> marks;
  for (const Hole& h : hq.holes) {
    const int n = ++counters[h.kind];
    std::string name;
    switch (h.kind) {
      case HoleKind::Const: name = "CONST_"; break;
      case HoleKind::Op: name = "OP_"; break;
      case HoleKind::Col: name = "COL_"; break;
      case HoleKind::Bop: name = "BOP_"; break;
    }
    marks[{h.leaf, h.slot}] = name + std::to_string(n);
  }
  Query shape = hq.base;
  shape.where.reset();
  shape.lenient.clear();
  std::string out = print(shape);
  if (!hq.base.where) return out;

  // Splice the predicate in front of any ORDER BY.
  std::string tail;
  if (const auto pos = out.find(" ORDER BY "); shape.order_by && pos != std::string::npos) {
    tail = out.substr(pos);
    out.erase(pos);
  }
  auto mark_or = [&](std::size_t leaf, HoleSlot slot, std::string fallback) {
    const auto it = marks.find({leaf, slot});
    return it == marks.end() ? std::move(fallback) : it->second;
  };
  const Predicate& p = *hq.base.where;
  out += " WHERE ";
  for (std::size_t i = 0; i < p.leaves.size(); ++i) {
    if (i > 0) {
      out += ' ' + mark_or(i, HoleSlot::Connector, std::string(to_string(p.connectors[i - 1]))) + ' ';
    }
    const Comparison& c = p.leaves[i];
    out += mark_or(i, HoleSlot::Lhs, print(c.lhs)) + ' ' +
           mark_or(i, HoleSlot::Op, std::string(to_string(c.op))) + ' ' +
           mark_or(i, HoleSlot::Rhs, print(c.rhs));
  }
  return out + tail;
}

HoleQuery abstract_constants(const Query& query, const ProblemSpec& problem) {
  HoleQuery hq{query, {}};
  if (!query.where) return hq;
  for (std::size_t i = 0; i < query.where->leaves.size(); ++i) {
    add_constant_hole(hq, i, problem.source_schema(), std::nullopt, false);
  }
  renumber(hq);
  return hq;
}

HoleQuery abstract_operators(const Query& query, const ProblemSpec& problem) {
  HoleQuery hq{query, {}};
  if (!query.where) return hq;
  const Table& schema = problem.source_schema();
  for (std::size_t i = 0; i < query.where->leaves.size(); ++i) {
    const Comparison& c = query.where->leaves[i];
    Hole h;
    h.kind = HoleKind::Op;
    h.leaf = i;
    h.slot = HoleSlot::Op;
    h.type = column_type(c.lhs, schema);
    if (!h.type) h.type = column_type(c.rhs, schema);
    if (!h.type && c.lhs.is_constant()) h.type = type_of(literal_value(c.lhs));
    h.original = HoleValue{c.op};
    hq.holes.push_back(std::move(h));
    add_constant_hole(hq, i, schema, std::nullopt, false);
  }
  renumber(hq);
  return hq;
}

HoleQuery abstract_columns(const Query& query, const ProblemSpec& problem,
                           std::optional<std::size_t> only_leaf) {
  HoleQuery hq{query, {}};
  if (!query.where) return hq;
  const Table& schema = problem.source_schema();
  for (std::size_t i = 0; i < query.where->leaves.size(); ++i) {
    if (only_leaf && *only_leaf != i) continue;
    const Comparison& c = query.where->leaves[i];
    bool any = false;
    for (HoleSlot slot : {HoleSlot::Lhs, HoleSlot::Rhs}) {
      const Operand& operand = slot == HoleSlot::Lhs ? c.lhs : c.rhs;
      if (!operand.is_column()) continue;
      Hole h;
      h.kind = HoleKind::Col;
      h.leaf = i;
      h.slot = slot;
      h.original = HoleValue{ColumnName{operand.text}};
      hq.holes.push_back(std::move(h));
      any = true;
    }
    if (any) add_constant_hole(hq, i, schema, std::nullopt, true);
  }
  renumber(hq);
  return hq;
}

HoleQuery append_clause(HoleQuery hq, const ProblemSpec& problem) {
  (void)problem;
  if (!hq.base.where) hq.base.where = Predicate{};
  Predicate& p = *hq.base.where;
  const std::size_t leaf = p.leaves.size();
  p.leaves.push_back(Comparison{Operand::column(""), CmpOp::Eq, Operand::int_literal(0)});
  if (leaf > 0) {
    p.connectors.push_back(BoolOp::And);
    hq.holes.push_back({HoleKind::Bop, 0, leaf, HoleSlot::Connector, std::nullopt, std::nullopt});
  }
  hq.holes.push_back({HoleKind::Col, 0, leaf, HoleSlot::Lhs, std::nullopt, std::nullopt});
  hq.holes.push_back({HoleKind::Const, 0, leaf, HoleSlot::Rhs, std::nullopt, std::nullopt});
  hq.holes.push_back({HoleKind::Op, 0, leaf, HoleSlot::Op, std::nullopt, std::nullopt});
  renumber(hq);
  return hq;
}

}  // namespace sqlrepair
