#include "sqlrepair/rewrite.hpp"

#include <algorithm>

#include "sqlrepair/lexer.hpp"

namespace sqlrepair {

std::string_view to_string(RewriteKind kind) {
  switch (kind) {
    case RewriteKind::OperatorMismatch: return "OperatorMismatch";
    case RewriteKind::ColumnMismatch: return "ColumnMismatch";
    case RewriteKind::StringRepair: return "StringRepair";
  }
  return "?";
}

Rewrite fix_operators(const Query& query) {
  Rewrite out{query, {}, std::nullopt};
  std::vector<LenientToken> kept;
  for (const LenientToken& t : query.lenient) {
    switch (t.kind) {
      case LenientKind::DoubleEq:
        out.log.push_back({RewriteKind::OperatorMismatch, t.text, "="});
        break;
      case LenientKind::AmpAmp:
        out.log.push_back({RewriteKind::OperatorMismatch, t.text, "AND"});
        break;
      case LenientKind::PipePipe:
        out.log.push_back({RewriteKind::OperatorMismatch, t.text, "OR"});
        break;
      default:
        kept.push_back(t);
    }
  }
  out.query.lenient = std::move(kept);
  return out;
}

namespace {

std::string render_list(const SelectList& list) {
  if (list.star) return "*";
  std::string out;
  for (const SelectItem& item : list.items) {
    if (!out.empty()) out += ", ";
    out += item.column;
    if (item.alias) out += " AS " + *item.alias;
  }
  return out;
}

std::vector<std::string> output_names(const SelectList& list) {
  std::vector<std::string> names;
  for (const SelectItem& item : list.items) names.push_back(item.output_name());
  return names;
}

bool contains(const std::vector<std::string>& names, const std::string& name) {
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::optional<SelectList> expand_star(const Table& source, const std::vector<Column>& dest) {
  SelectList list;
  for (const Column& d : dest) {
    const auto idx = source.column_index(d.name);
    if (!idx || source.columns[*idx].type != d.type) return std::nullopt;
    list.items.push_back({d.name, std::nullopt});
  }
  return list;
}

std::optional<SelectList> rename_by_position(const SelectList& list, const Table& source,
                                             const std::vector<Column>& dest) {
  if (list.items.size() != dest.size()) return std::nullopt;
  std::vector<std::string> dest_names;
  for (const Column& d : dest) dest_names.push_back(d.name);
  SelectList renamed = list;
  for (std::size_t i = 0; i < dest.size(); ++i) {
    SelectItem& item = renamed.items[i];
    const auto idx = source.column_index(item.column);
    if (!idx || source.columns[*idx].type != dest[i].type) return std::nullopt;
    if (item.output_name() == dest[i].name) continue;
    // A destination name in the wrong slot is a misplaced column, not a rename.
    if (contains(dest_names, item.output_name())) return std::nullopt;
    if (item.column == dest[i].name) {
      item.alias.reset();
    } else {
      item.alias = dest[i].name;
    }
  }
  return renamed;
}

std::optional<SelectList> rebuild_in_destination_order(const SelectList& list, const Table& source,
                                                       const std::vector<Column>& dest) {
  SelectList rebuilt;
  for (const Column& d : dest) {
    auto existing = std::find_if(list.items.begin(), list.items.end(), [&](const SelectItem& item) {
      const auto idx = source.column_index(item.column);
      return item.output_name() == d.name && idx && source.columns[*idx].type == d.type;
    });
    if (existing != list.items.end()) {
      rebuilt.items.push_back(*existing);
      continue;
    }
    const auto idx = source.column_index(d.name);
    if (!idx || source.columns[*idx].type != d.type) return std::nullopt;
    rebuilt.items.push_back({d.name, std::nullopt});
  }
  return rebuilt;
}

std::optional<SelectList> correct_case(const SelectList& list, const Table& source) {
  SelectList corrected = list;
  bool changed = false;
  for (SelectItem& item : corrected.items) {
    if (source.column_index(item.column)) continue;
    const std::string wanted = to_lower(item.column);
    const Column* match = nullptr;
    int matches = 0;
    for (const Column& c : source.columns) {
      if (to_lower(c.name) == wanted) {
        match = &c;
        ++matches;
      }
    }
    if (matches == 1) {
      item.column = match->name;
      changed = true;
    }
  }
  if (!changed) return std::nullopt;
  return corrected;
}

}  // namespace

Rewrite fix_columns(const Query& query, const ProblemSpec& problem) {
  Rewrite out{query, {}, std::nullopt};
  const Table& source = problem.source_schema();
  const std::vector<Column>& dest = problem.destination_schema().columns;

  std::optional<SelectList> fixed;
  if (query.select.star) {
    if (source.columns == dest) return out;
    fixed = expand_star(source, dest);
  } else {
    std::vector<std::string> dest_names;
    for (const Column& d : dest) dest_names.push_back(d.name);
    const bool all_known = std::all_of(query.select.items.begin(), query.select.items.end(),
                                       [&](const SelectItem& i) { return source.column_index(i.column); });
    if (all_known && output_names(query.select) == dest_names) return out;
    fixed = rename_by_position(query.select, source, dest);
    if (!fixed) fixed = rebuild_in_destination_order(query.select, source, dest);
    if (!fixed) fixed = correct_case(query.select, source);
  }

  if (!fixed || *fixed == query.select) {
    if (!fixed) out.issue = RewriteIssue::NoFix;
    return out;
  }
  out.log.push_back({RewriteKind::ColumnMismatch, render_list(query.select), render_list(*fixed)});
  out.query.select = std::move(*fixed);
  return out;
}

Rewrite fix_strings(const Query& query, const Table& source) {
  Rewrite out{query, {}, std::nullopt};
  if (std::none_of(query.lenient.begin(), query.lenient.end(), [](const LenientToken& t) {
        return t.kind == LenientKind::DoubleQuotedString || t.kind == LenientKind::BareToken;
      })) {
    return out;
  }

  // Bare operands in textual order line up with the BareToken flags in position order.
  struct BareSlot {
    Operand* operand;
    const Operand* other;
  };
  std::vector<BareSlot> bare;
  if (out.query.where) {
    for (Comparison& leaf : out.query.where->leaves) {
      if (leaf.lhs.kind == OperandKind::BareToken) bare.push_back({&leaf.lhs, &leaf.rhs});
      if (leaf.rhs.kind == OperandKind::BareToken) bare.push_back({&leaf.rhs, &leaf.lhs});
    }
  }

  std::vector<LenientToken> kept;
  std::size_t next_bare = 0;
  for (const LenientToken& t : query.lenient) {
    if (t.kind == LenientKind::DoubleQuotedString) {
      out.log.push_back({RewriteKind::StringRepair, "\"" + t.text + "\"", print(Operand::str_literal(t.text))});
      continue;
    }
    if (t.kind != LenientKind::BareToken || next_bare >= bare.size()) {
      kept.push_back(t);
      continue;
    }
    BareSlot slot = bare[next_bare++];
    const std::string word = slot.operand->text;
    if (source.column_index(word)) {
      *slot.operand = Operand::column(word);
      out.log.push_back({RewriteKind::StringRepair, word, word});
      continue;
    }
    const Operand& other = *slot.other;
    const auto other_idx = other.is_column() ? source.column_index(other.text) : std::nullopt;
    if (other_idx && source.columns[*other_idx].type == ColumnType::Str) {
      *slot.operand = Operand::str_literal(word);
      out.log.push_back({RewriteKind::StringRepair, word, print(*slot.operand)});
      continue;
    }
    out.issue = RewriteIssue::Ambiguous;
    kept.push_back(t);
  }
  out.query.lenient = std::move(kept);
  return out;
}

}  // namespace sqlrepair
