#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "sqlrepair/evaluator.hpp"
#include "sqlrepair/synth.hpp"

namespace sqlrepair {

bool check(const Query& query, const ProblemSpec& problem) {
  for (const TablePair& pair : problem.pairs) {
    if (!tables_equal(eval(query, pair.source), pair.destination, pair.ordered)) return false;
  }
  return true;
}

namespace {

// Bit set over the rows of every source, pairs concatenated.
class RowMask {
 public:
  RowMask() = default;
  RowMask(std::size_t bits, bool fill) : words_((bits + 63) / 64, fill ? ~std::uint64_t{0} : 0) {
    if (fill && bits % 64 != 0) words_.back() = (std::uint64_t{1} << (bits % 64)) - 1;
  }

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }

  RowMask& operator&=(const RowMask& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  RowMask& operator|=(const RowMask& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  bool intersects(const RowMask& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & o.words_[i]) return true;
    }
    return false;
  }
  std::size_t hash() const {
    std::size_t h = 1469598103934665603ULL;
    for (std::uint64_t w : words_) h = (h ^ w) * 1099511628211ULL;
    return h;
  }

  friend bool operator==(const RowMask&, const RowMask&) = default;

 private:
  std::vector<std::uint64_t> words_;
};

struct MaskHash {
  std::size_t operator()(const RowMask& m) const { return m.hash(); }
};

const std::vector<CmpOp> kAllOps = {CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge};
const std::vector<CmpOp> kStrOps = {CmpOp::Eq, CmpOp::Ne};

const std::vector<CmpOp>& typed_ops(ColumnType t) { return t == ColumnType::Str ? kStrOps : kAllOps; }

bool supports(ColumnType t, CmpOp op) {
  const auto& ops = typed_ops(t);
  return std::find(ops.begin(), ops.end(), op) != ops.end();
}

// Every source row, with the pair it came from.
struct Universe {
  const Table& schema;
  std::vector<const Row*> rows;
  std::vector<std::size_t> pair_of;
  std::vector<std::size_t> pair_offset;
  std::vector<std::vector<Value>> domains;  // per source column

  explicit Universe(const ProblemSpec& problem) : schema(problem.source_schema()) {
    for (std::size_t p = 0; p < problem.pairs.size(); ++p) {
      pair_offset.push_back(rows.size());
      for (const Row& r : problem.pairs[p].source.rows) {
        rows.push_back(&r);
        pair_of.push_back(p);
      }
    }
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
      std::set<Value> seen;
      for (const Row* r : rows) seen.insert((*r)[c]);
      std::vector<Value> dom(seen.begin(), seen.end());
      if (schema.columns[c].type == ColumnType::Int) {
        if (dom.empty()) {
          dom.push_back(std::int64_t{0});
        } else {
          const auto lo = std::get<std::int64_t>(dom.front());
          const auto hi = std::get<std::int64_t>(dom.back());
          if (lo != std::numeric_limits<std::int64_t>::min()) dom.insert(dom.begin(), lo - 1);
          if (hi != std::numeric_limits<std::int64_t>::max()) dom.push_back(hi + 1);
        }
      } else {
        std::string sentinel = "__none__";
        for (int n = 1; seen.count(Value{sentinel}); ++n) sentinel = "__none__" + std::to_string(n);
        dom.push_back(sentinel);
      }
      domains.push_back(std::move(dom));
    }
  }

  std::size_t size() const { return rows.size(); }
};

// Decides whether a row selection produces every destination.
class PassChecker {
 public:
  PassChecker(const Query& shape, const ProblemSpec& problem, const Universe& u) : problem_(problem), u_(u) {
    viable_ = build(shape);
  }

  bool viable() const { return viable_; }
  const RowMask& forbidden() const { return forbidden_; }

  bool passes(const RowMask& mask) {
    if (auto it = cache_.find(mask); it != cache_.end()) return it->second;
    const bool ok = evaluate(mask);
    cache_.emplace(mask, ok);
    return ok;
  }

 private:
  bool build(const Query& shape) {
    const Table& schema = u_.schema;
    if (!shape.strict() || shape.table != schema.name) return false;
    std::vector<std::size_t> projection;
    std::vector<Column> out;
    if (shape.select.star) {
      projection.resize(schema.columns.size());
      std::iota(projection.begin(), projection.end(), 0);
      out = schema.columns;
    } else {
      for (const SelectItem& item : shape.select.items) {
        const auto idx = schema.column_index(item.column);
        if (!idx) return false;
        projection.push_back(*idx);
        out.push_back({item.output_name(), schema.columns[*idx].type});
      }
    }
    if (out != problem_.destination_schema().columns) return false;
    std::optional<std::size_t> order_col;
    if (shape.order_by) {
      order_col = schema.column_index(shape.order_by->column);
      if (!order_col) return false;
    }
    distinct_ = shape.distinct;

    forbidden_ = RowMask(u_.size(), false);
    for (const Row* r : u_.rows) {
      Row p;
      for (std::size_t idx : projection) p.push_back((*r)[idx]);
      projected_.push_back(std::move(p));
    }
    for (std::size_t p = 0; p < problem_.pairs.size(); ++p) {
      const TablePair& pair = problem_.pairs[p];
      const std::size_t begin = u_.pair_offset[p];
      const std::size_t end = begin + pair.source.rows.size();
      std::vector<std::size_t> order(end - begin);
      std::iota(order.begin(), order.end(), begin);
      if (order_col) {
        const std::size_t col = *order_col;
        const bool desc = shape.order_by->direction == Direction::Desc;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
          const Value& va = (*u_.rows[a])[col];
          const Value& vb = (*u_.rows[b])[col];
          return desc ? vb < va : va < vb;
        });
      }
      orders_.push_back(std::move(order));
      std::vector<Row> expected = pair.destination.rows;
      const std::set<Row> allowed(expected.begin(), expected.end());
      for (std::size_t g = begin; g < end; ++g) {
        if (!allowed.count(projected_[g])) forbidden_.set(g);
      }
      if (!pair.ordered) std::sort(expected.begin(), expected.end());
      expected_.push_back(std::move(expected));
    }
    return true;
  }

  bool evaluate(const RowMask& mask) const {
    for (std::size_t p = 0; p < orders_.size(); ++p) {
      const std::vector<Row>& expected = expected_[p];
      std::vector<const Row*> got;
      std::set<Row> seen;
      for (std::size_t g : orders_[p]) {
        if (!mask.test(g)) continue;
        const Row& row = projected_[g];
        if (distinct_ && !seen.insert(row).second) continue;
        got.push_back(&row);
        if (got.size() > expected.size()) return false;
      }
      if (got.size() != expected.size()) return false;
      if (!problem_.pairs[p].ordered) {
        std::sort(got.begin(), got.end(), [](const Row* a, const Row* b) { return *a < *b; });
      }
      for (std::size_t i = 0; i < got.size(); ++i) {
        if (*got[i] != expected[i]) return false;
      }
    }
    return true;
  }

  const ProblemSpec& problem_;
  const Universe& u_;
  bool viable_ = false;
  bool distinct_ = false;
  RowMask forbidden_;
  std::vector<Row> projected_;
  std::vector<std::vector<std::size_t>> orders_;
  std::vector<std::vector<Row>> expected_;
  std::unordered_map<RowMask, bool, MaskHash> cache_;
};

class Deadline {
 public:
  explicit Deadline(SteadyClock::time_point at) : at_(at) {}
  void tick() {
    if (++count_ % 512 == 0 && SteadyClock::now() >= at_) throw BudgetExceeded("synthesis budget exhausted");
  }

 private:
  SteadyClock::time_point at_;
  std::size_t count_ = 0;
};

// One concrete instantiation of a leaf and its connector.
struct Choice {
  std::optional<BoolOp> bop;
  RowMask mask;
  std::vector<std::pair<std::size_t, HoleValue>> values;
};

template <typename T>
std::vector<T> original_first(const std::optional<HoleValue>& original, const std::vector<T>& domain) {
  std::vector<T> out;
  if (original) {
    if (const T* v = std::get_if<T>(&*original)) out.push_back(*v);
  }
  for (const T& v : domain) {
    if (out.empty() || !(out.front() == v)) out.push_back(v);
  }
  return out;
}

// Enumerates the choices of one leaf in hole order, dropping any whose
// (connector, mask) repeats an earlier one.
class LeafEnumerator {
 public:
  LeafEnumerator(const HoleQuery& hq, std::size_t leaf, const Universe& u, Deadline& deadline)
      : hq_(hq), leaf_(leaf), u_(u), deadline_(deadline) {
    for (const Hole& h : hq.holes) {
      if (h.leaf != leaf) continue;
      switch (h.slot) {
        case HoleSlot::Connector: bop_ = &h; break;
        case HoleSlot::Op: op_ = &h; break;
        case HoleSlot::Lhs: (h.kind == HoleKind::Col ? lhs_col_ : lhs_const_) = &h; break;
        case HoleSlot::Rhs: (h.kind == HoleKind::Col ? rhs_col_ : rhs_const_) = &h; break;
      }
    }
  }

  std::vector<Choice> run() {
    const Predicate& p = *hq_.base.where;
    const Comparison& c = p.leaves[leaf_];
    std::vector<std::optional<BoolOp>> bops;
    if (bop_) {
      for (BoolOp b : original_first<BoolOp>(bop_->original, {BoolOp::And, BoolOp::Or})) bops.push_back(b);
    } else if (leaf_ > 0) {
      bops.push_back(p.connectors[leaf_ - 1]);
    } else {
      bops.push_back(std::nullopt);
    }
    for (const auto& bop : bops) {
      bop_value_ = bop;
      for (const Operand& lhs : column_options(lhs_col_, c.lhs, c.op, nullptr)) {
        for (const Operand& rhs : column_options(rhs_col_, c.rhs, c.op, &lhs)) {
          enumerate_constants(lhs, rhs, c.op);
        }
      }
    }
    return std::move(out_);
  }

 private:
  std::optional<ColumnType> type_of_operand(const Operand& o) const {
    if (o.is_column()) {
      const auto idx = u_.schema.column_index(o.text);
      if (!idx) return std::nullopt;
      return u_.schema.columns[*idx].type;
    }
    if (o.kind == OperandKind::IntLiteral) return ColumnType::Int;
    if (o.kind == OperandKind::StrLiteral) return ColumnType::Str;
    return std::nullopt;
  }

  // Concrete operands for one side. A column hole expands to the source columns;
  // a fixed operand (or a constant hole placeholder) is returned as is.
  std::vector<Operand> column_options(const Hole* hole, const Operand& fixed, CmpOp op, const Operand* lhs) const {
    if (!hole) return {fixed};
    std::optional<ColumnType> original_type;
    std::vector<ColumnName> names;
    for (const Column& col : u_.schema.columns) names.push_back({col.name});
    std::vector<Operand> out;
    const Comparison& c = hq_.base.where->leaves[leaf_];
    if (hole->original) {
      if (const auto* n = std::get_if<ColumnName>(&*hole->original)) {
        original_type = type_of_operand(Operand::column(n->name));
      }
    }
    for (const ColumnName& n : original_first<ColumnName>(hole->original, names)) {
      const auto idx = u_.schema.column_index(n.name);
      if (!idx) continue;
      const ColumnType t = u_.schema.columns[*idx].type;
      if (!op_ && !supports(t, op) && original_type != t) continue;
      if (lhs) {
        // Right-hand side: must match a resolved left side.
        const auto lt = type_of_operand(*lhs);
        if (lhs->is_column() || !lhs_const_) {
          if (lt && *lt != t) continue;
        }
      } else if (!rhs_col_ && !rhs_const_) {
        const auto rt = type_of_operand(c.rhs);
        if (rt && *rt != t) continue;
      }
      out.push_back(Operand::column(n.name));
    }
    return out;
  }

  std::vector<Value> constant_options(const Hole* hole, const std::optional<std::size_t>& anchor) const {
    if (!anchor) return {};
    const ColumnType t = u_.schema.columns[*anchor].type;
    std::optional<HoleValue> original;
    if (hole->original) {
      if (const auto* v = std::get_if<Value>(&*hole->original); v && type_of(*v) == t) original = hole->original;
    }
    return original_first<Value>(original, u_.domains[*anchor]);
  }

  void enumerate_constants(const Operand& lhs, const Operand& rhs, CmpOp fixed_op) {
    // The column a reopened constant is compared against.
    std::optional<std::size_t> anchor;
    if (lhs.is_column() && !lhs_const_) anchor = u_.schema.column_index(lhs.text);
    if (!anchor && rhs.is_column() && !rhs_const_) anchor = u_.schema.column_index(rhs.text);

    std::vector<Value> lvals, rvals;
    if (lhs_const_) lvals = constant_options(lhs_const_, anchor);
    if (rhs_const_) rvals = constant_options(rhs_const_, anchor);
    const std::size_t ln = lhs_const_ ? lvals.size() : 1;
    const std::size_t rn = rhs_const_ ? rvals.size() : 1;
    for (std::size_t i = 0; i < ln; ++i) {
      for (std::size_t j = 0; j < rn; ++j) {
        Operand l = lhs_const_ ? literal(lvals[i]) : lhs;
        Operand r = rhs_const_ ? literal(rvals[j]) : rhs;
        const auto lt = type_of_operand(l);
        const auto rt = type_of_operand(r);
        if (!lt || !rt || *lt != *rt) continue;
        std::vector<CmpOp> ops;
        if (op_) {
          ops = original_first<CmpOp>(op_->original, typed_ops(*lt));
        } else {
          ops = {fixed_op};
        }
        for (CmpOp op : ops) {
          deadline_.tick();
          emit(l, op, r, lhs_const_ ? std::optional<Value>(lvals[i]) : std::nullopt,
               rhs_const_ ? std::optional<Value>(rvals[j]) : std::nullopt);
        }
      }
    }
  }

  static Operand literal(const Value& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return Operand::int_literal(*i);
    return Operand::str_literal(std::get<std::string>(v));
  }

  void emit(const Operand& l, CmpOp op, const Operand& r, const std::optional<Value>& lval,
            const std::optional<Value>& rval) {
    const auto lidx = l.is_column() ? u_.schema.column_index(l.text) : std::nullopt;
    const auto ridx = r.is_column() ? u_.schema.column_index(r.text) : std::nullopt;
    const Value lconst = l.is_column() ? Value{} : operand_value(l, u_.schema, {});
    const Value rconst = r.is_column() ? Value{} : operand_value(r, u_.schema, {});
    RowMask mask(u_.size(), false);
    for (std::size_t g = 0; g < u_.size(); ++g) {
      const Row& row = *u_.rows[g];
      const Value& a = lidx ? row[*lidx] : lconst;
      const Value& b = ridx ? row[*ridx] : rconst;
      if (compare(a, op, b)) mask.set(g);
    }
    const std::size_t bucket = bop_value_ ? static_cast<std::size_t>(*bop_value_) + 1 : 0;
    if (!seen_[bucket].insert(mask).second) return;
    Choice choice{bop_value_, std::move(mask), {}};
    if (bop_) choice.values.emplace_back(bop_->id, HoleValue{*bop_value_});
    if (lhs_col_) choice.values.emplace_back(lhs_col_->id, HoleValue{ColumnName{l.text}});
    if (rhs_col_) choice.values.emplace_back(rhs_col_->id, HoleValue{ColumnName{r.text}});
    if (lhs_const_) choice.values.emplace_back(lhs_const_->id, HoleValue{*lval});
    if (rhs_const_) choice.values.emplace_back(rhs_const_->id, HoleValue{*rval});
    if (op_) choice.values.emplace_back(op_->id, HoleValue{op});
    out_.push_back(std::move(choice));
  }

  const HoleQuery& hq_;
  std::size_t leaf_;
  const Universe& u_;
  Deadline& deadline_;
  const Hole* bop_ = nullptr;
  const Hole* op_ = nullptr;
  const Hole* lhs_col_ = nullptr;
  const Hole* rhs_col_ = nullptr;
  const Hole* lhs_const_ = nullptr;
  const Hole* rhs_const_ = nullptr;
  std::optional<BoolOp> bop_value_;
  std::unordered_set<RowMask, MaskHash> seen_[3];
  std::vector<Choice> out_;
};

struct State {
  RowMask acc;
  RowMask group;
  std::size_t parent = 0;
  std::size_t choice = 0;
  friend bool operator==(const State& a, const State& b) { return a.acc == b.acc && a.group == b.group; }
};

struct StateHash {
  std::size_t operator()(const State& s) const { return s.acc.hash() * 31 + s.group.hash(); }
};

}  // namespace

SolveVerdict solve(const HoleQuery& hq, const ProblemSpec& problem, SteadyClock::time_point deadline_at) {
  Deadline deadline(deadline_at);
  const Universe u(problem);
  PassChecker checker(hq.base, problem, u);
  if (!checker.viable()) return {};

  const std::size_t n = hq.base.leaf_count();
  std::vector<std::vector<Choice>> choices;
  for (std::size_t i = 0; i < n; ++i) {
    choices.push_back(LeafEnumerator(hq, i, u, deadline).run());
    if (choices.back().empty()) return {};
  }

  // levels[i] holds the distinct states after i leaves, in enumeration order of
  // the smallest prefix reaching each.
  std::vector<std::vector<State>> levels(1);
  levels[0].push_back({RowMask(u.size(), false), RowMask(u.size(), true), 0, 0});
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<State> next;
    std::unordered_set<State, StateHash> seen;
    for (std::size_t s = 0; s < levels[i].size(); ++s) {
      const State& from = levels[i][s];
      for (std::size_t k = 0; k < choices[i].size(); ++k) {
        deadline.tick();
        const Choice& ch = choices[i][k];
        State to{from.acc, from.group, s, k};
        if (i > 0 && ch.bop == BoolOp::Or) {
          to.acc |= to.group;
          to.group = ch.mask;
          if (to.acc.intersects(checker.forbidden())) continue;
        } else {
          to.group &= ch.mask;
        }
        if (seen.insert(to).second) next.push_back(std::move(to));
      }
    }
    if (next.empty()) return {};
    levels.push_back(std::move(next));
  }

  for (std::size_t s = 0; s < levels[n].size(); ++s) {
    deadline.tick();
    const State& st = levels[n][s];
    RowMask final = st.acc;
    final |= st.group;
    if (!checker.passes(final)) continue;
    Assignment model(hq.holes.size());
    std::size_t idx = s;
    for (std::size_t i = n; i > 0; --i) {
      const State& cur = levels[i][idx];
      for (const auto& [id, value] : choices[i - 1][cur.choice].values) model[id] = value;
      idx = cur.parent;
    }
    try {
      if (check(substitute(hq, model), problem)) return {std::move(model)};
    } catch (const EvalError&) {
    }
  }
  return {};
}

}  // namespace sqlrepair
