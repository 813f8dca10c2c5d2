#include "reference.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace reference {

using namespace sqlrepair;

std::string fixture(const std::string& relative) { return std::string(SQLREPAIR_FIXTURE_DIR) + "/" + relative; }

namespace {

std::optional<std::size_t> index_of(const Table& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (t.columns[i].name == name) return i;
  }
  return std::nullopt;
}

struct Side {
  std::optional<std::size_t> column;
  Value constant;
  ColumnType type;
};

std::optional<Side> side(const Operand& o, const Table& t) {
  switch (o.kind) {
    case OperandKind::ColumnRef: {
      const auto i = index_of(t, o.text);
      if (!i) return std::nullopt;
      return Side{i, {}, t.columns[*i].type};
    }
    case OperandKind::IntLiteral: return Side{std::nullopt, o.integer, ColumnType::Int};
    case OperandKind::StrLiteral: return Side{std::nullopt, o.text, ColumnType::Str};
    default: return std::nullopt;
  }
}

bool holds(const Value& a, CmpOp op, const Value& b) {
  const int c = a < b ? -1 : (b < a ? 1 : 0);
  switch (op) {
    case CmpOp::Eq: return c == 0;
    case CmpOp::Ne: return c != 0;
    case CmpOp::Lt: return c < 0;
    case CmpOp::Le: return c <= 0;
    case CmpOp::Gt: return c > 0;
    case CmpOp::Ge: return c >= 0;
  }
  return false;
}

}  // namespace

std::optional<Table> run(const Query& q, const Table& source) {
  if (!q.lenient.empty() || q.table != source.name) return std::nullopt;

  // Split the predicate into AND-groups up front.
  std::vector<std::vector<std::pair<Side, std::pair<CmpOp, Side>>>> groups;
  if (q.where) {
    groups.emplace_back();
    for (std::size_t i = 0; i < q.where->leaves.size(); ++i) {
      if (i > 0 && q.where->connectors[i - 1] == BoolOp::Or) groups.emplace_back();
      const Comparison& c = q.where->leaves[i];
      auto l = side(c.lhs, source);
      auto r = side(c.rhs, source);
      if (!l || !r || l->type != r->type) return std::nullopt;
      groups.back().push_back({*l, {c.op, *r}});
    }
  }

  std::vector<std::size_t> cols;
  Table out{source.name, {}, {}};
  if (q.select.star) {
    for (std::size_t i = 0; i < source.columns.size(); ++i) cols.push_back(i);
    out.columns = source.columns;
  } else {
    for (const SelectItem& item : q.select.items) {
      const auto i = index_of(source, item.column);
      if (!i) return std::nullopt;
      cols.push_back(*i);
      out.columns.push_back({item.alias ? *item.alias : item.column, source.columns[*i].type});
    }
  }
  std::optional<std::size_t> key;
  if (q.order_by) {
    key = index_of(source, q.order_by->column);
    if (!key) return std::nullopt;
  }

  std::vector<std::size_t> picked;
  for (std::size_t r = 0; r < source.rows.size(); ++r) {
    const Row& row = source.rows[r];
    auto value = [&](const Side& s) -> const Value& { return s.column ? row[*s.column] : s.constant; };
    bool keep = groups.empty();
    for (const auto& group : groups) {
      bool all = true;
      for (const auto& [l, rest] : group) all = all && holds(value(l), rest.first, value(rest.second));
      keep = keep || all;
    }
    if (keep) picked.push_back(r);
  }
  if (key) {
    const bool desc = q.order_by->direction == Direction::Desc;
    std::sort(picked.begin(), picked.end(), [&](std::size_t a, std::size_t b) {
      const Value& va = source.rows[a][*key];
      const Value& vb = source.rows[b][*key];
      if (va != vb) return desc ? vb < va : va < vb;
      return a < b;
    });
  }
  for (std::size_t r : picked) {
    Row row;
    for (std::size_t c : cols) row.push_back(source.rows[r][c]);
    if (q.distinct && std::find(out.rows.begin(), out.rows.end(), row) != out.rows.end()) continue;
    out.rows.push_back(std::move(row));
  }
  return out;
}

bool solves(const Query& q, const ProblemSpec& problem) {
  for (const TablePair& pair : problem.pairs) {
    const auto got = run(q, pair.source);
    if (!got || got->columns != pair.destination.columns) return false;
    if (got->rows.size() != pair.destination.rows.size()) return false;
    if (pair.ordered) {
      if (got->rows != pair.destination.rows) return false;
    } else if (!std::is_permutation(got->rows.begin(), got->rows.end(), pair.destination.rows.begin())) {
      return false;
    }
  }
  return true;
}

std::optional<Query> brute_force(const Query& shape, const ProblemSpec& problem, std::size_t max_leaves) {
  const Table& schema = problem.pairs.front().source;
  std::vector<const Row*> rows;
  for (const TablePair& p : problem.pairs) {
    for (const Row& r : p.source.rows) rows.push_back(&r);
  }
  if (rows.size() > 64) return std::nullopt;

  struct Leaf {
    Comparison cmp;
    std::uint64_t mask;
  };
  std::vector<Leaf> leaves;
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    std::set<Value> values;
    for (const Row* r : rows) values.insert((*r)[c]);
    const bool is_int = schema.columns[c].type == ColumnType::Int;
    std::vector<Value> candidates(values.begin(), values.end());
    if (is_int) {
      if (values.empty()) {
        candidates.push_back(std::int64_t{0});
      } else {
        candidates.push_back(std::get<std::int64_t>(*values.begin()) - 1);
        candidates.push_back(std::get<std::int64_t>(*values.rbegin()) + 1);
      }
    } else {
      candidates.push_back(std::string("\x7f" "absent"));
    }
    std::vector<CmpOp> ops = {CmpOp::Eq, CmpOp::Ne};
    if (is_int) ops = {CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge};
    for (const Value& v : candidates) {
      for (CmpOp op : ops) {
        std::uint64_t mask = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (holds((*rows[i])[c], op, v)) mask |= std::uint64_t{1} << i;
        }
        Operand rhs = is_int ? Operand::int_literal(std::get<std::int64_t>(v))
                             : Operand::str_literal(std::get<std::string>(v));
        leaves.push_back({{Operand::column(schema.columns[c].name), op, rhs}, mask});
      }
    }
  }

  // Smallest AND-group per mask, then smallest OR of groups per mask.
  using Group = std::vector<Comparison>;
  std::map<std::uint64_t, Group> groups;
  for (const Leaf& l : leaves) groups.emplace(l.mask, Group{l.cmp});
  for (bool grew = true; grew;) {
    grew = false;
    const auto snapshot = groups;
    for (const auto& [mask, g] : snapshot) {
      if (g.size() >= max_leaves) continue;
      for (const Leaf& l : leaves) {
        Group bigger = g;
        bigger.push_back(l.cmp);
        const auto [it, inserted] = groups.emplace(mask & l.mask, bigger);
        if (inserted) grew = true;
      }
    }
  }
  using Disjunction = std::vector<Group>;
  auto size_of = [](const Disjunction& d) {
    std::size_t n = 0;
    for (const Group& g : d) n += g.size();
    return n;
  };
  std::map<std::uint64_t, Disjunction> preds;
  for (const auto& [mask, g] : groups) preds.emplace(mask, Disjunction{g});
  for (bool grew = true; grew;) {
    grew = false;
    const auto snapshot = preds;
    for (const auto& [mask, d] : snapshot) {
      for (const auto& [gmask, g] : groups) {
        if (size_of(d) + g.size() > max_leaves) continue;
        Disjunction bigger = d;
        bigger.push_back(g);
        auto it = preds.find(mask | gmask);
        if (it == preds.end() || size_of(it->second) > size_of(bigger)) {
          preds[mask | gmask] = std::move(bigger);
          grew = true;
        }
      }
    }
  }

  Query candidate = shape;
  candidate.lenient.clear();
  candidate.where.reset();
  if (solves(candidate, problem)) return candidate;
  for (const auto& [mask, d] : preds) {
    Predicate p;
    for (std::size_t gi = 0; gi < d.size(); ++gi) {
      for (std::size_t li = 0; li < d[gi].size(); ++li) {
        if (!p.leaves.empty()) p.connectors.push_back(li == 0 ? BoolOp::Or : BoolOp::And);
        p.leaves.push_back(d[gi][li]);
      }
    }
    candidate.where = std::move(p);
    if (solves(candidate, problem)) return candidate;
  }
  return std::nullopt;
}

namespace {

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Value random_value(std::mt19937_64& rng, ColumnType type) {
  if (type == ColumnType::Int) return std::int64_t{std::uniform_int_distribution<int>(0, 9)(rng)};
  return std::string(1, static_cast<char>('a' + std::uniform_int_distribution<int>(0, 4)(rng)));
}

Operand literal(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return Operand::int_literal(*i);
  return Operand::str_literal(std::get<std::string>(v));
}

Comparison random_leaf(std::mt19937_64& rng, const Table& schema) {
  const Column& col = pick(rng, schema.columns);
  std::vector<CmpOp> ops = {CmpOp::Eq, CmpOp::Ne};
  if (col.type == ColumnType::Int) ops = {CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge};
  Comparison c{Operand::column(col.name), pick(rng, ops), literal(random_value(rng, col.type))};
  if (chance(rng, 0.1)) {
    std::vector<std::string> same;
    for (const Column& other : schema.columns) {
      if (other.type == col.type) same.push_back(other.name);
    }
    c.rhs = Operand::column(pick(rng, same));
  }
  if (chance(rng, 0.1)) std::swap(c.lhs, c.rhs), c.op = flipped(c.op);
  return c;
}

}  // namespace

Query random_query(std::mt19937_64& rng, const Table& schema) {
  Query q;
  q.table = schema.name;
  q.distinct = chance(rng, 0.25);
  if (chance(rng, 0.25)) {
    q.select.star = true;
  } else {
    std::vector<std::size_t> order(schema.columns.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, order.size())(rng);
    for (std::size_t i = 0; i < n; ++i) {
      SelectItem item{schema.columns[order[i]].name, std::nullopt};
      if (chance(rng, 0.1)) item.alias = "out" + std::to_string(i);
      q.select.items.push_back(std::move(item));
    }
  }
  if (chance(rng, 0.8)) {
    Predicate p;
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) p.connectors.push_back(chance(rng, 0.6) ? BoolOp::And : BoolOp::Or);
      p.leaves.push_back(random_leaf(rng, schema));
    }
    q.where = std::move(p);
  }
  if (chance(rng, 0.25)) {
    q.order_by = OrderBy{pick(rng, schema.columns).name, chance(rng, 0.5) ? Direction::Asc : Direction::Desc};
  }
  return q;
}

RandomCase random_case(std::mt19937_64& rng) {
  Table schema{"t", {}, {}};
  const std::size_t ncols = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
  std::vector<std::vector<Value>> pools;
  for (std::size_t c = 0; c < ncols; ++c) {
    const ColumnType type = chance(rng, 0.5) ? ColumnType::Int : ColumnType::Str;
    schema.columns.push_back({"c" + std::to_string(c), type});
    std::vector<Value> pool;
    while (pool.size() < 3) {
      Value v = random_value(rng, type);
      if (std::find(pool.begin(), pool.end(), v) == pool.end()) pool.push_back(v);
    }
    pools.push_back(std::move(pool));
  }

  RandomCase rc;
  rc.gold = random_query(rng, schema);
  rc.problem.id = "random";
  const std::size_t npairs = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
  for (std::size_t p = 0; p < npairs; ++p) {
    Table source = schema;
    const std::size_t nrows = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    for (std::size_t r = 0; r < nrows; ++r) {
      Row row;
      for (std::size_t c = 0; c < ncols; ++c) row.push_back(pick(rng, pools[c]));
      source.rows.push_back(std::move(row));
    }
    auto destination = run(rc.gold, source);
    rc.problem.pairs.push_back({source, *destination, rc.gold.order_by.has_value()});
  }

  rc.mutated = rc.gold;
  const int mutations = std::uniform_int_distribution<int>(1, 2)(rng);
  for (int m = 0; m < mutations; ++m) {
    Query& q = rc.mutated;
    if (!q.where) {
      q.where = Predicate{{random_leaf(rng, schema)}, {}};
      continue;
    }
    Predicate& p = *q.where;
    const std::size_t i = std::uniform_int_distribution<std::size_t>(0, p.leaves.size() - 1)(rng);
    Comparison& leaf = p.leaves[i];
    switch (std::uniform_int_distribution<int>(0, 6)(rng)) {
      case 0:
        if (leaf.rhs.is_constant()) leaf.rhs = literal(random_value(rng, leaf.rhs.kind == OperandKind::IntLiteral
                                                                              ? ColumnType::Int
                                                                              : ColumnType::Str));
        break;
      case 1: leaf.op = static_cast<CmpOp>(std::uniform_int_distribution<int>(0, 5)(rng)); break;
      case 2: leaf = random_leaf(rng, schema); break;
      case 3:
        if (!p.connectors.empty()) {
          BoolOp& b = p.connectors[std::uniform_int_distribution<std::size_t>(0, p.connectors.size() - 1)(rng)];
          b = b == BoolOp::And ? BoolOp::Or : BoolOp::And;
        }
        break;
      case 4:
        if (p.leaves.size() > 1) {
          p.leaves.erase(p.leaves.begin() + static_cast<std::ptrdiff_t>(i));
          p.connectors.erase(p.connectors.begin() + static_cast<std::ptrdiff_t>(i == 0 ? 0 : i - 1));
        }
        break;
      case 5:
        p.connectors.push_back(chance(rng, 0.5) ? BoolOp::And : BoolOp::Or);
        p.leaves.push_back(random_leaf(rng, schema));
        break;
      default: q.where.reset(); break;
    }
  }
  return rc;
}

}  // namespace reference
