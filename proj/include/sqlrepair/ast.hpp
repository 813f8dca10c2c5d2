#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sqlrepair {

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };
enum class BoolOp { And, Or };
enum class Direction { Asc, Desc };

std::string_view to_string(CmpOp op);
std::string_view to_string(BoolOp op);

/// Mirror of a comparison for swapping its operands (`5 < a` is `a > 5`).
CmpOp flipped(CmpOp op);

enum class OperandKind { ColumnRef, IntLiteral, StrLiteral, BareToken };

struct Operand {
  OperandKind kind = OperandKind::ColumnRef;
  /// Column name, string literal contents or the bare word, depending on kind.
  std::string text;
  std::int64_t integer = 0;

  static Operand column(std::string name);
  static Operand int_literal(std::int64_t value);
  static Operand str_literal(std::string value);
  static Operand bare(std::string word);

  bool is_column() const { return kind == OperandKind::ColumnRef; }
  bool is_constant() const {
    return kind == OperandKind::IntLiteral || kind == OperandKind::StrLiteral;
  }

  friend bool operator==(const Operand&, const Operand&) = default;
};

struct Comparison {
  Operand lhs;
  CmpOp op = CmpOp::Eq;
  Operand rhs;

  friend bool operator==(const Comparison&, const Comparison&) = default;
};

/// Flat predicate: `leaves[0] connectors[0] leaves[1] ...`. AND binds tighter than OR.
struct Predicate {
  std::vector<Comparison> leaves;
  std::vector<BoolOp> connectors;

  friend bool operator==(const Predicate&, const Predicate&) = default;
};

struct SelectItem {
  std::string column;
  std::optional<std::string> alias;

  const std::string& output_name() const { return alias ? *alias : column; }

  friend bool operator==(const SelectItem&, const SelectItem&) = default;
};

/// Either `*` (items empty) or a non-empty column list.
struct SelectList {
  bool star = false;
  std::vector<SelectItem> items;

  friend bool operator==(const SelectList&, const SelectList&) = default;
};

struct OrderBy {
  std::string column;
  Direction direction = Direction::Asc;

  friend bool operator==(const OrderBy&, const OrderBy&) = default;
};

enum class LenientKind { DoubleEq, AmpAmp, PipePipe, DoubleQuotedString, BareToken };

std::string_view to_string(LenientKind kind);

/// A non-standard token the lenient parser accepted. `position` is the token index.
struct LenientToken {
  LenientKind kind = LenientKind::DoubleEq;
  std::size_t position = 0;
  std::string text;

  friend bool operator==(const LenientToken&, const LenientToken&) = default;
};

struct Query {
  bool distinct = false;
  SelectList select;
  std::string table;
  std::optional<Predicate> where;
  std::optional<OrderBy> order_by;
  std::vector<LenientToken> lenient;

  bool strict() const { return lenient.empty(); }
  std::size_t leaf_count() const { return where ? where->leaves.size() : 0; }

  friend bool operator==(const Query&, const Query&) = default;
};

struct ParseFailure {
  std::string message;
  std::string token;
  std::size_t position = 0;  // token index
  std::size_t offset = 0;    // byte offset into the input

  friend bool operator==(const ParseFailure&, const ParseFailure&) = default;
};

using ParseResult = std::variant<Query, ParseFailure>;

inline bool parsed(const ParseResult& r) { return std::holds_alternative<Query>(r); }

/// Parses the supported subset, accepting C/Java-style operators, double-quoted
/// strings and unquoted words in operand position (recorded in `Query::lenient`).
///
/// With `known_columns`, any identifier operand naming a known column is a column
/// reference. Otherwise the first identifier operand of a comparison is a column
/// reference and a second one is a bare token, except that an unknown word on the
/// left of a known column is a bare token too.
ParseResult parse_lenient(std::string_view text,
                          std::span<const std::string> known_columns = {});

/// Same grammar without the lenient extensions.
ParseResult parse_strict(std::string_view text,
                         std::span<const std::string> known_columns = {});

class RenderError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Canonical text. Throws RenderError for queries that still carry lenient tokens.
std::string print(const Query& query);

std::string print(const Comparison& leaf);
std::string print(const Operand& operand);

}  // namespace sqlrepair
