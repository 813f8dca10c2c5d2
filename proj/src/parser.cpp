#include <algorithm>
#include <array>
#include <charconv>
#include <limits>
#include <utility>

#include "sqlrepair/ast.hpp"
#include "sqlrepair/lexer.hpp"

namespace sqlrepair {

namespace {

struct Abort {
  ParseFailure failure;
};

constexpr std::array<std::string_view, 8> kClauseWords = {
    "SELECT", "DISTINCT", "FROM", "WHERE", "ORDER", "BY", "AND", "OR",
};

// `hotelORDER` style words: a clause keyword stuck to the end of an identifier.
bool glued_keyword(std::string_view word) {
  const std::string up = to_upper(word);
  return std::any_of(kClauseWords.begin(), kClauseWords.end(), [&](std::string_view kw) {
    return up.size() > kw.size() && up.compare(up.size() - kw.size(), kw.size(), kw) == 0;
  });
}

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> known, bool strict)
      : tokens_(tokenize(text)), known_(known), strict_(strict) {}

  ParseResult run() {
    try {
      Query q = query();
      std::sort(q.lenient.begin(), q.lenient.end(),
                [](const LenientToken& a, const LenientToken& b) { return a.position < b.position; });
      return q;
    } catch (const Abort& abort) {
      return abort.failure;
    }
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& advance() {
    const Token& t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }

  [[noreturn]] void fail(std::string message) const {
    std::size_t at = pos_;
    if (pos_ > 0) {
      const Token& prev = tokens_[pos_ - 1];
      if (prev.kind == TokenKind::Word && !is_keyword(prev.text) && glued_keyword(prev.text)) {
        at = pos_ - 1;
        message = "keyword run together with identifier '" + prev.text + "'";
      }
    }
    const Token& t = tokens_[at];
    throw Abort{ParseFailure{std::move(message), t.kind == TokenKind::End ? "<end>" : t.text, at,
                             t.offset}};
  }

  void expect_word(std::string_view kw) {
    if (!peek().is_word(kw)) fail("expected " + std::string(kw));
    advance();
  }

  bool is_identifier(const Token& t) const {
    return t.kind == TokenKind::Word && !is_keyword(t.text);
  }

  std::string identifier(std::string_view what) {
    if (!is_identifier(peek())) fail("expected " + std::string(what));
    return advance().text;
  }

  void flag(LenientKind kind, const Token& t) {
    if (strict_) fail("non-standard token '" + t.text + "'");
    lenient_.push_back({kind, pos_ - 1, t.kind == TokenKind::DoubleQuoted ? t.value : t.text});
  }

  Query query() {
    Query q;
    expect_word("SELECT");
    if (peek().is_word("DISTINCT")) {
      advance();
      q.distinct = true;
    }
    q.select = select_list();
    expect_word("FROM");
    q.table = identifier("table name");
    if (peek().is_word("WHERE")) {
      advance();
      q.where = predicate();
    }
    if (peek().is_word("ORDER")) {
      advance();
      expect_word("BY");
      OrderBy order{identifier("column name"), Direction::Asc};
      if (peek().is_word("ASC")) {
        advance();
      } else if (peek().is_word("DESC")) {
        advance();
        order.direction = Direction::Desc;
      }
      q.order_by = std::move(order);
    }
    if (peek().is_symbol(";")) advance();
    if (peek().kind != TokenKind::End) fail("unexpected token");
    q.lenient = std::move(lenient_);
    return q;
  }

  SelectList select_list() {
    SelectList list;
    if (peek().is_symbol("*")) {
      advance();
      list.star = true;
      return list;
    }
    while (true) {
      SelectItem item{identifier("column name"), std::nullopt};
      if (peek().is_word("AS")) {
        advance();
        item.alias = identifier("alias");
      }
      list.items.push_back(std::move(item));
      if (!peek().is_symbol(",")) break;
      advance();
    }
    return list;
  }

  Predicate predicate() {
    Predicate p;
    p.leaves.push_back(comparison());
    while (true) {
      const Token& t = peek();
      if (t.is_word("AND")) {
        advance();
        p.connectors.push_back(BoolOp::And);
      } else if (t.is_word("OR")) {
        advance();
        p.connectors.push_back(BoolOp::Or);
      } else if (t.is_symbol("&&")) {
        advance();
        flag(LenientKind::AmpAmp, t);
        p.connectors.push_back(BoolOp::And);
      } else if (t.is_symbol("||")) {
        advance();
        flag(LenientKind::PipePipe, t);
        p.connectors.push_back(BoolOp::Or);
      } else {
        break;
      }
      p.leaves.push_back(comparison());
    }
    return p;
  }

  Comparison comparison() {
    bool seen_identifier = false;
    Comparison c;
    const std::size_t lhs_pos = pos_;
    c.lhs = operand(seen_identifier);
    c.op = comparison_op();
    c.rhs = operand(seen_identifier);
    // `US = country`: an unknown word facing a known column is the unquoted value.
    if (!known_.empty() && c.lhs.is_column() && !known_column(c.lhs.text) && c.rhs.is_column() &&
        known_column(c.rhs.text)) {
      if (strict_) fail("non-standard token '" + c.lhs.text + "'");
      c.lhs = Operand::bare(c.lhs.text);
      const LenientToken token{LenientKind::BareToken, lhs_pos, c.lhs.text};
      const auto at = std::find_if(lenient_.begin(), lenient_.end(),
                                   [&](const LenientToken& l) { return l.position > lhs_pos; });
      lenient_.insert(at, token);
    }
    return c;
  }

  CmpOp comparison_op() {
    const Token& t = peek();
    if (t.kind != TokenKind::Symbol) fail("expected comparison operator");
    CmpOp op{};
    if (t.text == "=") {
      op = CmpOp::Eq;
    } else if (t.text == "==") {
      op = CmpOp::Eq;
    } else if (t.text == "!=" || t.text == "<>") {
      op = CmpOp::Ne;
    } else if (t.text == "<") {
      op = CmpOp::Lt;
    } else if (t.text == "<=") {
      op = CmpOp::Le;
    } else if (t.text == ">") {
      op = CmpOp::Gt;
    } else if (t.text == ">=") {
      op = CmpOp::Ge;
    } else {
      fail("expected comparison operator");
    }
    advance();
    if (t.text == "==") flag(LenientKind::DoubleEq, t);
    return op;
  }

  bool known_column(std::string_view name) const {
    return std::find(known_.begin(), known_.end(), name) != known_.end();
  }

  Operand operand(bool& seen_identifier) {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Word: {
        if (is_keyword(t.text)) fail("expected operand");
        advance();
        const bool column = known_column(t.text) || !seen_identifier;
        seen_identifier = true;
        if (column) return Operand::column(t.text);
        flag(LenientKind::BareToken, t);
        return Operand::bare(t.text);
      }
      case TokenKind::Integer:
        advance();
        return Operand::int_literal(integer(t.text, false));
      case TokenKind::Symbol:
        if (t.text == "-" && peek(1).kind == TokenKind::Integer) {
          advance();
          return Operand::int_literal(integer(advance().text, true));
        }
        break;
      case TokenKind::SingleQuoted:
        advance();
        return Operand::str_literal(t.value);
      case TokenKind::DoubleQuoted:
        advance();
        flag(LenientKind::DoubleQuotedString, t);
        return Operand::str_literal(t.value);
      default:
        break;
    }
    fail("expected operand");
  }

  std::int64_t integer(const std::string& digits, bool negative) {
    // Parse the magnitude as unsigned so that INT64_MIN is representable.
    std::uint64_t magnitude = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), magnitude);
    const std::uint64_t limit = negative ? std::uint64_t{1} << 63
                                         : static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || magnitude > limit) {
      --pos_;
      fail("integer literal out of range");
    }
    if (!negative) return static_cast<std::int64_t>(magnitude);
    return magnitude == limit ? std::numeric_limits<std::int64_t>::min()
                              : -static_cast<std::int64_t>(magnitude);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::span<const std::string> known_;
  bool strict_;
  std::vector<LenientToken> lenient_;
};

}  // namespace

ParseResult parse_lenient(std::string_view text, std::span<const std::string> known_columns) {
  return Parser(text, known_columns, false).run();
}

ParseResult parse_strict(std::string_view text, std::span<const std::string> known_columns) {
  return Parser(text, known_columns, true).run();
}

}  // namespace sqlrepair
