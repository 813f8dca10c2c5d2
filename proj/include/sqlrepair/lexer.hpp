#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sqlrepair {

enum class TokenKind {
  Word,          // identifier or keyword
  Integer,       // run of digits
  SingleQuoted,  // 'text'
  DoubleQuoted,  // "text"
  Symbol,        // operators and punctuation
  Unknown,       // unrecognised byte(s) or an unterminated string
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;   // lexeme as written
  std::string value;  // unquoted contents for string tokens, else == text
  std::size_t offset = 0;

  bool is_symbol(std::string_view s) const { return kind == TokenKind::Symbol && text == s; }
  /// Case-insensitive keyword test.
  bool is_word(std::string_view upper_word) const;
};

/// Never fails: anything unrecognised becomes a TokenKind::Unknown token.
/// The result always ends with a single End token.
std::vector<Token> tokenize(std::string_view text);

std::string to_upper(std::string_view s);
std::string to_lower(std::string_view s);

/// Reserved words, including unsupported ones (GROUP, JOIN, LIMIT, ...).
bool is_keyword(std::string_view word);

}  // namespace sqlrepair
