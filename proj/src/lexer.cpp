#include "sqlrepair/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace sqlrepair {

namespace {

constexpr std::array<std::string_view, 30> kKeywords = {
    "SELECT", "DISTINCT", "FROM",  "WHERE", "AND",    "OR",      "ORDER", "BY",
    "ASC",    "DESC",     "AS",    "GROUP", "HAVING", "JOIN",    "INNER", "LEFT",
    "RIGHT",  "OUTER",    "ON",    "LIMIT", "BETWEEN", "LIKE",   "IN",    "NOT",
    "IS",     "NULL",     "UNION", "COUNT", "OFFSET", "ALL",
};

// Longest first so that "<=" wins over "<".
constexpr std::array<std::string_view, 18> kSymbols = {
    "==", "!=", "<>", "<=", ">=", "&&", "||", "=", "<", ">",
    ",",  "*",  ";",  ".",  "(",  ")",  "-",  "+",
};

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

}  // namespace

std::string to_upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_keyword(std::string_view word) {
  const std::string up = to_upper(word);
  return std::find(kKeywords.begin(), kKeywords.end(), up) != kKeywords.end();
}

bool Token::is_word(std::string_view upper_word) const {
  return kind == TokenKind::Word && to_upper(text) == upper_word;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();

  while (i < n) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      ++i;
      continue;
    }
    const std::size_t start = i;

    if (word_char(c)) {
      while (i < n && word_char(text[i])) ++i;
      std::string lexeme(text.substr(start, i - start));
      const bool digits = std::all_of(lexeme.begin(), lexeme.end(),
                                      [](unsigned char d) { return std::isdigit(d) != 0; });
      tokens.push_back({digits ? TokenKind::Integer : TokenKind::Word, lexeme, lexeme, start});
      continue;
    }

    if (c == '\'' || c == '"') {
      // Doubling the quote character escapes it.
      std::string value;
      ++i;
      bool closed = false;
      while (i < n) {
        if (text[i] == c) {
          if (i + 1 < n && text[i + 1] == c) {
            value.push_back(c);
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        value.push_back(text[i++]);
      }
      std::string lexeme(text.substr(start, i - start));
      if (!closed) {
        tokens.push_back({TokenKind::Unknown, lexeme, value, start});
      } else {
        tokens.push_back({c == '\'' ? TokenKind::SingleQuoted : TokenKind::DoubleQuoted,
                          lexeme, value, start});
      }
      continue;
    }

    bool matched = false;
    for (std::string_view sym : kSymbols) {
      if (text.substr(i, sym.size()) == sym) {
        tokens.push_back({TokenKind::Symbol, std::string(sym), std::string(sym), start});
        i += sym.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;

    // Swallow a whole UTF-8 sequence so that multi-byte characters stay intact.
    ++i;
    while (i < n && (static_cast<unsigned char>(text[i]) & 0xC0) == 0x80) ++i;
    std::string lexeme(text.substr(start, i - start));
    tokens.push_back({TokenKind::Unknown, lexeme, lexeme, start});
  }

  tokens.push_back({TokenKind::End, "", "", n});
  return tokens;
}

}  // namespace sqlrepair
