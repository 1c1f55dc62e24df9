#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <vector>

#include "fdc/codegen.hpp"

namespace fdc::codegen {

namespace {

constexpr std::array<std::string_view, 42> kKeywords = {
    "SELECT", "FROM",   "WHERE", "AS",     "ON",      "RIGHT",  "LEFT",   "INNER", "JOIN",   "ORDER", "BY",
    "GROUP",  "IN",     "AND",   "OR",     "NOT",     "NULL",   "IS",     "IF",    "THEN",   "ELSE",  "END",
    "SUB",    "DIM",    "EXISTS", "CREATE", "TRIGGER", "BEFORE", "AFTER", "UPDATE", "INSERT", "DELETE", "OF",
    "FOR",    "EACH",   "ROW",   "WHEN",   "BEGIN",   "RAISE",  "ABORT",  "SET",   "DISTINCT"};

bool word_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

// A lone '_' followed (after blanks and stripped brackets) by a newline is a
// line continuation.
bool continuation(std::string_view body, std::size_t after) {
  while (after < body.size()) {
    const auto c = static_cast<unsigned char>(body[after]);
    if (c == '\n' || !(std::isspace(c) || c == '[' || c == ']')) break;
    ++after;
  }
  return after >= body.size() || body[after] == '\n';
}

}  // namespace

std::string normalize_text(std::string_view body) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < body.size()) {
    const auto c = static_cast<unsigned char>(body[i]);
    if (std::isspace(c) || c == '[' || c == ']') {
      ++i;
      continue;
    }
    if (c == '"' || c == '\'') {
      // string literal; a doubled quote is an escaped quote
      std::size_t j = i + 1;
      while (j < body.size()) {
        if (body[j] == static_cast<char>(c)) {
          if (j + 1 < body.size() && body[j + 1] == static_cast<char>(c)) {
            j += 2;
            continue;
          }
          break;
        }
        ++j;
      }
      const std::size_t end = std::min(j + 1, body.size());
      tokens.emplace_back(body.substr(i, end - i));
      i = end;
      continue;
    }
    if (word_char(c)) {
      std::size_t j = i;
      while (j < body.size() && word_char(static_cast<unsigned char>(body[j]))) ++j;
      std::string word(body.substr(i, j - i));
      i = j;
      if (word == "_" && continuation(body, i)) continue;
      const std::string up = upper(word);
      if (std::find(kKeywords.begin(), kKeywords.end(), up) != kKeywords.end()) word = up;
      tokens.push_back(std::move(word));
      continue;
    }
    static constexpr std::array<std::string_view, 5> kPairs = {"<>", "<=", ">=", "!=", "||"};
    const std::string_view two = body.substr(i, 2);
    if (std::find(kPairs.begin(), kPairs.end(), two) != kPairs.end()) {
      tokens.emplace_back(two);
      i += 2;
      continue;
    }
    tokens.emplace_back(1, static_cast<char>(c));
    ++i;
  }
  std::string out;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (k > 0) out += ' ';
    out += tokens[k];
  }
  return out;
}

}  // namespace fdc::codegen
