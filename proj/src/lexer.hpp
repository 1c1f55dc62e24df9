#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fdc/diagnostic.hpp"

namespace fdc::dsl {

enum class TokenKind { Ident, Handle, String, Integer, Punct, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;  // identifier / handle name / decoded string / punctuation
  std::int64_t integer = 0;
  SourcePos pos;

  bool is(std::string_view punct) const { return kind == TokenKind::Punct && text == punct; }
  bool is_word(std::string_view word) const { return kind == TokenKind::Ident && text == word; }
};

/// Always ends with an End token. The End token sits on the last character of
/// the source (1:1 for empty input) so every position stays inside the text.
std::vector<Token> tokenize(std::string_view source, std::vector<Diagnostic>& diags);

std::string describe(const Token& t);

}  // namespace fdc::dsl
