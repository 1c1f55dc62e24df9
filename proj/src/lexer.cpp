#include "lexer.hpp"

#include <cctype>
#include <limits>
#include <stdexcept>

namespace fdc::dsl {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Lexer {
 public:
  Lexer(std::string_view src, std::vector<Diagnostic>& diags) : src_(src), diags_(diags) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_blank();
      if (at_end()) break;
      const SourcePos start = pos();
      const char c = peek();
      if (ident_start(c)) {
        out.push_back(Token{TokenKind::Ident, read_word(), 0, start});
      } else if (c == '@' && ident_start(peek(1))) {
        advance();
        out.push_back(Token{TokenKind::Handle, read_word(), 0, start});
      } else if (digit(c) || (c == '-' && digit(peek(1)))) {
        out.push_back(read_integer(start));
      } else if (c == '"') {
        out.push_back(read_string(start));
      } else if (c == '-' && peek(1) == '>') {
        advance();
        advance();
        out.push_back(Token{TokenKind::Punct, "->", 0, start});
      } else if (std::string_view("{}();:?.=,").find(c) != std::string_view::npos) {
        advance();
        out.push_back(Token{TokenKind::Punct, std::string(1, c), 0, start});
      } else {
        diags_.push_back(error(start, DiagCode::UnexpectedCharacter,
                               std::string("unexpected character '") + c + "'"));
        advance();
      }
    }
    out.push_back(Token{TokenKind::End, "", 0, end_pos()});
    return out;
  }

 private:
  bool at_end() const { return i_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const { return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0'; }
  SourcePos pos() const { return SourcePos{line_, col_}; }

  void advance() {
    if (src_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  SourcePos end_pos() const {
    if (src_.empty()) return SourcePos{1, 1};
    // position of the last character
    int line = 1;
    int col = 1;
    for (std::size_t k = 0; k + 1 < src_.size(); ++k) {
      if (src_[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return SourcePos{line, col};
  }

  void skip_blank() {
    while (!at_end()) {
      if (std::isspace(static_cast<unsigned char>(peek()))) {
        advance();
      } else if (peek() == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string read_word() {
    std::string w;
    while (!at_end() && ident_char(peek())) {
      w += peek();
      advance();
    }
    return w;
  }

  Token read_integer(SourcePos start) {
    std::string digits;
    if (peek() == '-') {
      digits += '-';
      advance();
    }
    while (!at_end() && digit(peek())) {
      digits += peek();
      advance();
    }
    Token t{TokenKind::Integer, digits, 0, start};
    try {
      t.integer = std::stoll(digits);
    } catch (const std::out_of_range&) {
      diags_.push_back(error(start, DiagCode::IntegerOverflow, "integer literal out of range: " + digits));
    }
    return t;
  }

  Token read_string(SourcePos start) {
    advance();  // opening quote
    std::string value;
    while (true) {
      if (at_end() || peek() == '\n') {
        diags_.push_back(error(start, DiagCode::UnterminatedString, "unterminated string literal"));
        break;
      }
      const char c = peek();
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\') {
        const SourcePos esc = pos();
        advance();
        const char e = at_end() ? '\0' : peek();
        switch (e) {
          case '"': value += '"'; break;
          case '\\': value += '\\'; break;
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          default:
            diags_.push_back(error(esc, DiagCode::InvalidEscape, std::string("invalid escape '\\") + e + "'"));
        }
        if (!at_end() && e != '\n') advance();
        continue;
      }
      value += c;
      advance();
    }
    return Token{TokenKind::String, value, 0, start};
  }

  std::string_view src_;
  std::vector<Diagnostic>& diags_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source, std::vector<Diagnostic>& diags) {
  return Lexer(source, diags).run();
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::Ident: return "'" + t.text + "'";
    case TokenKind::Handle: return "'@" + t.text + "'";
    case TokenKind::String: return "string literal";
    case TokenKind::Integer: return "integer " + t.text;
    case TokenKind::Punct: return "'" + t.text + "'";
    case TokenKind::End: return "end of input";
  }
  return "?";
}

}  // namespace fdc::dsl
