#include "itest/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "itest/error.hpp"

namespace itest::lex {

namespace {

bool is_ident_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c >= 0x80;
}

bool is_ident_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c >= 0x80;
}

bool is_string_prefix(std::string_view word) {
  if (word.empty() || word.size() > 2) return false;
  std::string lower;
  for (char c : word) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  static constexpr std::array<std::string_view, 8> prefixes = {
      "r", "u", "b", "f", "br", "rb", "fr", "rf"};
  return std::find(prefixes.begin(), prefixes.end(), lower) != prefixes.end();
}

constexpr std::array<std::string_view, 4> kThreeCharOps = {"**=", "//=", ">>=", "<<="};
constexpr std::array<std::string_view, 20> kTwoCharOps = {
    "**", "//", ">>", "<<", "<=", ">=", "==", "!=", "->", "+=",
    "-=", "*=", "/=", "%=", "&=", "|=", "^=", "@=", ":=", "<>"};

class Lexer {
 public:
  Lexer(std::string_view src, int first_line) : src_(src), line_(first_line) {}

  std::vector<Token> run() {
    while (pos_ < src_.size()) step();
    if (!brackets_.empty()) {
      throw Error(ErrorKind::UnbalancedDelimiter, brackets_.back().line,
                  std::string("unclosed '") + brackets_.back().open + "'");
    }
    if (!at_logical_start()) push(TokenKind::Newline, src_.size(), src_.size(), line_);
    push(TokenKind::EndMarker, src_.size(), src_.size(), line_);
    return std::move(tokens_);
  }

 private:
  struct Open {
    char open;
    int line;
  };

  void push(TokenKind kind, std::size_t b, std::size_t e, int line) {
    tokens_.push_back(Token{kind, b, e, line});
  }

  // True when no significant token has been emitted since the last Newline.
  bool at_logical_start() const {
    for (auto it = tokens_.rbegin(); it != tokens_.rend(); ++it) {
      if (it->kind == TokenKind::Comment) continue;
      return it->kind == TokenKind::Newline;
    }
    return true;
  }

  std::size_t newline_width(std::size_t at) const {
    if (at >= src_.size()) return 0;
    if (src_[at] == '\n') return 1;
    if (src_[at] == '\r' && at + 1 < src_.size() && src_[at + 1] == '\n') return 2;
    return 0;
  }

  void step() {
    const char c = src_[pos_];
    if (const std::size_t nl = newline_width(pos_); nl > 0) {
      if (brackets_.empty()) {
        push(TokenKind::Newline, pos_, pos_ + nl, line_);
      }
      pos_ += nl;
      ++line_;
      return;
    }
    if (c == ' ' || c == '\t' || c == '\f' || c == '\r') {
      ++pos_;
      return;
    }
    if (c == '#') {
      std::size_t e = pos_;
      while (e < src_.size() && newline_width(e) == 0) ++e;
      push(TokenKind::Comment, pos_, e, line_);
      pos_ = e;
      return;
    }
    if (c == '\\') {
      if (const std::size_t nl = newline_width(pos_ + 1); nl > 0) {
        pos_ += 1 + nl;
        ++line_;
        return;
      }
      push(TokenKind::Op, pos_, pos_ + 1, line_);
      ++pos_;
      return;
    }
    if (c == '"' || c == '\'') {
      lex_string(pos_, pos_);
      return;
    }
    const auto uc = static_cast<unsigned char>(c);
    if (is_ident_start(uc)) {
      std::size_t e = pos_;
      while (e < src_.size() && is_ident_char(static_cast<unsigned char>(src_[e]))) ++e;
      if (e < src_.size() && (src_[e] == '"' || src_[e] == '\'') &&
          is_string_prefix(src_.substr(pos_, e - pos_))) {
        lex_string(pos_, e);
        return;
      }
      push(TokenKind::Name, pos_, e, line_);
      pos_ = e;
      return;
    }
    if (std::isdigit(uc) ||
        (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      lex_number();
      return;
    }
    lex_op();
  }

  void lex_number() {
    std::size_t e = pos_;
    const bool radix = src_[pos_] == '0' && pos_ + 1 < src_.size() &&
                       std::string_view("xXoObB").find(src_[pos_ + 1]) != std::string_view::npos;
    while (e < src_.size()) {
      const char d = src_[e];
      if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '.') {
        ++e;
        continue;
      }
      if (!radix && (d == '+' || d == '-') && (src_[e - 1] == 'e' || src_[e - 1] == 'E')) {
        ++e;
        continue;
      }
      break;
    }
    push(TokenKind::Number, pos_, e, line_);
    pos_ = e;
  }

  // `start` is where the token begins (prefix included), `quote_at` the
  // opening quote.
  void lex_string(std::size_t start, std::size_t quote_at) {
    const char q = src_[quote_at];
    const int start_line = line_;
    const bool triple = quote_at + 2 < src_.size() && src_[quote_at + 1] == q && src_[quote_at + 2] == q;
    std::size_t i = quote_at + (triple ? 3 : 1);
    while (true) {
      if (i >= src_.size()) {
        throw Error(ErrorKind::UnbalancedDelimiter, start_line, "unterminated string literal");
      }
      const char d = src_[i];
      if (d == '\\') {
        if (const std::size_t nl = newline_width(i + 1); nl > 0) {
          i += 1 + nl;
          ++line_;
        } else {
          i += 2;
        }
        continue;
      }
      if (const std::size_t nl = newline_width(i); nl > 0) {
        if (!triple) {
          throw Error(ErrorKind::UnbalancedDelimiter, start_line, "unterminated string literal");
        }
        i += nl;
        ++line_;
        continue;
      }
      if (d == q) {
        if (!triple) {
          ++i;
          break;
        }
        if (i + 2 < src_.size() && src_[i + 1] == q && src_[i + 2] == q) {
          i += 3;
          break;
        }
      }
      ++i;
    }
    push(TokenKind::String, start, i, start_line);
    pos_ = i;
  }

  void lex_op() {
    for (auto op : kThreeCharOps) {
      if (src_.substr(pos_, 3) == op) return emit_op(3);
    }
    if (src_.substr(pos_, 3) == "...") return emit_op(3);
    for (auto op : kTwoCharOps) {
      if (src_.substr(pos_, 2) == op) return emit_op(2);
    }
    const char c = src_[pos_];
    if (c == '(' || c == '[' || c == '{') {
      brackets_.push_back(Open{c, line_});
    } else if (c == ')' || c == ']' || c == '}') {
      const char want = c == ')' ? '(' : c == ']' ? '[' : '{';
      if (brackets_.empty() || brackets_.back().open != want) {
        throw Error(ErrorKind::UnbalancedDelimiter, line_, std::string("unexpected '") + c + "'");
      }
      brackets_.pop_back();
    }
    emit_op(1);
  }

  void emit_op(std::size_t width) {
    push(TokenKind::Op, pos_, pos_ + width, line_);
    pos_ += width;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_;
  std::vector<Open> brackets_;
  std::vector<Token> tokens_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view src, int first_line) {
  return Lexer(src, first_line).run();
}

std::vector<Token> significant_tokens(std::string_view src, int first_line) {
  auto all = tokenize(src, first_line);
  std::erase_if(all, [](const Token& t) {
    return t.kind == TokenKind::Comment || t.kind == TokenKind::Newline ||
           t.kind == TokenKind::EndMarker;
  });
  return all;
}

bool is_name(const Token& tok, std::string_view src, std::string_view word) {
  return tok.kind == TokenKind::Name && tok.text(src) == word;
}

bool is_op(const Token& tok, std::string_view src, std::string_view op) {
  return tok.kind == TokenKind::Op && tok.text(src) == op;
}

bool decode_string_literal(std::string_view literal, std::string& out) {
  std::size_t q = 0;
  bool raw = false;
  while (q < literal.size() && literal[q] != '"' && literal[q] != '\'') {
    const char p = static_cast<char>(std::tolower(static_cast<unsigned char>(literal[q])));
    if (p == 'r') {
      raw = true;
    } else if (p != 'u') {
      return false;  // bytes and f-strings are not plain strings
    }
    ++q;
  }
  if (q >= literal.size()) return false;
  const char quote_char = literal[q];
  const bool triple = literal.size() >= q + 6 && literal.substr(q, 3) == std::string(3, quote_char);
  const std::size_t width = triple ? 3 : 1;
  if (literal.size() < q + 2 * width) return false;
  std::string_view body = literal.substr(q + width, literal.size() - q - 2 * width);

  out.clear();
  for (std::size_t i = 0; i < body.size(); ++i) {
    const char c = body[i];
    if (c != '\\' || raw || i + 1 >= body.size()) {
      out.push_back(c);
      continue;
    }
    const char e = body[++i];
    switch (e) {
      case 'n': out.push_back('\n'); break;
      case 't': out.push_back('\t'); break;
      case 'r': out.push_back('\r'); break;
      case '0': out.push_back('\0'); break;
      case '\\': out.push_back('\\'); break;
      case '\'': out.push_back('\''); break;
      case '"': out.push_back('"'); break;
      case '\n': break;
      default:
        out.push_back('\\');
        out.push_back(e);
    }
  }
  return true;
}

std::string quote(std::string_view value) {
  std::string out = "'";
  for (const char c : value) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\'': out += "\\'"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          static constexpr char hex[] = "0123456789abcdef";
          out += "\\x";
          out.push_back(hex[(c >> 4) & 0xf]);
          out.push_back(hex[c & 0xf]);
        } else {
          out.push_back(c);
        }
    }
  }
  out += "'";
  return out;
}

}  // namespace itest::lex
