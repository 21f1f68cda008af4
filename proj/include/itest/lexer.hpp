#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace itest::lex {

enum class TokenKind {
  Name,
  Number,
  String,
  Op,
  Comment,
  // End of a logical line. Spans the terminator ("\n" or "\r\n"); empty
  // when the input ends without one.
  Newline,
  EndMarker,
};

struct Token {
  TokenKind kind;
  std::size_t begin;  // byte offsets into the tokenized text
  std::size_t end;
  int line;           // 1-based line of `begin`

  std::string_view text(std::string_view src) const {
    return src.substr(begin, end - begin);
  }
};

// Tokenizes Python source at the lexical level: names, numbers, string
// literals (all prefixes, triple quotes), operators, comments and logical
// line ends. Newlines inside brackets and after a backslash continuation do
// not produce Newline tokens. Throws itest::Error(UnbalancedDelimiter) for
// unterminated strings or unbalanced brackets.
//
// `first_line` offsets the reported line numbers, so fragments cut out of a
// larger file keep their original positions.
std::vector<Token> tokenize(std::string_view src, int first_line = 1);

// Same as tokenize() but drops Comment, Newline and EndMarker tokens, which
// is what expression-level consumers want.
std::vector<Token> significant_tokens(std::string_view src, int first_line = 1);

bool is_name(const Token& tok, std::string_view src, std::string_view word);
bool is_op(const Token& tok, std::string_view src, std::string_view op);

// Decodes a plain (non-f, non-bytes) Python string literal. Returns false if
// `literal` is not one.
bool decode_string_literal(std::string_view literal, std::string& out);

// Python string literal for `value`, usable inside generated programs.
std::string quote(std::string_view value);

}  // namespace itest::lex
