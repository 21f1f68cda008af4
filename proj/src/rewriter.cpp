#include "itest/rewriter.hpp"

#include <cassert>

#include "itest/extractor.hpp"
#include "itest/lexer.hpp"

namespace itest {

using lex::Token;
using lex::TokenKind;

std::string strip(const SourceUnit& unit) {
  std::string out;
  out.reserve(unit.text.size());
  for (const auto& stmt : unit.statements) {
    out += stmt.trivia;
    if (stmt.kind == StatementKind::InlineTest) continue;
    out += stmt.indent;
    out += stmt.verbatim;
    out += stmt.newline;
  }
  out += unit.trailing_trivia;
  return out;
}

std::string rename_chain(const LogicalStatement& stmt, const std::string& new_name) {
  const std::string_view src = stmt.verbatim;
  const auto toks = lex::significant_tokens(src);
  assert(toks.size() >= 3);
  const std::string literal = lex::quote(new_name);

  // Top-level arguments of Here(...): the name is the first positional
  // string, or the value of test_name=.
  int depth = 0;
  bool at_arg_start = true;
  bool first_arg = true;
  for (std::size_t i = 2; i < toks.size(); ++i) {
    const auto text = toks[i].text(src);
    if (toks[i].kind == TokenKind::Op && (text == "(" || text == "[" || text == "{")) {
      ++depth;
      at_arg_start = false;
      continue;
    }
    if (toks[i].kind == TokenKind::Op && (text == ")" || text == "]" || text == "}")) {
      if (depth == 0) break;  // end of Here(...)
      --depth;
      continue;
    }
    if (depth != 0) continue;
    if (lex::is_op(toks[i], src, ",")) {
      at_arg_start = true;
      first_arg = false;
      continue;
    }
    if (!at_arg_start) continue;
    at_arg_start = false;
    const Token* value = nullptr;
    if (first_arg && toks[i].kind == TokenKind::String) {
      value = &toks[i];
    } else if (lex::is_name(toks[i], src, "test_name") && i + 2 < toks.size() && lex::is_op(toks[i + 1], src, "=")) {
      value = &toks[i + 2];
    }
    if (value) {
      return std::string(src.substr(0, value->begin)) + literal + std::string(src.substr(value->end));
    }
  }

  // No explicit name: insert one as the first argument.
  const std::size_t open_end = toks[1].end;
  const bool empty_call = lex::is_op(toks[2], src, ")");
  return std::string(src.substr(0, open_end)) + "test_name=" + literal + (empty_call ? "" : ", ") +
         std::string(src.substr(open_end));
}

std::string duplicate(const SourceUnit& unit, int k) {
  assert(k >= 1);
  std::string out;
  out.reserve(unit.text.size() * static_cast<std::size_t>(k));
  const std::string newline(unit.newline());
  for (const auto& stmt : unit.statements) {
    out += stmt.trivia;
    if (stmt.kind != StatementKind::InlineTest) {
      out += stmt.indent;
      out += stmt.verbatim;
      out += stmt.newline;
      continue;
    }
    // The base name follows the declaration, so unnamed tests keep their
    // original `<stem>_<line>` identity in every copy.
    std::string base;
    try {
      base = parse_chain(stmt, unit.path).name;
    } catch (const Error&) {
      base = default_test_name(unit.path, stmt.start_line);
    }
    for (int j = 0; j < k; ++j) {
      out += stmt.indent;
      out += rename_chain(stmt, base + "_dup" + std::to_string(j));
      out += (j + 1 < k) ? newline : stmt.newline;
    }
  }
  out += unit.trailing_trivia;
  return out;
}

}  // namespace itest
