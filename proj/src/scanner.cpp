#include "itest/scanner.hpp"

#include <optional>

#include "itest/lexer.hpp"

namespace itest {

using lex::Token;
using lex::TokenKind;

std::string_view to_string(StatementKind kind) {
  switch (kind) {
    case StatementKind::Import: return "IMPORT";
    case StatementKind::Assignment: return "ASSIGNMENT";
    case StatementKind::IfHeader: return "IF_HEADER";
    case StatementKind::WhileHeader: return "WHILE_HEADER";
    case StatementKind::InlineTest: return "INLINE_TEST";
    case StatementKind::Other: return "OTHER";
  }
  return "OTHER";
}

std::string SourceUnit::reconstruct() const {
  std::string out;
  out.reserve(text.size());
  for (const auto& stmt : statements) {
    out += stmt.trivia;
    out += stmt.indent;
    out += stmt.verbatim;
    out += stmt.newline;
  }
  out += trailing_trivia;
  return out;
}

namespace {

bool is_assignment_op(std::string_view op) {
  static constexpr std::string_view ops[] = {"=",  "+=", "-=",  "*=",  "/=",  "//=", "%=",
                                             "**=", ">>=", "<<=", "&=", "|=", "^=", "@="};
  for (auto candidate : ops) {
    if (op == candidate) return true;
  }
  return false;
}

std::size_t line_start(std::string_view text, std::size_t offset) {
  const std::size_t nl = text.rfind('\n', offset == 0 ? 0 : offset - 1);
  std::size_t start = (nl == std::string_view::npos || offset == 0) ? 0 : nl + 1;
  if (start == 0 && text.starts_with("\xEF\xBB\xBF") && offset >= 3) start = 3;
  return start;
}

}  // namespace

StatementKind classify(std::string_view verbatim) {
  const auto toks = lex::significant_tokens(verbatim);
  if (toks.empty()) return StatementKind::Other;
  const Token& first = toks.front();
  if (lex::is_name(first, verbatim, "Here") && toks.size() > 1 && lex::is_op(toks[1], verbatim, "(")) {
    return StatementKind::InlineTest;
  }
  if (lex::is_name(first, verbatim, "import") || lex::is_name(first, verbatim, "from")) {
    return StatementKind::Import;
  }
  if (lex::is_name(first, verbatim, "if") || lex::is_name(first, verbatim, "elif")) {
    return StatementKind::IfHeader;
  }
  if (lex::is_name(first, verbatim, "while")) return StatementKind::WhileHeader;

  int depth = 0;
  for (const Token& tok : toks) {
    if (tok.kind != TokenKind::Op) continue;
    const auto op = tok.text(verbatim);
    if (op == "(" || op == "[" || op == "{") {
      ++depth;
    } else if (op == ")" || op == "]" || op == "}") {
      --depth;
    } else if (depth == 0 && is_assignment_op(op)) {
      return StatementKind::Assignment;
    }
  }
  return StatementKind::Other;
}

SourceUnit scan_file(const std::filesystem::path& path, std::string text) {
  SourceUnit unit;
  unit.path = path;
  unit.text = std::move(text);
  const std::string_view src = unit.text;

  if (const auto nl = src.find('\n'); nl != std::string_view::npos && nl > 0 && src[nl - 1] == '\r') {
    unit.newline_style = NewlineStyle::CRLF;
  }

  const auto tokens = lex::tokenize(src);

  std::size_t consumed = 0;
  const Token* first = nullptr;
  for (const Token& tok : tokens) {
    if (tok.kind == TokenKind::Comment) continue;
    if (tok.kind == TokenKind::EndMarker) break;
    if (tok.kind != TokenKind::Newline) {
      if (!first) first = &tok;
      continue;
    }
    if (!first) continue;  // blank or comment-only line: trivia

    const std::size_t begin = line_start(src, first->begin);
    LogicalStatement stmt;
    stmt.trivia = std::string(src.substr(consumed, begin - consumed));
    stmt.indent = std::string(src.substr(begin, first->begin - begin));
    stmt.verbatim = std::string(src.substr(first->begin, tok.begin - first->begin));
    stmt.newline = std::string(tok.text(src));
    stmt.start_line = first->line;
    stmt.end_line = tok.line;
    stmt.kind = classify(stmt.verbatim);
    unit.statements.push_back(std::move(stmt));

    consumed = tok.end;
    first = nullptr;
  }
  unit.trailing_trivia = std::string(src.substr(consumed));
  return unit;
}

std::vector<std::size_t> find_inline_tests(const SourceUnit& unit) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < unit.statements.size(); ++i) {
    if (unit.statements[i].kind == StatementKind::InlineTest) out.push_back(i);
  }
  return out;
}

}  // namespace itest
