#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace itest {

enum class StatementKind {
  Import,
  Assignment,
  IfHeader,
  WhileHeader,
  InlineTest,
  Other,
};

std::string_view to_string(StatementKind kind);

enum class NewlineStyle { LF, CRLF };

// One logical line of the subject file. The file is reproduced exactly by
// concatenating, for every statement, `trivia + indent + verbatim + newline`
// followed by SourceUnit::trailing_trivia.
struct LogicalStatement {
  std::string trivia;    // blank and comment-only lines preceding the statement
  std::string indent;
  std::string verbatim;  // from the first token to the end of the logical line
  std::string newline;   // "\n", "\r\n", or "" at end of file
  int start_line = 0;
  int end_line = 0;
  StatementKind kind = StatementKind::Other;

  std::string reconstruct() const { return trivia + indent + verbatim + newline; }
};

struct SourceUnit {
  std::filesystem::path path;
  std::string text;
  std::vector<LogicalStatement> statements;
  std::string trailing_trivia;
  NewlineStyle newline_style = NewlineStyle::LF;

  std::string_view newline() const { return newline_style == NewlineStyle::CRLF ? "\r\n" : "\n"; }
  std::string reconstruct() const;
};

// Splits `text` into logical statements. Throws
// Error(UnbalancedDelimiter) if brackets or strings do not close; no partial
// result is produced in that case.
SourceUnit scan_file(const std::filesystem::path& path, std::string text);

// Indices of the INLINE_TEST statements, ascending.
std::vector<std::size_t> find_inline_tests(const SourceUnit& unit);

// Lexical classification of one statement's verbatim text.
StatementKind classify(std::string_view verbatim);

}  // namespace itest
