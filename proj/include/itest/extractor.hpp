#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "itest/error.hpp"
#include "itest/scanner.hpp"

namespace itest {

// Module that provides the production no-op `Here`/`Group`. Imports from it
// are never copied into generated programs.
inline constexpr std::string_view kShimModule = "itest";

// Prefix of every name the synthesizer introduces.
inline constexpr std::string_view kReservedPrefix = "_itest_";

enum class OracleKind { Eq, True, False };

std::string_view to_string(OracleKind kind);

struct Oracle {
  OracleKind kind = OracleKind::Eq;
  std::string lhs;
  std::string rhs;  // EQ only

  bool operator==(const Oracle&) const = default;
};

struct Given {
  std::string name;
  std::string value;  // verbatim expression text

  bool operator==(const Given&) const = default;
};

struct InlineTestDecl {
  std::string name;
  std::filesystem::path file;
  int line = 0;
  bool disabled = false;
  bool parameterized = false;
  int repeated = 1;
  std::set<std::string> tags;
  std::vector<Given> givens;
  std::vector<Oracle> oracles;
  std::set<int> group_refs;
};

struct TargetStatement {
  StatementKind kind = StatementKind::Other;
  std::string verbatim;
  int start_line = 0;
  int end_line = 0;
  std::vector<std::string> assigned_names;
  std::string condition;                    // headers only
  std::vector<std::string> condition_operands;  // headers only
};

struct ExtractedTest {
  InlineTestDecl decl;
  TargetStatement target;
  std::vector<std::string> imports;
};

// Default declaration name: `<file stem>_<line>`.
std::string default_test_name(const std::filesystem::path& file, int line);

// Parses a `Here(...)` chain. Throws Error(MalformedChain | NoOracle |
// BadParameterization).
InlineTestDecl parse_chain(const LogicalStatement& stmt, const std::filesystem::path& file);

// The statement an inline test checks: the adjacent preceding non-test
// statement at the same indent, or the if/while header whose body the test
// opens. Throws Error(NoTarget).
TargetStatement resolve_target(const SourceUnit& unit, std::size_t test_index);

// Top-level `and`/`or` operands of an if/elif/while header, left to right.
std::vector<std::string> split_conditions(std::string_view header);

// Condition text of an if/elif/while header (between keyword and colon).
std::string header_condition(std::string_view header);

// Names an import statement binds (`import a.b` binds `a`, aliases win).
// A star import yields "*".
std::vector<std::string> imported_names(std::string_view import_stmt);
std::string imported_module(std::string_view import_stmt);

enum class ImportPolicy { UsedNames, All };

std::vector<std::string> collect_imports(const SourceUnit& unit, const TargetStatement& target,
                                         const InlineTestDecl& decl,
                                         ImportPolicy policy = ImportPolicy::UsedNames);

struct ExtractionProblem {
  Error error;
  int line;  // line of the inline test (or file-level error)
};

struct Extraction {
  std::vector<ExtractedTest> tests;
  std::vector<ExtractionProblem> problems;
};

// Runs parse/resolve/collect over every inline test in the unit. Per-test
// failures are collected; the remaining tests still extract.
Extraction extract(const SourceUnit& unit, ImportPolicy policy = ImportPolicy::UsedNames);

// Elements of a `[...]` list literal, verbatim; nullopt if `expr` is not one.
std::optional<std::vector<std::string>> list_elements(std::string_view expr);

// `Group(i)` occurrences in an expression, as (token begin, token end, index).
struct GroupRef {
  std::size_t begin;
  std::size_t end;
  int index;
};
std::vector<GroupRef> find_group_refs(std::string_view expr);

}  // namespace itest
