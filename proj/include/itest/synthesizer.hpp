#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "itest/extractor.hpp"

namespace itest {

// Longest observed/expected representation a generated program reports.
inline constexpr std::size_t kMaxReprChars = 4096;

inline constexpr std::string_view kBeginSentinel = "##ITEST-BEGIN##";
inline constexpr std::string_view kEndSentinel = "##ITEST-END##";

struct Binding {
  std::string name;
  std::string value;

  bool operator==(const Binding&) const = default;
};

// One executable unit: a declaration after parameterized/repeat expansion.
struct TestInstance {
  std::string id;    // <name>[#row][@rep]
  std::string name;  // declaration name
  std::filesystem::path file;
  int line = 0;      // line of the inline test
  std::set<std::string> tags;
  std::vector<Binding> bindings;
  // Statements standing in for the target: the verbatim target, or one
  // `_itest_group_<i> = (<operand>)` per referenced header operand.
  std::vector<std::string> target_text;
  std::vector<std::string> oracle_texts;  // rendered assertion calls
  std::vector<std::string> imports;
  bool skipped = false;
};

struct InstanceRef {
  std::string id;
  std::filesystem::path file;
  int line = 0;
};

struct GeneratedProgram {
  std::string source_text;
  std::vector<InstanceRef> instances;  // in execution order
  std::filesystem::path origin;
};

// Throws Error(GroupIndexOutOfRange | GroupOnNonHeader).
std::vector<TestInstance> expand(const ExtractedTest& test);

// Precondition: `instances` is non-empty.
GeneratedProgram render_program(const std::vector<TestInstance>& instances, const std::filesystem::path& origin);

}  // namespace itest
