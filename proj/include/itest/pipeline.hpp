#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "itest/extractor.hpp"
#include "itest/runner.hpp"
#include "itest/scanner.hpp"
#include "itest/synthesizer.hpp"

namespace itest {

// Scan, extract and expand one file. Failures at any stage are turned into
// ERROR outcomes so the rest of the suite still runs.
struct CollectedFile {
  std::filesystem::path path;
  std::optional<SourceUnit> unit;  // empty when the file could not be scanned
  std::vector<ExtractedTest> tests;
  std::vector<TestInstance> instances;
  std::vector<TestOutcome> problems;

  SuiteFile suite_file() const { return SuiteFile{path, instances, problems}; }
};

CollectedFile collect_source(const std::filesystem::path& path, std::string text,
                             ImportPolicy policy = ImportPolicy::UsedNames);
CollectedFile collect_file(const std::filesystem::path& path, ImportPolicy policy = ImportPolicy::UsedNames);

// Expands the command-line inputs into source files: files are taken as
// given, directories are searched recursively for *.py in sorted order.
// Throws std::runtime_error for inputs that do not exist.
std::vector<std::filesystem::path> discover_sources(const std::vector<std::filesystem::path>& inputs);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace itest
