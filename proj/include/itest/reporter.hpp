#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "itest/runner.hpp"

namespace itest {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr std::string_view kToolVersion = "0.1.0";

struct StatusCounts {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t error = 0;
  std::size_t skipped = 0;
  std::size_t timeout = 0;

  std::size_t total() const { return pass + fail + error + skipped + timeout; }
  bool operator==(const StatusCounts&) const = default;
};

struct TestReport {
  std::vector<TestOutcome> outcomes;
  StatusCounts counts;
  double suite_wall_ms = 0.0;
  std::string started_at;  // ISO-8601 UTC
  std::string tool_version = std::string(kToolVersion);
  std::map<std::string, std::string> config_echo;

  bool operator==(const TestReport&) const = default;
};

TestReport summarize(std::vector<TestOutcome> outcomes, double suite_wall_ms = 0.0);

// 0 when nothing failed, errored or timed out; 1 otherwise.
int exit_code(const TestReport& report);

// Exit code for usage and internal errors.
inline constexpr int kUsageExitCode = 2;

enum class ReportFormat { Console, Json, Html };

void emit(const TestReport& report, ReportFormat format, std::ostream& out);
// Throws Error(DestinationUnwritable).
void emit(const TestReport& report, ReportFormat format, const std::filesystem::path& out);

std::string to_json(const TestReport& report);
// Inverse of to_json(); throws nlohmann::json exceptions on bad input.
TestReport report_from_json(const std::string& text);

std::string current_timestamp();

}  // namespace itest
