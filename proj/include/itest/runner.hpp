#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "itest/synthesizer.hpp"

namespace itest {

inline constexpr std::string_view kInterpreterEnv = "ITEST_INTERPRETER";
inline constexpr std::string_view kDefaultInterpreter = "python3";
inline constexpr double kDefaultTimeoutSeconds = 60.0;

struct RunConfig {
  std::string interpreter = std::string(kDefaultInterpreter);
  int jobs = 1;
  double timeout_s = kDefaultTimeoutSeconds;
  std::set<std::string> tag_filter;
  std::optional<std::string> name_filter;  // glob over declaration names
  std::vector<std::pair<std::string, std::string>> env;
};

// Explicit flag, then $ITEST_INTERPRETER, then python3.
std::string discover_interpreter(const std::optional<std::string>& flag);

// One worker per hardware thread, at least one.
int default_jobs();

enum class Status { Pass, Fail, Error, Skipped, Timeout };

std::string_view to_string(Status status);
std::optional<Status> parse_status(std::string_view text);

struct TestOutcome {
  std::string id;
  std::filesystem::path file;
  int line = 0;
  Status status = Status::Error;
  double duration_ms = 0.0;
  std::optional<std::string> expected;
  std::optional<std::string> observed;
  std::optional<std::string> message;

  bool operator==(const TestOutcome&) const = default;
};

struct ProgramRun {
  std::vector<TestOutcome> outcomes;  // one per program instance, in order
  double wall_ms = 0.0;
};

// Parses the sentinel-delimited records of a program's standard output and
// matches them to the program's instances. Instances without a record become
// TIMEOUT (when `timed_out`) or ERROR carrying `crash_message`. Throws
// Error(ProtocolViolation) on a malformed record.
std::vector<TestOutcome> collect_outcomes(const GeneratedProgram& program, std::string_view stdout_text,
                                          bool timed_out, const std::string& crash_message);

// Runs one generated program. Throws Error(InterpreterNotFound) or
// Error(ProtocolViolation).
ProgramRun run_program(const GeneratedProgram& program, const RunConfig& cfg);

// Everything the runner needs from one source file: its expanded instances
// plus outcomes decided before execution (e.g. extraction errors).
struct SuiteFile {
  std::filesystem::path origin;
  std::vector<TestInstance> instances;
  std::vector<TestOutcome> preset;
};

struct SuiteRun {
  std::vector<TestOutcome> outcomes;
  double wall_ms = 0.0;
  std::size_t programs_run = 0;
};

// Filters, renders and executes every file with at most cfg.jobs concurrent
// interpreter processes. Outcomes come back in file order, then line, then
// expansion order. A failing program never aborts the suite. Throws
// Error(InterpreterNotFound) before starting anything.
SuiteRun run_suite(const std::vector<SuiteFile>& files, const RunConfig& cfg);

bool passes_filters(const TestInstance& instance, const RunConfig& cfg);

}  // namespace itest
