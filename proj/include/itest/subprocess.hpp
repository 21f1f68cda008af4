#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace itest {

struct ProcessResult {
  int exit_code = -1;    // valid when the process exited normally
  int term_signal = 0;   // nonzero when killed by a signal
  bool timed_out = false;
  std::string out;
  std::string err;
  double wall_ms = 0.0;
};

struct ProcessSpec {
  std::filesystem::path executable;  // resolved path
  std::vector<std::string> args;     // argv[1..]
  std::string stdin_data;
  std::filesystem::path cwd;         // empty: inherit
  std::vector<std::pair<std::string, std::string>> env;  // added/overridden entries
  std::chrono::milliseconds timeout{0};                   // 0: none
};

// Resolves `name` the way execvp would: names containing '/' are taken as
// paths, anything else is searched on PATH.
std::optional<std::filesystem::path> find_executable(std::string_view name);

// Spawns the process in its own process group, feeds stdin, collects both
// output streams, and kills the whole group when the timeout expires.
// Throws std::system_error if the process cannot be started.
ProcessResult run_process(const ProcessSpec& spec);

}  // namespace itest
