#include "itest/runner.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <thread>

#include "json.hpp"

#include "itest/subprocess.hpp"

namespace itest {

using json = nlohmann::json;

std::string_view to_string(Status status) {
  switch (status) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Error: return "error";
    case Status::Skipped: return "skipped";
    case Status::Timeout: return "timeout";
  }
  return "error";
}

std::optional<Status> parse_status(std::string_view text) {
  for (Status s : {Status::Pass, Status::Fail, Status::Error, Status::Skipped, Status::Timeout}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

std::string discover_interpreter(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv(std::string(kInterpreterEnv).c_str()); env && *env) return env;
  return std::string(kDefaultInterpreter);
}

int default_jobs() {
  return std::max(1u, std::thread::hardware_concurrency());
}

bool passes_filters(const TestInstance& instance, const RunConfig& cfg) {
  if (!cfg.tag_filter.empty()) {
    const bool tagged = std::any_of(instance.tags.begin(), instance.tags.end(),
                                    [&](const std::string& t) { return cfg.tag_filter.contains(t); });
    if (!tagged) return false;
  }
  if (cfg.name_filter && ::fnmatch(cfg.name_filter->c_str(), instance.name.c_str(), 0) != 0) return false;
  return true;
}

namespace {

TestOutcome missing_outcome(const InstanceRef& ref, Status status, const std::string& message) {
  TestOutcome o;
  o.id = ref.id;
  o.file = ref.file;
  o.line = ref.line;
  o.status = status;
  o.message = message;
  return o;
}

TestOutcome parse_record(std::string_view text, int stdout_line) {
  auto violation = [&](const std::string& why) {
    return Error(ErrorKind::ProtocolViolation, stdout_line, why);
  };
  json record;
  try {
    record = json::parse(text);
  } catch (const json::parse_error& e) {
    throw violation(std::string("record is not JSON: ") + e.what());
  }
  if (!record.is_object()) throw violation("record is not an object");
  auto require = [&](const char* key, bool ok) {
    if (!record.contains(key) || !ok) throw violation(std::string("bad or missing field '") + key + "'");
  };
  require("id", record.contains("id") && record["id"].is_string());
  require("file", record.contains("file") && record["file"].is_string());
  require("line", record.contains("line") && record["line"].is_number_integer());
  require("status", record.contains("status") && record["status"].is_string());
  require("duration_ms", record.contains("duration_ms") && record["duration_ms"].is_number());

  TestOutcome o;
  o.id = record["id"].get<std::string>();
  o.file = record["file"].get<std::string>();
  o.line = record["line"].get<int>();
  const auto status = parse_status(record["status"].get<std::string>());
  if (!status || *status == Status::Timeout) throw violation("unknown status '" + record["status"].get<std::string>() + "'");
  o.status = *status;
  o.duration_ms = record["duration_ms"].get<double>();
  for (const char* key : {"expected", "observed", "message"}) {
    if (!record.contains(key)) continue;
    if (!record[key].is_string()) throw violation(std::string("field '") + key + "' is not a string");
    auto& slot = key[0] == 'e' ? o.expected : key[0] == 'o' ? o.observed : o.message;
    slot = record[key].get<std::string>();
  }
  return o;
}

std::string tail(const std::string& text, std::size_t max_chars) {
  std::string t = text.size() > max_chars ? "..." + text.substr(text.size() - max_chars) : text;
  while (!t.empty() && (t.back() == '\n' || t.back() == '\r')) t.pop_back();
  return t;
}

}  // namespace

std::vector<TestOutcome> collect_outcomes(const GeneratedProgram& program, std::string_view stdout_text,
                                          bool timed_out, const std::string& crash_message) {
  std::vector<std::optional<TestOutcome>> slots(program.instances.size());

  bool inside = false;
  int line_no = 0;
  std::size_t at = 0;
  while (at < stdout_text.size()) {
    std::size_t nl = stdout_text.find('\n', at);
    if (nl == std::string_view::npos) nl = stdout_text.size();
    std::string_view line = stdout_text.substr(at, nl - at);
    at = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (!inside) {
      if (line == kBeginSentinel) inside = true;
      continue;
    }
    if (line == kEndSentinel) break;
    if (nl == stdout_text.size() && at > stdout_text.size()) {
      // Unterminated last line: the program died mid-write.
      break;
    }
    TestOutcome o = parse_record(line, line_no);
    bool placed = false;
    for (std::size_t i = 0; i < slots.size() && !placed; ++i) {
      if (!slots[i] && program.instances[i].id == o.id) {
        slots[i] = std::move(o);
        placed = true;
      }
    }
    if (!placed) throw Error(ErrorKind::ProtocolViolation, line_no, "record for unknown or repeated id");
  }

  std::vector<TestOutcome> outcomes;
  outcomes.reserve(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i]) {
      outcomes.push_back(std::move(*slots[i]));
    } else if (timed_out) {
      outcomes.push_back(missing_outcome(program.instances[i], Status::Timeout, crash_message));
    } else {
      outcomes.push_back(missing_outcome(program.instances[i], Status::Error, crash_message));
    }
  }
  return outcomes;
}

ProgramRun run_program(const GeneratedProgram& program, const RunConfig& cfg) {
  const auto exe = find_executable(cfg.interpreter);
  if (!exe) throw Error(ErrorKind::InterpreterNotFound, 0, "cannot find interpreter '" + cfg.interpreter + "'");

  ProcessSpec spec;
  spec.executable = *exe;
  spec.args = {"-"};
  spec.stdin_data = program.source_text;
  spec.cwd = program.origin.parent_path();
  spec.env = {{"PYTHONIOENCODING", "utf-8"}, {"PYTHONDONTWRITEBYTECODE", "1"}};
  spec.env.insert(spec.env.end(), cfg.env.begin(), cfg.env.end());
  spec.timeout = std::chrono::milliseconds(static_cast<long long>(cfg.timeout_s * 1000.0));

  const ProcessResult proc = run_process(spec);

  std::string crash;
  if (proc.timed_out) {
    crash = "timed out after " + nlohmann::json(cfg.timeout_s).dump() + " s";
  } else {
    crash = proc.term_signal != 0 ? "program killed by signal " + std::to_string(proc.term_signal)
                                  : "program exited with status " + std::to_string(proc.exit_code);
    crash += " before reporting this test";
    if (!proc.err.empty()) crash += "\n" + tail(proc.err, 2000);
  }

  ProgramRun run;
  run.outcomes = collect_outcomes(program, proc.out, proc.timed_out, crash);
  run.wall_ms = proc.wall_ms;
  return run;
}

SuiteRun run_suite(const std::vector<SuiteFile>& files, const RunConfig& cfg) {
  SuiteRun suite;
  const auto started = std::chrono::steady_clock::now();

  struct Work {
    std::size_t file;
    GeneratedProgram program;
    std::vector<std::size_t> instance_index;  // program instance -> file instance
  };
  std::vector<Work> work;
  // Per-file outcome slots, one per instance.
  std::vector<std::vector<std::optional<TestOutcome>>> slots(files.size());

  for (std::size_t f = 0; f < files.size(); ++f) {
    const SuiteFile& file = files[f];
    slots[f].resize(file.instances.size());
    std::vector<TestInstance> kept;
    std::vector<std::size_t> index;
    for (std::size_t i = 0; i < file.instances.size(); ++i) {
      const TestInstance& inst = file.instances[i];
      if (passes_filters(inst, cfg)) {
        kept.push_back(inst);
        index.push_back(i);
      } else {
        slots[f][i] = missing_outcome(InstanceRef{inst.id, inst.file, inst.line}, Status::Skipped, "filtered");
      }
    }
    if (!kept.empty()) work.push_back(Work{f, render_program(kept, file.origin), std::move(index)});
  }

  if (!work.empty() && !find_executable(cfg.interpreter)) {
    throw Error(ErrorKind::InterpreterNotFound, 0, "cannot find interpreter '" + cfg.interpreter + "'");
  }

  std::vector<ProgramRun> results(work.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t w = next++; w < work.size(); w = next++) {
      try {
        results[w] = run_program(work[w].program, cfg);
      } catch (const std::exception& e) {
        ProgramRun failed;
        for (const auto& ref : work[w].program.instances) failed.outcomes.push_back(missing_outcome(ref, Status::Error, e.what()));
        results[w] = std::move(failed);
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, cfg.jobs)), work.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  if (threads > 0) worker();
  for (auto& t : pool) t.join();

  for (std::size_t w = 0; w < work.size(); ++w) {
    for (std::size_t k = 0; k < results[w].outcomes.size(); ++k) {
      slots[work[w].file][work[w].instance_index[k]] = std::move(results[w].outcomes[k]);
    }
  }
  suite.programs_run = work.size();

  for (std::size_t f = 0; f < files.size(); ++f) {
    std::vector<TestOutcome> merged;
    for (auto& slot : slots[f]) merged.push_back(std::move(*slot));
    merged.insert(merged.end(), files[f].preset.begin(), files[f].preset.end());
    std::stable_sort(merged.begin(), merged.end(),
                     [](const TestOutcome& a, const TestOutcome& b) { return a.line < b.line; });
    suite.outcomes.insert(suite.outcomes.end(), std::make_move_iterator(merged.begin()),
                          std::make_move_iterator(merged.end()));
  }
  suite.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return suite;
}

}  // namespace itest
