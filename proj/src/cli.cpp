#include "itest/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "itest/bench.hpp"
#include "itest/pipeline.hpp"
#include "itest/reporter.hpp"
#include "itest/rewriter.hpp"
#include "itest/subprocess.hpp"

namespace itest {

namespace fs = std::filesystem;

namespace {

struct RunFlags {
  std::vector<std::string> paths;
  int jobs = 0;  // 0: default_jobs()
  double timeout = kDefaultTimeoutSeconds;
  std::vector<std::string> tags;
  std::string name;
  std::string format = "console";
  std::string output;
  std::string interpreter;
  bool copy_all_imports = false;
};

struct RewriteFlags {
  std::vector<std::string> paths;
  bool in_place = false;
  std::string out_dir;
  int k = 0;
};

struct BenchFlags {
  int runs = 3;
  std::vector<int> ks;
};

void add_run_options(CLI::App& cmd, RunFlags& f) {
  cmd.add_option("paths", f.paths, "Source files or directories")->required();
  cmd.add_option("--jobs,-j", f.jobs, "Concurrent interpreter processes (default: number of processors)")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--timeout", f.timeout, "Per-program wall-clock budget in seconds")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--tag", f.tags, "Run only tests carrying this tag (repeatable)")->allow_extra_args(false);
  cmd.add_option("--name", f.name, "Run only tests whose name matches this glob");
  cmd.add_option("--interpreter", f.interpreter, "Interpreter command (default: $ITEST_INTERPRETER, then python3)");
  cmd.add_flag("--copy-all-imports", f.copy_all_imports, "Copy every import of the file into generated programs");
}

RunConfig make_config(const RunFlags& f) {
  RunConfig cfg;
  cfg.interpreter = discover_interpreter(f.interpreter.empty() ? std::nullopt : std::optional(f.interpreter));
  cfg.jobs = f.jobs > 0 ? f.jobs : default_jobs();
  cfg.timeout_s = f.timeout;
  cfg.tag_filter = {f.tags.begin(), f.tags.end()};
  if (!f.name.empty()) cfg.name_filter = f.name;
  return cfg;
}

std::vector<fs::path> as_paths(const std::vector<std::string>& in) {
  return {in.begin(), in.end()};
}

ImportPolicy import_policy(const RunFlags& f) {
  return f.copy_all_imports ? ImportPolicy::All : ImportPolicy::UsedNames;
}

int cmd_run(const RunFlags& f, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = make_config(f);
  const auto files = discover_sources(as_paths(f.paths));

  std::vector<SuiteFile> suite;
  for (const auto& file : files) suite.push_back(collect_file(file, import_policy(f)).suite_file());

  const std::string started = current_timestamp();
  SuiteRun run;
  try {
    run = run_suite(suite, cfg);
  } catch (const Error& e) {
    err << "itest: " << e.what() << '\n';
    return kUsageExitCode;
  }

  TestReport report = summarize(std::move(run.outcomes), run.wall_ms);
  report.started_at = started;
  report.config_echo = {{"interpreter", cfg.interpreter},
                        {"jobs", std::to_string(cfg.jobs)},
                        {"timeout_s", (std::ostringstream() << cfg.timeout_s).str()},
                        {"files", std::to_string(files.size())}};
  if (!f.tags.empty()) {
    std::string joined;
    for (const auto& t : f.tags) joined += (joined.empty() ? "" : ",") + t;
    report.config_echo["tags"] = joined;
  }
  if (cfg.name_filter) report.config_echo["name"] = *cfg.name_filter;

  static const std::map<std::string, ReportFormat> formats = {
      {"console", ReportFormat::Console}, {"json", ReportFormat::Json}, {"html", ReportFormat::Html}};
  const ReportFormat format = formats.at(f.format);
  if (f.output.empty()) {
    emit(report, format, out);
  } else {
    emit(report, format, fs::path(f.output));
    if (format != ReportFormat::Console) emit(report, ReportFormat::Console, out);
  }
  return exit_code(report);
}

int cmd_list(const RunFlags& f, std::ostream& out) {
  int status = 0;
  std::size_t count = 0;
  for (const auto& file : discover_sources(as_paths(f.paths))) {
    const CollectedFile collected = collect_file(file, import_policy(f));
    for (const auto& test : collected.tests) {
      const auto& d = test.decl;
      out << file.generic_string() << ':' << d.line << "  " << d.name;
      if (d.disabled) out << "  [disabled]";
      if (d.parameterized) out << "  [parameterized x" << list_elements(d.givens.front().value)->size() << ']';
      if (d.repeated > 1) out << "  [repeated " << d.repeated << ']';
      if (!d.tags.empty()) {
        out << "  [tags";
        for (const auto& t : d.tags) out << ' ' << t;
        out << ']';
      }
      out << "  -> " << to_string(test.target.kind) << " line " << test.target.start_line << '\n';
      ++count;
    }
    for (const auto& p : collected.problems) {
      out << file.generic_string() << ':' << p.line << "  ERROR " << p.message.value_or("") << '\n';
      status = 1;
    }
  }
  out << count << (count == 1 ? " inline test\n" : " inline tests\n");
  return status;
}

// Pairs each discovered file with its path relative to the input it came from.
std::vector<std::pair<fs::path, fs::path>> discover_with_relative(const std::vector<std::string>& inputs) {
  std::vector<std::pair<fs::path, fs::path>> out;
  for (const auto& input : inputs) {
    const fs::path root(input);
    const bool dir = fs::is_directory(root);
    for (const auto& file : discover_sources({root})) {
      out.emplace_back(file, dir ? file.lexically_relative(root) : file.filename());
    }
  }
  return out;
}

int cmd_rewrite(const RewriteFlags& f, bool dup, std::ostream& out, std::ostream& err) {
  if (f.in_place && !f.out_dir.empty()) {
    err << "itest: --in-place and --out-dir are mutually exclusive\n";
    return kUsageExitCode;
  }
  int status = 0;
  for (const auto& [file, rel] : discover_with_relative(f.paths)) {
    const std::string original = read_file(file);
    std::string rewritten;
    try {
      const SourceUnit unit = scan_file(file, original);
      rewritten = dup ? duplicate(unit, f.k) : strip(unit);
    } catch (const Error& e) {
      err << file.generic_string() << ": " << e.what() << '\n';
      status = 1;
      continue;
    }
    if (f.in_place) {
      write_file(fs::path(file.string() + ".orig"), original);
      write_file(file, rewritten);
    } else if (!f.out_dir.empty()) {
      const fs::path dest = fs::path(f.out_dir) / rel;
      fs::create_directories(dest.parent_path());
      write_file(dest, rewritten);
    } else {
      out << rewritten;
    }
  }
  return status;
}

int cmd_bench(const RunFlags& f, const BenchFlags& b, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = make_config(f);
  if (!find_executable(cfg.interpreter)) {
    err << "itest: cannot find interpreter '" << cfg.interpreter << "'\n";
    return kUsageExitCode;
  }
  BenchOptions options;
  options.runs = b.runs;
  options.imports = import_policy(f);
  if (!b.ks.empty()) options.ks = b.ks;
  const auto rows = bench(discover_sources(as_paths(f.paths)), cfg, options);
  print_bench_table(rows, out);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Statement-level inline tests for Python sources", "itest"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "Extract, execute and report inline tests");
  add_run_options(*run, run_flags);
  run->add_option("--format", run_flags.format, "Report format")
      ->check(CLI::IsMember({"console", "json", "html"}));
  run->add_option("--output,-o", run_flags.output, "Write the report to this file");

  RunFlags list_flags;
  auto* list = app.add_subcommand("list", "Print inline test declarations without running them");
  list->add_option("paths", list_flags.paths, "Source files or directories")->required();
  list->add_flag("--copy-all-imports", list_flags.copy_all_imports, "Copy every import of the file");

  RewriteFlags strip_flags;
  auto* strip_cmd = app.add_subcommand("strip", "Remove inline tests from sources");
  strip_cmd->add_option("paths", strip_flags.paths, "Source files or directories")->required();
  strip_cmd->add_flag("--in-place", strip_flags.in_place, "Rewrite files in place, keeping a .orig backup");
  strip_cmd->add_option("--out-dir", strip_flags.out_dir, "Write rewritten files under this directory");

  RewriteFlags dup_flags;
  auto* dup_cmd = app.add_subcommand("dup", "Duplicate every inline test k times");
  dup_cmd->add_option("--k", dup_flags.k, "Copies per inline test")->required()->check(CLI::PositiveNumber);
  dup_cmd->add_option("paths", dup_flags.paths, "Source files or directories")->required();
  dup_cmd->add_flag("--in-place", dup_flags.in_place, "Rewrite files in place, keeping a .orig backup");
  dup_cmd->add_option("--out-dir", dup_flags.out_dir, "Write rewritten files under this directory");

  RunFlags bench_flags;
  BenchFlags bench_extra;
  auto* bench_cmd = app.add_subcommand("bench", "Time the suite with inline tests duplicated 1, 10, 100, 1000 times");
  add_run_options(*bench_cmd, bench_flags);
  bench_cmd->add_option("--runs", bench_extra.runs, "Measured runs per k (one warm-up run is discarded)")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--k", bench_extra.ks, "Override the duplication factors (repeatable)")
      ->allow_extra_args(false)
      ->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageExitCode;
  }

  try {
    if (*run) return cmd_run(run_flags, out, err);
    if (*list) return cmd_list(list_flags, out);
    if (*strip_cmd) return cmd_rewrite(strip_flags, false, out, err);
    if (*dup_cmd) return cmd_rewrite(dup_flags, true, out, err);
    if (*bench_cmd) return cmd_bench(bench_flags, bench_extra, out, err);
  } catch (const std::exception& e) {
    err << "itest: " << e.what() << '\n';
    return kUsageExitCode;
  }
  return kUsageExitCode;
}

}  // namespace itest
