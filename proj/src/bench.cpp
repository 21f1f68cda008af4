#include "itest/bench.hpp"

#include <chrono>
#include <iomanip>
#include <ostream>

#include "itest/pipeline.hpp"
#include "itest/rewriter.hpp"

namespace itest {

namespace {

// Sources with every inline test duplicated k times; unscannable files are
// passed through so collect_source reports them.
std::vector<std::string> duplicated(const std::vector<std::filesystem::path>& files,
                                    const std::vector<std::string>& sources, int k) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < files.size(); ++i) {
    try {
      out.push_back(duplicate(scan_file(files[i], sources[i]), k));
    } catch (const Error&) {
      out.push_back(sources[i]);
    }
  }
  return out;
}

// One full pass: scan, extract, expand, render and execute.
SuiteRun timed_pass(const std::vector<std::filesystem::path>& files, const std::vector<std::string>& texts,
                    const RunConfig& cfg, ImportPolicy imports) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<SuiteFile> suite;
  for (std::size_t i = 0; i < files.size(); ++i) suite.push_back(collect_source(files[i], texts[i], imports).suite_file());
  SuiteRun run = run_suite(suite, cfg);
  run.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return run;
}

}  // namespace

std::vector<BenchRow> bench(const std::vector<std::filesystem::path>& files, const RunConfig& cfg,
                            const BenchOptions& options) {
  std::vector<std::string> sources;
  for (const auto& f : files) sources.push_back(read_file(f));

  std::vector<BenchRow> rows;
  for (const int k : options.ks) {
    const auto texts = duplicated(files, sources, k);
    for (int w = 0; w < options.warmup; ++w) timed_pass(files, texts, cfg, options.imports);
    BenchRow row;
    row.k = k;
    for (int r = 0; r < options.runs; ++r) {
      const SuiteRun run = timed_pass(files, texts, cfg, options.imports);
      row.total_ms += run.wall_ms;
      row.tests = run.outcomes.size();
    }
    row.total_ms /= std::max(1, options.runs);
    row.per_test_ms = row.tests == 0 ? 0.0 : row.total_ms / static_cast<double>(row.tests);
    rows.push_back(row);
  }
  return rows;
}

void print_bench_table(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << std::left << std::setw(8) << "k" << std::right << std::setw(10) << "tests" << std::setw(16)
      << "total (s)" << std::setw(18) << "per test (ms)" << '\n';
  for (const auto& row : rows) {
    out << std::left << std::setw(8) << row.k << std::right << std::setw(10) << row.tests << std::setw(16)
        << std::fixed << std::setprecision(3) << row.total_ms / 1000.0 << std::setw(18) << std::setprecision(4)
        << row.per_test_ms << '\n';
  }
  out.unsetf(std::ios::fixed);
}

}  // namespace itest
