#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "itest/extractor.hpp"
#include "itest/runner.hpp"

namespace itest {

// One row of the scaling table: the suite with every inline test
// duplicated k times.
struct BenchRow {
  int k = 1;
  std::size_t tests = 0;      // outcomes per run
  double total_ms = 0.0;      // mean pipeline wall time over the measured runs
  double per_test_ms = 0.0;   // total_ms / tests
};

struct BenchOptions {
  std::vector<int> ks{1, 10, 100, 1000};
  int runs = 3;      // measured runs per k
  int warmup = 1;    // discarded runs per k
  ImportPolicy imports = ImportPolicy::UsedNames;
};

// Duplicates the files in memory for each k and times the whole pipeline
// (scan, extract, expand, render, execute) on them.
std::vector<BenchRow> bench(const std::vector<std::filesystem::path>& files, const RunConfig& cfg,
                            const BenchOptions& options);

void print_bench_table(const std::vector<BenchRow>& rows, std::ostream& out);

}  // namespace itest
