#include <cctype>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "doctest.h"
#include "itest/cli.hpp"
#include "itest/pipeline.hpp"
#include "itest/subprocess.hpp"
#include "json.hpp"

using namespace itest;
namespace fs = std::filesystem;

namespace {

ProcessResult itest_cmd(std::vector<std::string> args,
                        std::vector<std::pair<std::string, std::string>> env = {}) {
  ProcessSpec spec;
  spec.executable = ITEST_BINARY;
  spec.args = std::move(args);
  spec.env = std::move(env);
  spec.timeout = std::chrono::seconds(120);
  return run_process(spec);
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("itest_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

const std::string kCorpus = ITEST_CORPUS_DIR;

}  // namespace

TEST_CASE("run on the zip fixture exits 0 with two passes") {
  const auto r = itest_cmd({"run", kCorpus + "/zip.py"});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("2 tests: 2 passed") != std::string::npos);
}

TEST_CASE("run --tag regex executes only regex-tagged declarations") {
  const auto r = itest_cmd({"run", "--format", "json", "--tag", "regex", kCorpus});
  CHECK(r.exit_code == 1);  // the faulty regex fixture carries the tag
  const auto report = nlohmann::json::parse(r.out);
  int executed = 0;
  for (const auto& o : report["outcomes"]) {
    if (o["status"] == "skipped") continue;
    ++executed;
    const std::string file = o["file"];
    CHECK_MESSAGE((file.find("regex") != std::string::npos || file.find("crlf") != std::string::npos ||
                   file.find("string_split") != std::string::npos),
                  file);
  }
  // regex_diff x2, regex_uuid x2, crlf_numbers, string_split
  CHECK(executed == 6);
}

TEST_CASE("list flags disabled declarations") {
  const fs::path dir = scratch("list");
  write_file(dir / "d.py", "x = 1\nHere(disabled=True).check_eq(x, 1)\n");
  const auto r = itest_cmd({"list", (dir / "d.py").string()});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("[disabled]") != std::string::npos);
  CHECK(r.out.find("1 inline test\n") != std::string::npos);
}

TEST_CASE("run over an empty directory exits 0 and says so") {
  const auto r = itest_cmd({"run", scratch("empty").string()});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("0 tests") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  CHECK(itest_cmd({}).exit_code == 2);
  CHECK(itest_cmd({"frobnicate"}).exit_code == 2);
  CHECK(itest_cmd({"run"}).exit_code == 2);
  CHECK(itest_cmd({"run", "--jobs", "0", kCorpus}).exit_code == 2);
  CHECK(itest_cmd({"run", "--format", "xml", kCorpus}).exit_code == 2);
  CHECK(itest_cmd({"run", "/nonexistent/path.py"}).exit_code == 2);
  CHECK(itest_cmd({"dup", kCorpus}).exit_code == 2);
  CHECK(itest_cmd({"--version"}).exit_code == 0);
  CHECK(itest_cmd({"--help"}).exit_code == 0);
}

TEST_CASE("interpreter override through the environment and the flag") {
  auto r = itest_cmd({"run", kCorpus + "/zip.py"}, {{"ITEST_INTERPRETER", "/nonexistent/python"}});
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("/nonexistent/python") != std::string::npos);
  r = itest_cmd({"run", "--interpreter", "python3", kCorpus + "/zip.py"}, {{"ITEST_INTERPRETER", "/nonexistent/python"}});
  CHECK(r.exit_code == 0);
}

TEST_CASE("failures exit 1 and report formats write files") {
  const fs::path dir = scratch("formats");
  const auto r = itest_cmd({"run", "--format", "html", "--output", (dir / "r.html").string(),
                            kCorpus + "/regex_uuid_faulty.py"});
  CHECK(r.exit_code == 1);
  CHECK(fs::exists(dir / "r.html"));
  CHECK(r.out.find("expected: True") != std::string::npos);
  CHECK(itest_cmd({"run", "--output", "/nonexistent/dir/r.json", "--format", "json", kCorpus + "/zip.py"})
            .exit_code == 2);
}

TEST_CASE("strip and dup write to an output directory or in place") {
  const fs::path dir = scratch("rewrite");
  auto r = itest_cmd({"strip", "--out-dir", (dir / "out").string(), kCorpus});
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(dir / "out" / "zip.py"));
  CHECK(read_file(dir / "out" / "zip.py").find("Here(") == std::string::npos);

  write_file(dir / "w.py", "x = 1\nHere().check_eq(x, 1)\n");
  r = itest_cmd({"dup", "--k", "3", "--in-place", (dir / "w.py").string()});
  CHECK(r.exit_code == 0);
  CHECK(read_file(dir / "w.py.orig") == "x = 1\nHere().check_eq(x, 1)\n");
  CHECK(find_inline_tests(scan_file("w.py", read_file(dir / "w.py"))).size() == 3);

  r = itest_cmd({"strip", (dir / "w.py").string()});
  CHECK(r.out == "x = 1\n");
  CHECK(itest_cmd({"strip", "--in-place", "--out-dir", "x", (dir / "w.py").string()}).exit_code == 2);
}

TEST_CASE("bench prints a row per k") {
  const auto r = itest_cmd({"bench", "--runs", "1", "--k", "1", "--k", "2", kCorpus + "/zip.py"});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("per test") != std::string::npos);
  std::istringstream lines(r.out);
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) rows += !line.empty() && std::isdigit(static_cast<unsigned char>(line[0]));
  CHECK(rows == 2);
}

TEST_CASE("run_cli in process") {
  std::ostringstream out, err;
  CHECK(run_cli({"list", kCorpus + "/features.py"}, out, err) == 0);
  CHECK(out.str().find("clamp_bounds") != std::string::npos);
  CHECK(out.str().find("[parameterized x3]") != std::string::npos);
  CHECK(out.str().find("[repeated 3]") != std::string::npos);
}
