#include "itest/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace itest {

namespace {

TestOutcome problem_outcome(const std::filesystem::path& path, int line, const Error& e) {
  TestOutcome o;
  o.id = default_test_name(path, line);
  o.file = path;
  o.line = line;
  o.status = Status::Error;
  o.message = e.what();
  return o;
}

}  // namespace

CollectedFile collect_source(const std::filesystem::path& path, std::string text, ImportPolicy policy) {
  CollectedFile out;
  out.path = path;
  try {
    out.unit = scan_file(path, std::move(text));
  } catch (const Error& e) {
    out.problems.push_back(problem_outcome(path, e.line(), e));
    return out;
  }

  Extraction extraction = extract(*out.unit, policy);
  for (const auto& p : extraction.problems) out.problems.push_back(problem_outcome(path, p.line, p.error));
  for (auto& test : extraction.tests) {
    try {
      auto instances = expand(test);
      out.instances.insert(out.instances.end(), std::make_move_iterator(instances.begin()),
                           std::make_move_iterator(instances.end()));
      out.tests.push_back(std::move(test));
    } catch (const Error& e) {
      out.problems.push_back(problem_outcome(path, test.decl.line, e));
    }
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::DestinationUnwritable, 0, "cannot open " + path.string());
  out << text;
  out.flush();
  if (!out) throw Error(ErrorKind::DestinationUnwritable, 0, "cannot write " + path.string());
}

CollectedFile collect_file(const std::filesystem::path& path, ImportPolicy policy) {
  return collect_source(path, read_file(path), policy);
}

std::vector<std::filesystem::path> discover_sources(const std::vector<std::filesystem::path>& inputs) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& input : inputs) {
    std::error_code ec;
    if (fs::is_directory(input, ec)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::recursive_directory_iterator(input)) {
        if (entry.is_regular_file() && entry.path().extension() == ".py") found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(input, ec)) {
      files.push_back(input);
    } else {
      throw std::runtime_error("no such file or directory: " + input.string());
    }
  }
  return files;
}

}  // namespace itest
