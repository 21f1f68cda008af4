#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "itest/error.hpp"
#include "itest/pipeline.hpp"
#include "itest/scanner.hpp"

using namespace itest;

namespace {

struct Fragment {
  std::string text;
  bool inline_test;
};

// Statement shapes the generator draws from; several span physical lines.
const std::vector<Fragment>& fragments() {
  static const std::vector<Fragment> f = {
      {"x = 1", false},
      {"y = f(a, b)", false},
      {"if a and b:", false},
      {"while x:", false},
      {"import os", false},
      {"from a import b as c", false},
      {"print('#not a comment')", false},
      {"here(1)", false},
      {"z = [1,\n     2]", false},
      {"w = 1 + \\\n    2", false},
      {"s = '''a\n\nb'''", false},
      {"t = (x  # inside\n     )", false},
      {"Here().given(a, 1).check_eq(b, 2)", true},
      {"Here('n').check_true(x)", true},
      {"Here(\n    'multi'\n).given(a, [1,\n 2]).check_false(y)", true},
  };
  return f;
}

struct Generated {
  std::string text;
  std::size_t tests = 0;
  std::size_t statements = 0;
};

Generated generate(std::mt19937& rng) {
  static const std::vector<std::string> trivia = {"", "", "# comment\n", "\n", "   \n", "    # indented\n"};
  static const std::vector<std::string> indents = {"", "    ", "\t", "        "};
  const bool crlf = rng() % 3 == 0;
  Generated g;
  const int n = static_cast<int>(rng() % 12);
  for (int i = 0; i < n; ++i) {
    g.text += trivia[rng() % trivia.size()];
    const Fragment& f = fragments()[rng() % fragments().size()];
    g.text += indents[rng() % indents.size()] + f.text;
    g.tests += f.inline_test;
    ++g.statements;
    if (i + 1 < n || rng() % 2) g.text += "\n";
  }
  if (rng() % 4 == 0) g.text += "# trailing\n";
  if (crlf) {
    std::string out;
    for (char c : g.text) {
      if (c == '\n') out += '\r';
      out += c;
    }
    g.text = out;
  }
  return g;
}

std::vector<std::pair<int, int>> boundaries(const SourceUnit& unit) {
  std::vector<std::pair<int, int>> out;
  for (const auto& s : unit.statements) out.emplace_back(s.start_line, s.end_line);
  return out;
}

}  // namespace

TEST_CASE("date-packing chain is one INLINE_TEST statement at its line") {
  const std::string src =
      "import struct\n"
      "dt = (1980, 1, 25, 17, 13, 14)\n"
      "dosdate = (dt[0] - 1980) << 9 | dt[1] << 5 | dt[2]\n"
      "Here().given(dt, (1980, 1, 25, 17, 13, 14)).check_eq(dosdate, 57)\n";
  const SourceUnit unit = scan_file("zip.py", src);
  REQUIRE(unit.statements.size() == 4);
  CHECK(unit.statements[3].kind == StatementKind::InlineTest);
  CHECK(unit.statements[3].start_line == 4);
  CHECK(unit.statements[0].kind == StatementKind::Import);
  CHECK(unit.statements[1].kind == StatementKind::Assignment);
  CHECK(find_inline_tests(unit) == std::vector<std::size_t>{3});
}

TEST_CASE("empty file has no statements") {
  const SourceUnit unit = scan_file("e.py", "");
  CHECK(unit.statements.empty());
  CHECK(unit.reconstruct().empty());
}

TEST_CASE("chain split across lines is one statement") {
  const SourceUnit unit = scan_file("m.py", "Here(\n  'x').check_true(y)\n");
  REQUIRE(unit.statements.size() == 1);
  CHECK(unit.statements[0].kind == StatementKind::InlineTest);
  CHECK(unit.statements[0].start_line == 1);
  CHECK(unit.statements[0].end_line == 2);
}

TEST_CASE("find_inline_tests is ascending and case sensitive") {
  const SourceUnit unit = scan_file("t.py",
                                    "x = 1\nHere().check_true(x)\nhere(x)\nHere().check_true(x)\n"
                                    "y = 2\nHere().check_false(y)\n");
  CHECK(find_inline_tests(unit) == std::vector<std::size_t>{1, 3, 5});
  CHECK(unit.statements[2].kind == StatementKind::Other);
}

TEST_CASE("zip fixture has both chains") {
  const CollectedFile f = collect_file(ITEST_CORPUS_DIR "/zip.py");
  REQUIRE(f.unit);
  const auto tests = find_inline_tests(*f.unit);
  REQUIRE(tests.size() == 2);
  for (std::size_t idx : tests) CHECK(f.unit->statements[idx].verbatim.rfind("Here()", 0) == 0);
}

TEST_CASE("classification") {
  CHECK(classify("import os") == StatementKind::Import);
  CHECK(classify("from a import b") == StatementKind::Import);
  CHECK(classify("if x:") == StatementKind::IfHeader);
  CHECK(classify("elif x:") == StatementKind::IfHeader);
  CHECK(classify("while x:") == StatementKind::WhileHeader);
  CHECK(classify("x = 1") == StatementKind::Assignment);
  CHECK(classify("a, b = b, a") == StatementKind::Assignment);
  CHECK(classify("x += 1") == StatementKind::Assignment);
  CHECK(classify("f(x=1)") == StatementKind::Other);
  CHECK(classify("x == 1") == StatementKind::Other);
  CHECK(classify("Here().check_true(x)") == StatementKind::InlineTest);
  CHECK(classify("Here.foo") == StatementKind::Other);
  CHECK(classify("ifx = 1") == StatementKind::Assignment);
}

TEST_CASE("CRLF files keep their terminators") {
  const std::string src = "x = 1\r\n# c\r\nHere().check_eq(x, 1)\r\n";
  const SourceUnit unit = scan_file("c.py", src);
  CHECK(unit.newline_style == NewlineStyle::CRLF);
  REQUIRE(unit.statements.size() == 2);
  CHECK(unit.statements[1].trivia == "# c\r\n");
  CHECK(unit.statements[1].newline == "\r\n");
  CHECK(unit.reconstruct() == src);
}

TEST_CASE("unbalanced file is rejected as a whole") {
  CHECK_THROWS_AS(scan_file("u.py", "x = 1\ny = (2,\n"), Error);
}

TEST_CASE("corpus fixtures round-trip") {
  for (const auto& path : discover_sources({ITEST_CORPUS_DIR})) {
    const std::string text = read_file(path);
    CHECK_MESSAGE(scan_file(path, text).reconstruct() == text, path.string());
  }
}

TEST_CASE("property: round-trip, idempotence and classification over generated files") {
  std::mt19937 rng(20240917);
  for (int i = 0; i < 500; ++i) {
    const Generated g = generate(rng);
    const SourceUnit unit = scan_file("g.py", g.text);
    REQUIRE_MESSAGE(unit.reconstruct() == g.text, g.text);
    CHECK(unit.statements.size() == g.statements);
    CHECK(find_inline_tests(unit).size() == g.tests);
    const SourceUnit again = scan_file("g.py", unit.reconstruct());
    CHECK(boundaries(again) == boundaries(unit));
    for (std::size_t s = 1; s < unit.statements.size(); ++s) {
      CHECK(unit.statements[s].start_line > unit.statements[s - 1].end_line);
    }
  }
}
