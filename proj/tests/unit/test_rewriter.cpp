#include <string>
#include <vector>

#include "doctest.h"
#include "itest/extractor.hpp"
#include "itest/pipeline.hpp"
#include "itest/rewriter.hpp"

using namespace itest;

namespace {

std::size_t tests_in(const std::string& text) {
  return find_inline_tests(scan_file("x.py", text)).size();
}

const char* kThree =
    "import re\n"
    "x = 1\n"
    "Here().check_eq(x, 1)\n"
    "# keep me\n"
    "def f(s):\n"
    "    m = re.match(r'a', s)\n"
    "    Here('named').given(s, 'a').check_true(m)\n"
    "    Here(\n"
    "        tag='t'\n"
    "    ).given(s, 'b').check_false(m)\n"
    "    return m\n";

}  // namespace

TEST_CASE("strip removes every inline test and nothing else") {
  const std::string out = strip(scan_file("s.py", kThree));
  CHECK(tests_in(out) == 0);
  CHECK(out ==
        "import re\n"
        "x = 1\n"
        "# keep me\n"
        "def f(s):\n"
        "    m = re.match(r'a', s)\n"
        "    return m\n");
}

TEST_CASE("strip is the identity on files without inline tests") {
  for (const std::string src : {"", "x = 1", "x = 1\r\ny = 2\r\n", "# only a comment\n\n", "here(1)\n"}) {
    CHECK(strip(scan_file("n.py", src)) == src);
  }
}

TEST_CASE("zip fixture stripped keeps both targets") {
  const std::string out = strip(*collect_file(ITEST_CORPUS_DIR "/zip.py").unit);
  CHECK(out.find("    dosdate = (dt[0] - 1980) << 9 | dt[1] << 5 | dt[2]\n") != std::string::npos);
  CHECK(out.find("    dostime = dt[3] << 11 | dt[4] << 5 | dt[5] >> 1\n") != std::string::npos);
  CHECK(out.find("Here(") == std::string::npos);
}

TEST_CASE("duplicate multiplies declarations") {
  const std::string one = "x = 1\nHere().check_eq(x, 1)\n";
  CHECK(tests_in(duplicate(scan_file("d.py", one), 10)) == 10);

  const std::string k1 = duplicate(scan_file("d.py", one), 1);
  const Extraction e = extract(scan_file("d.py", k1));
  REQUIRE(e.tests.size() == 1);
  CHECK(e.tests[0].decl.name == "d_2_dup0");
}

TEST_CASE("duplicate keeps CRLF and indentation") {
  const std::string src = "if a:\r\n    y = 2\r\n    Here('n').check_eq(y, 2)\r\n";
  const std::string out = duplicate(scan_file("c.py", src), 3);
  CHECK(out ==
        "if a:\r\n    y = 2\r\n"
        "    Here('n_dup0').check_eq(y, 2)\r\n"
        "    Here('n_dup1').check_eq(y, 2)\r\n"
        "    Here('n_dup2').check_eq(y, 2)\r\n");
}

TEST_CASE("rename_chain") {
  auto stmt = [](const std::string& v) {
    LogicalStatement s;
    s.verbatim = v;
    return s;
  };
  CHECK(rename_chain(stmt("Here().check_true(x)"), "n") == "Here(test_name='n').check_true(x)");
  CHECK(rename_chain(stmt("Here(tag='t').check_true(x)"), "n") == "Here(test_name='n', tag='t').check_true(x)");
  CHECK(rename_chain(stmt("Here(\"old\", tag='t').check_true(x)"), "n") == "Here('n', tag='t').check_true(x)");
  CHECK(rename_chain(stmt("Here(test_name='old').check_true(x)"), "n") == "Here(test_name='n').check_true(x)");
}

TEST_CASE("invariants over the corpus") {
  for (const auto& path : discover_sources({ITEST_CORPUS_DIR})) {
    const CollectedFile f = collect_file(path);
    REQUIRE(f.unit);
    const std::string stripped = strip(*f.unit);
    CHECK(tests_in(stripped) == 0);
    CHECK(strip(scan_file(path, stripped)) == stripped);
    for (int k : {1, 2, 5}) {
      const std::string dup = duplicate(*f.unit, k);
      CHECK(strip(scan_file(path, dup)) == stripped);
      const Extraction orig = extract(*f.unit);
      const Extraction copy = extract(scan_file(path, dup));
      REQUIRE(copy.tests.size() == orig.tests.size() * k);
      for (std::size_t i = 0; i < copy.tests.size(); ++i) {
        const auto& a = orig.tests[i / k].decl;
        const auto& b = copy.tests[i].decl;
        CHECK(b.name == a.name + "_dup" + std::to_string(i % k));
        CHECK(b.givens == a.givens);
        CHECK(b.oracles == a.oracles);
        CHECK(b.tags == a.tags);
        CHECK(b.parameterized == a.parameterized);
        CHECK(b.disabled == a.disabled);
        CHECK(b.repeated == a.repeated);
        CHECK(copy.tests[i].target.verbatim == orig.tests[i / k].target.verbatim);
      }
    }
  }
}
