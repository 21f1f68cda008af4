#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "itest/error.hpp"
#include "itest/pipeline.hpp"
#include "itest/synthesizer.hpp"

using namespace itest;

namespace {

ExtractedTest single(const std::string& src) {
  const SourceUnit unit = scan_file("s.py", src);
  const Extraction e = extract(unit);
  REQUIRE_MESSAGE(e.problems.empty(), (e.problems.empty() ? "" : e.problems[0].error.what()));
  REQUIRE(e.tests.size() == 1);
  return e.tests[0];
}

ErrorKind expand_error(const std::string& src) {
  try {
    expand(single(src));
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error");
  return ErrorKind::ProtocolViolation;
}

}  // namespace

TEST_CASE("expand: parameterized rows are zipped") {
  const auto inst = expand(single("y = x + z\nHere('p', parameterized=True).given(x, [1, 2]).given(z, [10, 20]).check_eq(y, 0)\n"));
  REQUIRE(inst.size() == 2);
  CHECK(inst[0].id == "p#0");
  CHECK(inst[1].id == "p#1");
  CHECK(inst[0].bindings == std::vector<Binding>{{"x", "1"}, {"z", "10"}});
  CHECK(inst[1].bindings == std::vector<Binding>{{"x", "2"}, {"z", "20"}});
}

TEST_CASE("expand: repeated instances share bindings") {
  const auto inst = expand(single("y = x\nHere('r', repeated=3).given(x, [1]).check_eq(y, [1])\n"));
  REQUIRE(inst.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(inst[i].id == "r@" + std::to_string(i));
    CHECK(inst[i].bindings == inst[0].bindings);
    CHECK(inst[i].bindings == std::vector<Binding>{{"x", "[1]"}});
  }
}

TEST_CASE("expand: parameterized and repeated combine") {
  const auto inst =
      expand(single("y = x\nHere('b', parameterized=True, repeated=2).given(x, [1, 2, 3]).check_eq(y, x)\n"));
  REQUIRE(inst.size() == 6);
  CHECK(inst[0].id == "b#0@0");
  CHECK(inst[1].id == "b#0@1");
  CHECK(inst[5].id == "b#2@1");
}

TEST_CASE("expand: disabled gives one skipped instance") {
  const auto inst = expand(single("y = 1\nHere(disabled=True).check_eq(y, 2)\n"));
  REQUIRE(inst.size() == 1);
  CHECK(inst[0].skipped);
}

TEST_CASE("expand: Group errors") {
  CHECK(expand_error("y = 1\nHere().check_true(Group(0))\n") == ErrorKind::GroupOnNonHeader);
  CHECK(expand_error("if a and b:\n    Here().given(a, 1).given(b, 1).check_true(Group(2))\n") ==
        ErrorKind::GroupIndexOutOfRange);
}

TEST_CASE("property: instance count is (parameterized ? L : 1) x repeated") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const bool param = rng() % 2;
    const int len = 1 + static_cast<int>(rng() % 5);
    const int rep = 1 + static_cast<int>(rng() % 4);
    const bool disabled = rng() % 4 == 0;
    std::string list = "[";
    for (int i = 0; i < len; ++i) list += (i ? ", " : "") + std::to_string(i);
    list += "]";
    std::string chain = "Here('c', parameterized=" + std::string(param ? "True" : "False") +
                        ", repeated=" + std::to_string(rep) + ", disabled=" + (disabled ? "True" : "False") +
                        ").given(x, " + list + ").check_true(y is not None)";
    const auto inst = expand(single("y = x\n" + chain + "\n"));
    CHECK(inst.size() == static_cast<std::size_t>((param ? len : 1) * rep));
    for (const auto& i : inst) CHECK(i.skipped == disabled);
  }
}

TEST_CASE("render: zip program contains the target verbatim") {
  const CollectedFile f = collect_file(ITEST_CORPUS_DIR "/zip.py");
  REQUIRE(f.instances.size() == 2);
  const GeneratedProgram p = render_program(f.instances, f.path);
  CHECK(p.source_text.find("    dosdate = (dt[0] - 1980) << 9 | dt[1] << 5 | dt[2]\n") != std::string::npos);
  CHECK(p.source_text.find("    dt = ((1980, 1, 25, 17, 13, 14))\n") != std::string::npos);
  CHECK(p.source_text.find("_itest_check_eq(dosdate, 57, 1, 1)") != std::string::npos);
  CHECK(p.source_text.find("from itest") == std::string::npos);
  CHECK(p.source_text.find("import itest") == std::string::npos);
  REQUIRE(p.instances.size() == 2);
  CHECK(p.instances[0].id == "zip_9");
  CHECK(p.instances[1].id == "zip_11");
}

TEST_CASE("render: uuid regex program binds the selected operand") {
  const CollectedFile f = collect_file(ITEST_CORPUS_DIR "/regex_uuid_faulty.py");
  REQUIRE(f.instances.size() == 1);
  const auto& inst = f.instances[0];
  REQUIRE(inst.target_text.size() == 1);
  CHECK(inst.target_text[0] == "_itest_group_1 = (re.match('^{0-9A-F-}{36}$', orig))");
  const GeneratedProgram p = render_program(f.instances, f.path);
  CHECK(p.source_text.find("_itest_check_true(_itest_group_1, 1, 1)") != std::string::npos);
  CHECK(p.source_text.find("import re\n") != std::string::npos);
  CHECK(p.source_text.find("import os") == std::string::npos);
}

TEST_CASE("render: verbatim fidelity over the corpus") {
  for (const auto& path : discover_sources({ITEST_CORPUS_DIR})) {
    const CollectedFile f = collect_file(path);
    if (f.instances.empty()) continue;
    const GeneratedProgram p = render_program(f.instances, f.path);
    for (const auto& t : f.tests) {
      if (t.target.kind == StatementKind::IfHeader || t.target.kind == StatementKind::WhileHeader) {
        for (int g : t.decl.group_refs) {
          CHECK(p.source_text.find("(" + t.target.condition_operands[g] + ")") != std::string::npos);
        }
      } else {
        CHECK_MESSAGE(p.source_text.find(t.target.verbatim) != std::string::npos, t.target.verbatim);
      }
    }
  }
}

TEST_CASE("render: sentinels bracket the records and reserved names carry the prefix") {
  const CollectedFile f = collect_file(ITEST_CORPUS_DIR "/features.py");
  const GeneratedProgram p = render_program(f.instances, f.path);
  const auto begin = p.source_text.find(std::string(kBeginSentinel));
  const auto end = p.source_text.find(std::string(kEndSentinel));
  REQUIRE(begin != std::string::npos);
  REQUIRE(end != std::string::npos);
  CHECK(begin < end);
  CHECK(p.instances.size() == f.instances.size());
  // every top-level definition the program adds is reserved
  std::size_t at = 0;
  while ((at = p.source_text.find("\ndef ", at)) != std::string::npos) {
    at += 5;
    CHECK(p.source_text.compare(at, kReservedPrefix.size(), kReservedPrefix) == 0);
  }
}
