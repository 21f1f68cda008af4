#include "itest/synthesizer.hpp"

#include <cassert>
#include <sstream>

#include "itest/lexer.hpp"

namespace itest {

namespace {

constexpr std::string_view kIndent = "    ";

// Shared runtime of every generated program. Names are prefixed so they
// cannot collide with the code under test.
constexpr std::string_view kPrelude = R"PY(import sys as _itest_sys
import io as _itest_io
import json as _itest_json
import time as _itest_time
import contextlib as _itest_contextlib

_itest_out = _itest_sys.stdout
_itest_MAX_REPR = @MAX_REPR@


class _itest_Failure(Exception):
    def __init__(self, expected, observed, index, count):
        Exception.__init__(self, expected, observed)
        self.expected = expected
        self.observed = observed
        self.index = index
        self.count = count


def _itest_repr(value):
    try:
        text = repr(value)
    except BaseException as exc:
        text = '<repr failed: %s: %s>' % (type(exc).__name__, exc)
    if len(text) > _itest_MAX_REPR:
        text = text[:_itest_MAX_REPR] + '...<truncated>'
    return text


def _itest_check_eq(observed, expected, index, count):
    if not (observed == expected):
        raise _itest_Failure(_itest_repr(expected), _itest_repr(observed), index, count)


def _itest_check_true(observed, index, count):
    if not observed:
        raise _itest_Failure(_itest_repr(True), _itest_repr(observed), index, count)


def _itest_check_false(observed, index, count):
    if observed:
        raise _itest_Failure(_itest_repr(False), _itest_repr(observed), index, count)


def _itest_emit(record):
    _itest_out.write(_itest_json.dumps(record) + '\n')
    _itest_out.flush()


def _itest_run(case_id, path, line, body):
    record = {'id': case_id, 'file': path, 'line': line}
    start = _itest_time.perf_counter()
    try:
        with _itest_contextlib.redirect_stdout(_itest_io.StringIO()):
            body()
        record['status'] = 'pass'
    except _itest_Failure as failure:
        record['status'] = 'fail'
        record['expected'] = failure.expected
        record['observed'] = failure.observed
        record['message'] = 'oracle %d of %d failed at %s:%d' % (failure.index, failure.count, path, line)
    except BaseException as exc:
        record['status'] = 'error'
        record['message'] = '%s: %s' % (type(exc).__name__, exc)
    duration = (_itest_time.perf_counter() - start) * 1000.0
    record['duration_ms'] = duration
    _itest_emit(record)


def _itest_skip(case_id, path, line, reason):
    _itest_emit({'id': case_id, 'file': path, 'line': line, 'status': 'skipped',
                 'duration_ms': 0.0, 'message': reason})
)PY";

std::string render_oracle(const Oracle& oracle, std::size_t index, std::size_t count) {
  auto with_groups = [](const std::string& expr) {
    std::string out;
    std::size_t at = 0;
    for (const auto& ref : find_group_refs(expr)) {
      out += expr.substr(at, ref.begin - at);
      out += std::string(kReservedPrefix) + "group_" + std::to_string(ref.index);
      at = ref.end;
    }
    out += expr.substr(at);
    return out;
  };
  const std::string tail = ", " + std::to_string(index) + ", " + std::to_string(count) + ")";
  switch (oracle.kind) {
    case OracleKind::Eq:
      return "_itest_check_eq(" + with_groups(oracle.lhs) + ", " + with_groups(oracle.rhs) + tail;
    case OracleKind::True:
      return "_itest_check_true(" + with_groups(oracle.lhs) + tail;
    case OracleKind::False:
      return "_itest_check_false(" + with_groups(oracle.lhs) + tail;
  }
  return {};
}

bool is_future_import(std::string_view stmt) {
  return stmt.starts_with("from") && imported_module(stmt) == "__future__";
}

bool is_star_import(std::string_view stmt) {
  for (const auto& name : imported_names(stmt)) {
    if (name == "*") return true;
  }
  return false;
}

void append_unique(std::vector<std::string>& out, const std::string& value) {
  for (const auto& existing : out) {
    if (existing == value) return;
  }
  out.push_back(value);
}

}  // namespace

std::vector<TestInstance> expand(const ExtractedTest& test) {
  const InlineTestDecl& decl = test.decl;
  const TargetStatement& target = test.target;
  const bool header = target.kind == StatementKind::IfHeader || target.kind == StatementKind::WhileHeader;

  if (!decl.group_refs.empty() && !header) {
    throw Error(ErrorKind::GroupOnNonHeader, decl.line,
                "Group() needs an if/while header target, got " + std::string(to_string(target.kind)));
  }
  for (const int i : decl.group_refs) {
    if (static_cast<std::size_t>(i) >= target.condition_operands.size()) {
      throw Error(ErrorKind::GroupIndexOutOfRange, decl.line,
                  "Group(" + std::to_string(i) + ") but the header has " +
                      std::to_string(target.condition_operands.size()) + " condition(s)");
    }
  }

  std::vector<std::string> target_text;
  if (!header) {
    target_text.push_back(target.verbatim);
  } else if (decl.group_refs.empty()) {
    target_text.push_back(std::string(kReservedPrefix) + "condition = (" + target.condition + ")");
  } else {
    for (const int i : decl.group_refs) {
      target_text.push_back(std::string(kReservedPrefix) + "group_" + std::to_string(i) + " = (" +
                            target.condition_operands[static_cast<std::size_t>(i)] + ")");
    }
  }

  std::vector<std::string> oracle_texts;
  for (std::size_t i = 0; i < decl.oracles.size(); ++i) {
    oracle_texts.push_back(render_oracle(decl.oracles[i], i + 1, decl.oracles.size()));
  }

  // Rows of bindings: one row unless parameterized.
  std::vector<std::vector<Binding>> rows;
  if (decl.parameterized) {
    std::vector<std::vector<std::string>> columns;
    for (const Given& g : decl.givens) columns.push_back(list_elements(g.value).value());
    const std::size_t length = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < length; ++r) {
      std::vector<Binding> row;
      for (std::size_t c = 0; c < decl.givens.size(); ++c) row.push_back({decl.givens[c].name, columns[c][r]});
      rows.push_back(std::move(row));
    }
  } else {
    std::vector<Binding> row;
    for (const Given& g : decl.givens) row.push_back({g.name, g.value});
    rows.push_back(std::move(row));
  }

  std::vector<TestInstance> instances;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int rep = 0; rep < decl.repeated; ++rep) {
      TestInstance inst;
      inst.id = decl.name;
      if (decl.parameterized) inst.id += "#" + std::to_string(r);
      if (decl.repeated > 1) inst.id += "@" + std::to_string(rep);
      inst.name = decl.name;
      inst.file = decl.file;
      inst.line = decl.line;
      inst.tags = decl.tags;
      inst.bindings = rows[r];
      inst.target_text = target_text;
      inst.oracle_texts = oracle_texts;
      inst.imports = test.imports;
      inst.skipped = decl.disabled;
      instances.push_back(std::move(inst));
    }
  }
  return instances;
}

GeneratedProgram render_program(const std::vector<TestInstance>& instances, const std::filesystem::path& origin) {
  assert(!instances.empty());
  GeneratedProgram program;
  program.origin = origin;

  std::vector<std::string> future_imports;
  std::vector<std::string> star_imports;
  for (const auto& inst : instances) {
    for (const auto& imp : inst.imports) {
      if (is_future_import(imp)) append_unique(future_imports, imp);
      else if (is_star_import(imp)) append_unique(star_imports, imp);
    }
  }

  std::ostringstream out;
  out << "# Inline tests of " << origin.generic_string() << ", generated by itest.\n";
  for (const auto& imp : future_imports) out << imp << "\n";
  std::string prelude(kPrelude);
  prelude.replace(prelude.find("@MAX_REPR@"), 10, std::to_string(kMaxReprChars));
  out << prelude;
  for (const auto& imp : star_imports) {
    out << "\ntry:\n" << kIndent << imp << "\nexcept Exception:\n" << kIndent << "pass\n";
  }

  for (std::size_t n = 0; n < instances.size(); ++n) {
    const TestInstance& inst = instances[n];
    if (inst.skipped) continue;
    out << "\n\ndef _itest_case_" << n << "():\n";
    for (const auto& imp : inst.imports) {
      if (!is_future_import(imp) && !is_star_import(imp)) out << kIndent << imp << "\n";
    }
    for (const auto& b : inst.bindings) out << kIndent << b.name << " = (" << b.value << ")\n";
    for (const auto& stmt : inst.target_text) out << kIndent << stmt << "\n";
    for (const auto& oracle : inst.oracle_texts) out << kIndent << oracle << "\n";
  }

  out << "\n\n_itest_out.write(" << lex::quote(std::string(kBeginSentinel) + "\n") << ")\n";
  for (std::size_t n = 0; n < instances.size(); ++n) {
    const TestInstance& inst = instances[n];
    const std::string file = lex::quote(inst.file.generic_string());
    if (inst.skipped) {
      out << "_itest_skip(" << lex::quote(inst.id) << ", " << file << ", " << inst.line << ", 'disabled')\n";
    } else {
      out << "_itest_run(" << lex::quote(inst.id) << ", " << file << ", " << inst.line << ", _itest_case_" << n
          << ")\n";
    }
    program.instances.push_back(InstanceRef{inst.id, inst.file, inst.line});
  }
  out << "_itest_out.write(" << lex::quote(std::string(kEndSentinel) + "\n") << ")\n";
  out << "_itest_out.flush()\n";

  program.source_text = out.str();
  return program;
}

}  // namespace itest
