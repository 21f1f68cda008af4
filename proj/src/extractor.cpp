#include "itest/extractor.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <unordered_set>

#include "itest/lexer.hpp"

namespace itest {

using lex::Token;
using lex::TokenKind;

std::string_view to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::Eq: return "check_eq";
    case OracleKind::True: return "check_true";
    case OracleKind::False: return "check_false";
  }
  return "check_eq";
}

std::string default_test_name(const std::filesystem::path& file, int line) {
  return file.stem().string() + "_" + std::to_string(line);
}

namespace {

bool opens(const Token& t, std::string_view src) {
  return lex::is_op(t, src, "(") || lex::is_op(t, src, "[") || lex::is_op(t, src, "{");
}

bool closes(const Token& t, std::string_view src) {
  return lex::is_op(t, src, ")") || lex::is_op(t, src, "]") || lex::is_op(t, src, "}");
}

std::string_view span(std::string_view src, const Token& first, const Token& last) {
  return src.substr(first.begin, last.end - first.begin);
}

// Index of the token closing the bracket opened at `open`.
std::size_t matching_close(const std::vector<Token>& toks, std::string_view src, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < toks.size(); ++i) {
    if (opens(toks[i], src)) ++depth;
    if (closes(toks[i], src) && --depth == 0) return i;
  }
  return toks.size();
}

struct Arg {
  std::string keyword;  // empty for positional arguments
  std::size_t first;    // token range [first, last]
  std::size_t last;
};

// Splits the arguments of the call whose "(" is at `open`; returns the index
// of the closing ")".
std::size_t split_args(const std::vector<Token>& toks, std::string_view src, std::size_t open,
                       int line, std::vector<Arg>& args) {
  const std::size_t close = matching_close(toks, src, open);
  if (close >= toks.size()) throw Error(ErrorKind::MalformedChain, line, "unclosed call");
  args.clear();
  std::size_t start = open + 1;
  int depth = 0;
  auto flush = [&](std::size_t end) {
    if (start == end) {
      if (end == close && !args.empty()) return;  // trailing comma
      if (end == close && args.empty()) return;   // no arguments
      throw Error(ErrorKind::MalformedChain, line, "empty argument");
    }
    Arg arg{"", start, end - 1};
    if (end - start >= 2 && toks[start].kind == TokenKind::Name && lex::is_op(toks[start + 1], src, "=")) {
      arg.keyword = std::string(toks[start].text(src));
      arg.first = start + 2;
      if (arg.first > arg.last) throw Error(ErrorKind::MalformedChain, line, "keyword without value");
    }
    args.push_back(arg);
  };
  for (std::size_t i = open + 1; i < close; ++i) {
    if (opens(toks[i], src)) ++depth;
    else if (closes(toks[i], src)) --depth;
    else if (depth == 0 && lex::is_op(toks[i], src, ",")) {
      flush(i);
      start = i + 1;
    }
  }
  flush(close);
  return close;
}

std::string arg_text(const std::vector<Token>& toks, std::string_view src, const Arg& a) {
  return std::string(span(src, toks[a.first], toks[a.last]));
}

bool single_token(const Arg& a) { return a.first == a.last; }

std::string string_arg(const std::vector<Token>& toks, std::string_view src, const Arg& a, int line,
                       std::string_view what) {
  std::string out;
  if (!single_token(a) || toks[a.first].kind != TokenKind::String ||
      !lex::decode_string_literal(toks[a.first].text(src), out)) {
    throw Error(ErrorKind::MalformedChain, line, std::string(what) + " must be a string literal");
  }
  return out;
}

bool bool_arg(const std::vector<Token>& toks, std::string_view src, const Arg& a, int line,
              std::string_view what) {
  if (single_token(a) && lex::is_name(toks[a.first], src, "True")) return true;
  if (single_token(a) && lex::is_name(toks[a.first], src, "False")) return false;
  throw Error(ErrorKind::MalformedChain, line, std::string(what) + " must be True or False");
}

void reject_reserved(const std::vector<Token>& toks, std::string_view src, int line) {
  for (const Token& t : toks) {
    if (t.kind == TokenKind::Name && t.text(src).starts_with(kReservedPrefix)) {
      throw Error(ErrorKind::MalformedChain, line,
                  "identifier '" + std::string(t.text(src)) + "' uses the reserved prefix " +
                      std::string(kReservedPrefix));
    }
  }
}

void parse_here_args(InlineTestDecl& decl, const std::vector<Token>& toks, std::string_view src,
                     const std::vector<Arg>& args, int line) {
  bool named = false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const Arg& a = args[i];
    if (a.keyword.empty()) {
      if (i != 0) throw Error(ErrorKind::MalformedChain, line, "Here() takes at most one positional argument");
      decl.name = string_arg(toks, src, a, line, "test name");
      named = true;
      continue;
    }
    if (a.keyword == "test_name") {
      if (named) throw Error(ErrorKind::MalformedChain, line, "test name given twice");
      decl.name = string_arg(toks, src, a, line, "test_name");
      named = true;
    } else if (a.keyword == "parameterized") {
      decl.parameterized = bool_arg(toks, src, a, line, "parameterized");
    } else if (a.keyword == "disabled") {
      decl.disabled = bool_arg(toks, src, a, line, "disabled");
    } else if (a.keyword == "repeated") {
      int n = 0;
      const auto text = toks[a.first].text(src);
      const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
      if (!single_token(a) || toks[a.first].kind != TokenKind::Number || ec != std::errc{} ||
          p != text.data() + text.size() || n < 1) {
        throw Error(ErrorKind::MalformedChain, line, "repeated must be an integer literal >= 1");
      }
      decl.repeated = n;
    } else if (a.keyword == "tag") {
      if (single_token(a)) {
        decl.tags.insert(string_arg(toks, src, a, line, "tag"));
        continue;
      }
      const bool bracketed = (lex::is_op(toks[a.first], src, "[") && lex::is_op(toks[a.last], src, "]")) ||
                             (lex::is_op(toks[a.first], src, "(") && lex::is_op(toks[a.last], src, ")"));
      if (!bracketed || matching_close(toks, src, a.first) != a.last) {
        throw Error(ErrorKind::MalformedChain, line, "tag must be a string or a list of strings");
      }
      for (std::size_t t = a.first + 1; t < a.last; ++t) {
        if (lex::is_op(toks[t], src, ",")) continue;
        decl.tags.insert(string_arg(toks, src, Arg{"", t, t}, line, "tag"));
      }
    } else {
      throw Error(ErrorKind::MalformedChain, line, "unknown Here() option '" + a.keyword + "'");
    }
  }
  if (decl.name.empty()) {
    if (named) throw Error(ErrorKind::MalformedChain, line, "test name must not be empty");
    decl.name = default_test_name(decl.file, decl.line);
  }
}

void require_positional(const std::vector<Arg>& args, std::size_t n, std::string_view method, int line) {
  if (args.size() != n) {
    throw Error(ErrorKind::MalformedChain, line,
                std::string(method) + "() takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s"));
  }
  for (const Arg& a : args) {
    if (!a.keyword.empty()) {
      throw Error(ErrorKind::MalformedChain, line, std::string(method) + "() takes no keyword arguments");
    }
  }
}

bool is_top_level_assignment_op(std::string_view op) {
  static constexpr std::string_view ops[] = {"=",  "+=", "-=",  "*=",  "/=",  "//=", "%=",
                                             "**=", ">>=", "<<=", "&=", "|=", "^=", "@="};
  for (auto candidate : ops) {
    if (op == candidate) return true;
  }
  return false;
}

std::vector<std::string> assignment_targets(std::string_view stmt) {
  const auto toks = lex::significant_tokens(stmt);
  // Positions of top-level assignment operators.
  std::vector<std::size_t> cuts;
  int depth = 0;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (opens(toks[i], stmt)) ++depth;
    else if (closes(toks[i], stmt)) --depth;
    else if (depth == 0 && toks[i].kind == TokenKind::Op && is_top_level_assignment_op(toks[i].text(stmt))) {
      cuts.push_back(i);
    }
  }
  std::vector<std::string> names;
  std::size_t seg_begin = 0;
  for (const std::size_t cut : cuts) {
    // Brackets that only pack names (`(a, b)`, `[a, *b]`) are looked
    // through; calls and subscripts are not.
    std::vector<bool> packing;
    const auto inside_packing = [&] { return std::all_of(packing.begin(), packing.end(), [](bool p) { return p; }); };
    for (std::size_t i = seg_begin; i < cut; ++i) {
      if (opens(toks[i], stmt)) {
        const bool follows_value = i > seg_begin && (toks[i - 1].kind == TokenKind::Name ||
                                                     closes(toks[i - 1], stmt));
        packing.push_back(!follows_value);
        continue;
      }
      if (closes(toks[i], stmt)) {
        if (!packing.empty()) packing.pop_back();
        continue;
      }
      if (packing.empty() && lex::is_op(toks[i], stmt, ":")) break;  // annotation
      if (!inside_packing() || toks[i].kind != TokenKind::Name) continue;
      const bool after_dot = i > 0 && lex::is_op(toks[i - 1], stmt, ".");
      const bool before_access = i + 1 < cut && (lex::is_op(toks[i + 1], stmt, ".") ||
                                                 lex::is_op(toks[i + 1], stmt, "[") ||
                                                 lex::is_op(toks[i + 1], stmt, "("));
      if (!after_dot && !before_access) names.emplace_back(toks[i].text(stmt));
    }
    seg_begin = cut + 1;
  }
  return names;
}

bool has_inline_body(std::string_view header) {
  const auto toks = lex::significant_tokens(header);
  int depth = 0;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (opens(toks[i], header)) ++depth;
    else if (closes(toks[i], header)) --depth;
    else if (depth == 0 && lex::is_op(toks[i], header, ":")) return i + 1 < toks.size();
  }
  return false;
}

// Token range [begin, end) of the header condition.
std::pair<std::size_t, std::size_t> condition_range(const std::vector<Token>& toks, std::string_view header) {
  int depth = 0;
  int lambdas = 0;  // a top-level lambda owns the next top-level colon
  for (std::size_t i = 1; i < toks.size(); ++i) {
    if (opens(toks[i], header)) ++depth;
    else if (closes(toks[i], header)) --depth;
    else if (depth == 0 && lex::is_name(toks[i], header, "lambda")) ++lambdas;
    else if (depth == 0 && lex::is_op(toks[i], header, ":")) {
      if (lambdas == 0) return {1, i};
      --lambdas;
    }
  }
  return {1, toks.size()};
}

}  // namespace

std::optional<std::vector<std::string>> list_elements(std::string_view expr) {
  const auto toks = lex::significant_tokens(expr);
  if (toks.size() < 2 || !lex::is_op(toks.front(), expr, "[") || !lex::is_op(toks.back(), expr, "]") ||
      matching_close(toks, expr, 0) != toks.size() - 1) {
    return std::nullopt;
  }
  std::vector<std::string> elements;
  std::size_t start = 1;
  int depth = 0;
  for (std::size_t i = 1; i < toks.size(); ++i) {
    const bool last = i == toks.size() - 1;
    if (!last && opens(toks[i], expr)) ++depth;
    else if (!last && closes(toks[i], expr)) --depth;
    else if (last || (depth == 0 && lex::is_op(toks[i], expr, ","))) {
      if (i > start) {
        elements.emplace_back(span(expr, toks[start], toks[i - 1]));
      } else if (!last) {
        return std::nullopt;  // `[a, , b]`
      }
      start = i + 1;
    }
  }
  return elements;
}

std::vector<GroupRef> find_group_refs(std::string_view expr) {
  const auto toks = lex::significant_tokens(expr);
  std::vector<GroupRef> refs;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (!lex::is_name(toks[i], expr, "Group")) continue;
    if (i > 0 && lex::is_op(toks[i - 1], expr, ".")) continue;
    if (i + 1 >= toks.size() || !lex::is_op(toks[i + 1], expr, "(")) continue;
    int index = -1;
    if (i + 3 < toks.size() && toks[i + 2].kind == TokenKind::Number && lex::is_op(toks[i + 3], expr, ")")) {
      const auto text = toks[i + 2].text(expr);
      const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), index);
      if (ec != std::errc{} || p != text.data() + text.size()) index = -1;
    }
    if (index < 0) {
      throw Error(ErrorKind::MalformedChain, toks[i].line, "Group() takes one non-negative integer literal");
    }
    refs.push_back(GroupRef{toks[i].begin, toks[i + 3].end, index});
    i += 3;
  }
  return refs;
}

InlineTestDecl parse_chain(const LogicalStatement& stmt, const std::filesystem::path& file) {
  const int line = stmt.start_line;
  const std::string_view src = stmt.verbatim;
  const auto toks = lex::significant_tokens(src, line);
  if (toks.size() < 3 || !lex::is_name(toks[0], src, "Here") || !lex::is_op(toks[1], src, "(")) {
    throw Error(ErrorKind::MalformedChain, line, "an inline test starts with Here(...)");
  }
  reject_reserved(toks, src, line);

  InlineTestDecl decl;
  decl.file = file;
  decl.line = line;

  std::vector<Arg> args;
  std::size_t pos = split_args(toks, src, 1, line, args) + 1;
  parse_here_args(decl, toks, src, args, line);

  while (pos < toks.size()) {
    if (!lex::is_op(toks[pos], src, ".") || pos + 2 >= toks.size() || toks[pos + 1].kind != TokenKind::Name ||
        !lex::is_op(toks[pos + 2], src, "(")) {
      throw Error(ErrorKind::MalformedChain, line,
                  "unexpected '" + std::string(toks[pos].text(src)) + "' in chain");
    }
    const std::string method(toks[pos + 1].text(src));
    pos = split_args(toks, src, pos + 2, line, args) + 1;

    if (method == "given") {
      require_positional(args, 2, method, line);
      if (!single_token(args[0]) || toks[args[0].first].kind != TokenKind::Name) {
        throw Error(ErrorKind::MalformedChain, line, "given() expects an identifier as its first argument");
      }
      Given g{arg_text(toks, src, args[0]), arg_text(toks, src, args[1])};
      if (!find_group_refs(g.value).empty()) {
        throw Error(ErrorKind::MalformedChain, line, "Group() is only valid inside oracles");
      }
      decl.givens.push_back(std::move(g));
    } else if (method == "check_eq") {
      require_positional(args, 2, method, line);
      decl.oracles.push_back(Oracle{OracleKind::Eq, arg_text(toks, src, args[0]), arg_text(toks, src, args[1])});
    } else if (method == "check_true" || method == "check_false") {
      require_positional(args, 1, method, line);
      decl.oracles.push_back(Oracle{method == "check_true" ? OracleKind::True : OracleKind::False,
                                    arg_text(toks, src, args[0]), ""});
    } else {
      throw Error(ErrorKind::MalformedChain, line, "unknown chain call '" + method + "'");
    }
  }

  if (decl.oracles.empty()) throw Error(ErrorKind::NoOracle, line, "inline test has no check_* call");

  for (const Oracle& o : decl.oracles) {
    for (const auto& ref : find_group_refs(o.lhs)) decl.group_refs.insert(ref.index);
    for (const auto& ref : find_group_refs(o.rhs)) decl.group_refs.insert(ref.index);
  }

  if (decl.parameterized) {
    if (decl.givens.empty()) {
      throw Error(ErrorKind::BadParameterization, line, "parameterized test has no given values");
    }
    std::optional<std::size_t> length;
    for (const Given& g : decl.givens) {
      const auto elements = list_elements(g.value);
      if (!elements) {
        throw Error(ErrorKind::BadParameterization, line, "value for '" + g.name + "' is not a list literal");
      }
      if (elements->empty()) {
        throw Error(ErrorKind::BadParameterization, line, "value list for '" + g.name + "' is empty");
      }
      if (length && *length != elements->size()) {
        throw Error(ErrorKind::BadParameterization, line, "value lists have different lengths");
      }
      length = elements->size();
    }
  }
  return decl;
}

std::string header_condition(std::string_view header) {
  const auto toks = lex::significant_tokens(header);
  if (toks.size() < 2) return {};
  const auto [b, e] = condition_range(toks, header);
  if (b >= e) return {};
  return std::string(span(header, toks[b], toks[e - 1]));
}

std::vector<std::string> split_conditions(std::string_view header) {
  const auto toks = lex::significant_tokens(header);
  if (toks.size() < 2) return {};
  const auto [b, e] = condition_range(toks, header);
  if (b >= e) return {};

  // A top-level conditional expression or lambda binds looser than and/or,
  // so the whole condition is one operand.
  int depth = 0;
  for (std::size_t i = b; i < e; ++i) {
    if (opens(toks[i], header)) ++depth;
    else if (closes(toks[i], header)) --depth;
    else if (depth == 0 && (lex::is_name(toks[i], header, "if") || lex::is_name(toks[i], header, "lambda"))) {
      return {std::string(span(header, toks[b], toks[e - 1]))};
    }
  }

  std::vector<std::string> operands;
  std::size_t start = b;
  for (std::size_t i = b; i < e; ++i) {
    if (opens(toks[i], header)) ++depth;
    else if (closes(toks[i], header)) --depth;
    else if (depth == 0 && (lex::is_name(toks[i], header, "and") || lex::is_name(toks[i], header, "or"))) {
      if (i > start) operands.emplace_back(span(header, toks[start], toks[i - 1]));
      start = i + 1;
    }
  }
  if (start < e) operands.emplace_back(span(header, toks[start], toks[e - 1]));
  return operands;
}

TargetStatement resolve_target(const SourceUnit& unit, std::size_t test_index) {
  const auto& stmts = unit.statements;
  const LogicalStatement& test = stmts.at(test_index);
  std::size_t j = test_index;
  while (j > 0 && stmts[j - 1].kind == StatementKind::InlineTest && stmts[j - 1].indent == test.indent) --j;
  if (j == 0) throw Error(ErrorKind::NoTarget, test.start_line, "no statement precedes the inline test");
  const LogicalStatement& prev = stmts[j - 1];

  bool ok = false;
  if (prev.kind == StatementKind::InlineTest) {
    ok = false;
  } else if (prev.indent == test.indent) {
    ok = true;
  } else if ((prev.kind == StatementKind::IfHeader || prev.kind == StatementKind::WhileHeader) &&
             test.indent.size() > prev.indent.size() && test.indent.starts_with(prev.indent) &&
             !has_inline_body(prev.verbatim)) {
    ok = true;  // first statement of the header's body
  }
  if (!ok) {
    throw Error(ErrorKind::NoTarget, test.start_line,
                "the preceding statement (line " + std::to_string(prev.start_line) +
                    ") is not at the same indentation");
  }

  TargetStatement target;
  target.kind = prev.kind;
  if (target.kind == StatementKind::Import) target.kind = StatementKind::Other;
  target.verbatim = prev.verbatim;
  target.start_line = prev.start_line;
  target.end_line = prev.end_line;
  if (target.kind == StatementKind::Assignment) target.assigned_names = assignment_targets(prev.verbatim);
  if (target.kind == StatementKind::IfHeader || target.kind == StatementKind::WhileHeader) {
    target.condition = header_condition(prev.verbatim);
    target.condition_operands = split_conditions(prev.verbatim);
  }
  return target;
}

std::vector<std::string> imported_names(std::string_view stmt) {
  const auto toks = lex::significant_tokens(stmt);
  std::vector<std::string> names;
  if (toks.empty()) return names;

  std::size_t i = 0;
  const bool from = lex::is_name(toks[0], stmt, "from");
  if (from) {
    while (i < toks.size() && !lex::is_name(toks[i], stmt, "import")) ++i;
  }
  ++i;  // past `import`
  while (i < toks.size()) {
    const Token& t = toks[i];
    if (lex::is_op(t, stmt, "(") || lex::is_op(t, stmt, ")") || lex::is_op(t, stmt, ",")) {
      ++i;
      continue;
    }
    if (lex::is_op(t, stmt, "*")) {
      names.emplace_back("*");
      ++i;
      continue;
    }
    if (t.kind != TokenKind::Name) {
      ++i;
      continue;
    }
    // dotted name [as alias]
    std::string bound(t.text(stmt));
    std::size_t k = i + 1;
    while (k + 1 < toks.size() && lex::is_op(toks[k], stmt, ".") && toks[k + 1].kind == TokenKind::Name) k += 2;
    if (k + 1 < toks.size() && lex::is_name(toks[k], stmt, "as")) {
      bound = std::string(toks[k + 1].text(stmt));
      k += 2;
    }
    names.push_back(std::move(bound));
    i = k;
  }
  return names;
}

std::string imported_module(std::string_view stmt) {
  const auto toks = lex::significant_tokens(stmt);
  if (toks.size() < 2) return {};
  std::size_t k = 1;
  std::string module;
  while (k < toks.size() && !lex::is_name(toks[k], stmt, "import") && !lex::is_name(toks[k], stmt, "as") &&
         !lex::is_op(toks[k], stmt, ",")) {
    module += toks[k].text(stmt);
    ++k;
  }
  return module;
}

namespace {

bool is_shim_import(std::string_view stmt) {
  const auto toks = lex::significant_tokens(stmt);
  if (toks.empty()) return false;
  auto is_shim = [](std::string_view module) {
    return module == kShimModule || module.starts_with(std::string(kShimModule) + ".");
  };
  if (lex::is_name(toks[0], stmt, "from")) return is_shim(imported_module(stmt));
  // `import a, itest.b as c`: any shim module taints the statement
  std::string module;
  for (std::size_t i = 1; i <= toks.size(); ++i) {
    if (i == toks.size() || lex::is_op(toks[i], stmt, ",")) {
      if (is_shim(module)) return true;
      module.clear();
    } else if (lex::is_name(toks[i], stmt, "as")) {
      if (is_shim(module)) return true;
      module.clear();
      ++i;  // skip alias
    } else {
      module += toks[i].text(stmt);
    }
  }
  return false;
}

void add_names(std::string_view expr, std::unordered_set<std::string>& out) {
  for (const Token& t : lex::significant_tokens(expr)) {
    if (t.kind == TokenKind::Name) out.emplace(t.text(expr));
  }
}

std::string without_groups(const std::string& expr) {
  std::string out;
  std::size_t at = 0;
  for (const auto& ref : find_group_refs(expr)) {
    out += expr.substr(at, ref.begin - at);
    out += "None";
    at = ref.end;
  }
  out += expr.substr(at);
  return out;
}

}  // namespace

std::vector<std::string> collect_imports(const SourceUnit& unit, const TargetStatement& target,
                                         const InlineTestDecl& decl, ImportPolicy policy) {
  std::unordered_set<std::string> used;
  add_names(target.verbatim, used);
  for (const Given& g : decl.givens) add_names(g.value, used);
  for (const Oracle& o : decl.oracles) {
    add_names(without_groups(o.lhs), used);
    add_names(without_groups(o.rhs), used);
  }

  std::vector<std::string> imports;
  for (const LogicalStatement& stmt : unit.statements) {
    if (stmt.kind != StatementKind::Import || is_shim_import(stmt.verbatim)) continue;
    bool take = policy == ImportPolicy::All;
    for (const auto& name : imported_names(stmt.verbatim)) {
      if (name == "*" || used.contains(name)) take = true;
    }
    if (take) imports.push_back(stmt.verbatim);
  }
  return imports;
}

Extraction extract(const SourceUnit& unit, ImportPolicy policy) {
  Extraction result;
  for (const std::size_t index : find_inline_tests(unit)) {
    const LogicalStatement& stmt = unit.statements[index];
    try {
      ExtractedTest test;
      test.decl = parse_chain(stmt, unit.path);
      test.target = resolve_target(unit, index);
      reject_reserved(lex::significant_tokens(test.target.verbatim), test.target.verbatim, test.target.start_line);
      test.imports = collect_imports(unit, test.target, test.decl, policy);
      result.tests.push_back(std::move(test));
    } catch (const Error& e) {
      result.problems.push_back(ExtractionProblem{e, stmt.start_line});
    }
  }
  return result;
}

}  // namespace itest
