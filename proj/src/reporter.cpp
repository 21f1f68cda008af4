#include "itest/reporter.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace itest {

using ojson = nlohmann::ordered_json;

TestReport summarize(std::vector<TestOutcome> outcomes, double suite_wall_ms) {
  TestReport report;
  for (const auto& o : outcomes) {
    switch (o.status) {
      case Status::Pass: ++report.counts.pass; break;
      case Status::Fail: ++report.counts.fail; break;
      case Status::Error: ++report.counts.error; break;
      case Status::Skipped: ++report.counts.skipped; break;
      case Status::Timeout: ++report.counts.timeout; break;
    }
  }
  report.outcomes = std::move(outcomes);
  report.suite_wall_ms = suite_wall_ms;
  return report;
}

int exit_code(const TestReport& report) {
  const auto& c = report.counts;
  return (c.fail + c.error + c.timeout) > 0 ? 1 : 0;
}

std::string current_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

namespace {

ojson outcome_to_json(const TestOutcome& o) {
  ojson r;
  r["id"] = o.id;
  r["file"] = o.file.generic_string();
  r["line"] = o.line;
  r["status"] = std::string(to_string(o.status));
  r["duration_ms"] = o.duration_ms;
  if (o.expected) r["expected"] = *o.expected;
  if (o.observed) r["observed"] = *o.observed;
  if (o.message) r["message"] = *o.message;
  return r;
}

TestOutcome outcome_from_json(const ojson& r) {
  TestOutcome o;
  o.id = r.at("id").get<std::string>();
  o.file = r.at("file").get<std::string>();
  o.line = r.at("line").get<int>();
  const auto status = parse_status(r.at("status").get<std::string>());
  if (!status) throw std::invalid_argument("unknown status in report");
  o.status = *status;
  o.duration_ms = r.at("duration_ms").get<double>();
  if (r.contains("expected")) o.expected = r["expected"].get<std::string>();
  if (r.contains("observed")) o.observed = r["observed"].get<std::string>();
  if (r.contains("message")) o.message = r["message"].get<std::string>();
  return o;
}

std::string html_escape(std::string_view text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string one_line(std::string_view text) {
  std::string out;
  for (const char c : text) {
    if (c == '\n') out += " | ";
    else if (c != '\r') out.push_back(c);
  }
  return out;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

void emit_console(const TestReport& report, std::ostream& out) {
  for (const auto& o : report.outcomes) {
    if (o.status == Status::Pass) continue;
    out << upper(to_string(o.status)) << ' ' << o.file.generic_string() << ':' << o.line << ' ' << o.id;
    if (o.expected) out << "  expected: " << one_line(*o.expected);
    if (o.observed) out << "  observed: " << one_line(*o.observed);
    if (o.message) out << "  (" << one_line(*o.message) << ')';
    out << '\n';
  }
  const auto& c = report.counts;
  if (c.total() == 0) {
    out << "0 tests\n";
    return;
  }
  out << c.total() << (c.total() == 1 ? " test: " : " tests: ") << c.pass << " passed, " << c.fail << " failed, "
      << c.error << " errors, " << c.skipped << " skipped, " << c.timeout << " timed out in " << std::fixed
      << std::setprecision(1) << report.suite_wall_ms << " ms\n";
  out.unsetf(std::ios::fixed);
}

void emit_html(const TestReport& report, std::ostream& out) {
  const auto& c = report.counts;
  out << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n"
      << "<title>Inline test report</title>\n<style>\n"
      << "body{font-family:sans-serif;margin:2em}table{border-collapse:collapse;margin-bottom:1.5em}"
      << "th,td{border:1px solid #bbb;padding:4px 8px;text-align:left;vertical-align:top}"
      << "th{background:#eee}td.pre{font-family:monospace;white-space:pre-wrap}"
      << ".pass{color:#1a7f37}.fail,.error,.timeout{color:#cf222e}.skipped{color:#9a6700}\n"
      << "</style>\n</head>\n<body>\n<h1>Inline test report</h1>\n";
  out << "<p>Started " << html_escape(report.started_at) << ", itest " << html_escape(report.tool_version)
      << ", suite wall time " << std::fixed << std::setprecision(1) << report.suite_wall_ms << " ms.</p>\n";
  out.unsetf(std::ios::fixed);
  out << "<table class=\"summary\">\n<tr><th>Tests</th><th>Passed</th><th>Failed</th><th>Errors</th>"
      << "<th>Skipped</th><th>Timed out</th></tr>\n<tr><td>" << c.total() << "</td><td>" << c.pass << "</td><td>"
      << c.fail << "</td><td>" << c.error << "</td><td>" << c.skipped << "</td><td>" << c.timeout
      << "</td></tr>\n</table>\n";
  out << "<table class=\"results\">\n<tr><th>Result</th><th>Test</th><th>Location</th><th>Duration (ms)</th>"
      << "<th>Expected</th><th>Observed</th><th>Message</th></tr>\n";
  for (const auto& o : report.outcomes) {
    const std::string status(to_string(o.status));
    out << "<tr class=\"outcome\"><td class=\"" << status << "\">" << upper(status) << "</td><td>"
        << html_escape(o.id) << "</td><td>" << html_escape(o.file.generic_string()) << ':' << o.line << "</td><td>"
        << std::fixed << std::setprecision(3) << o.duration_ms << "</td><td class=\"pre\">"
        << html_escape(o.expected.value_or("")) << "</td><td class=\"pre\">" << html_escape(o.observed.value_or(""))
        << "</td><td class=\"pre\">" << html_escape(o.message.value_or("")) << "</td></tr>\n";
    out.unsetf(std::ios::fixed);
  }
  out << "</table>\n</body>\n</html>\n";
}

}  // namespace

std::string to_json(const TestReport& report) {
  ojson doc;
  doc["version"] = kReportSchemaVersion;
  const auto& c = report.counts;
  doc["counts"] = ojson{{"pass", c.pass}, {"fail", c.fail}, {"error", c.error}, {"skipped", c.skipped},
                        {"timeout", c.timeout}};
  doc["suite_wall_ms"] = report.suite_wall_ms;
  doc["started_at"] = report.started_at;
  doc["tool_version"] = report.tool_version;
  doc["config"] = ojson::object();
  for (const auto& [k, v] : report.config_echo) doc["config"][k] = v;
  doc["outcomes"] = ojson::array();
  for (const auto& o : report.outcomes) doc["outcomes"].push_back(outcome_to_json(o));
  return doc.dump(2) + "\n";
}

TestReport report_from_json(const std::string& text) {
  const ojson doc = ojson::parse(text);
  TestReport report;
  const auto& c = doc.at("counts");
  report.counts = StatusCounts{c.at("pass").get<std::size_t>(), c.at("fail").get<std::size_t>(),
                               c.at("error").get<std::size_t>(), c.at("skipped").get<std::size_t>(),
                               c.at("timeout").get<std::size_t>()};
  report.suite_wall_ms = doc.at("suite_wall_ms").get<double>();
  report.started_at = doc.value("started_at", "");
  report.tool_version = doc.value("tool_version", "");
  if (doc.contains("config")) {
    for (const auto& [k, v] : doc["config"].items()) report.config_echo[k] = v.get<std::string>();
  }
  for (const auto& r : doc.at("outcomes")) report.outcomes.push_back(outcome_from_json(r));
  return report;
}

void emit(const TestReport& report, ReportFormat format, std::ostream& out) {
  switch (format) {
    case ReportFormat::Console: emit_console(report, out); break;
    case ReportFormat::Json: out << to_json(report); break;
    case ReportFormat::Html: emit_html(report, out); break;
  }
}

void emit(const TestReport& report, ReportFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::DestinationUnwritable, 0, "cannot open " + path.string());
  emit(report, format, out);
  out.flush();
  if (!out) throw Error(ErrorKind::DestinationUnwritable, 0, "cannot write " + path.string());
}

}  // namespace itest
