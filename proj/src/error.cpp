#include "itest/error.hpp"

namespace itest {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnbalancedDelimiter: return "UnbalancedDelimiter";
    case ErrorKind::MalformedChain: return "MalformedChain";
    case ErrorKind::NoOracle: return "NoOracle";
    case ErrorKind::BadParameterization: return "BadParameterization";
    case ErrorKind::NoTarget: return "NoTarget";
    case ErrorKind::GroupIndexOutOfRange: return "GroupIndexOutOfRange";
    case ErrorKind::GroupOnNonHeader: return "GroupOnNonHeader";
    case ErrorKind::InterpreterNotFound: return "InterpreterNotFound";
    case ErrorKind::ProtocolViolation: return "ProtocolViolation";
    case ErrorKind::DestinationUnwritable: return "DestinationUnwritable";
  }
  return "Unknown";
}

namespace {

std::string format_message(ErrorKind kind, int line, const std::string& reason) {
  std::string msg(to_string(kind));
  if (line > 0) msg += " (line " + std::to_string(line) + ")";
  if (!reason.empty()) msg += ": " + reason;
  return msg;
}

}  // namespace

Error::Error(ErrorKind kind, int line, const std::string& reason)
    : std::runtime_error(format_message(kind, line, reason)),
      kind_(kind),
      line_(line),
      reason_(reason) {}

}  // namespace itest
