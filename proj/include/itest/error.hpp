#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace itest {

enum class ErrorKind {
  UnbalancedDelimiter,
  MalformedChain,
  NoOracle,
  BadParameterization,
  NoTarget,
  GroupIndexOutOfRange,
  GroupOnNonHeader,
  InterpreterNotFound,
  ProtocolViolation,
  DestinationUnwritable,
};

std::string_view to_string(ErrorKind kind);

// Every failure the toolchain reports carries a kind and, where it makes
// sense, the 1-based source line it refers to (0 when there is none).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, int line, const std::string& reason);

  ErrorKind kind() const noexcept { return kind_; }
  int line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  ErrorKind kind_;
  int line_;
  std::string reason_;
};

}  // namespace itest
