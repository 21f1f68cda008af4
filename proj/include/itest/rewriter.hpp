#pragma once

#include <string>

#include "itest/scanner.hpp"

namespace itest {

// Source text with every inline-test statement removed (its physical lines
// included). Everything else is kept byte for byte.
std::string strip(const SourceUnit& unit);

// Source text where each inline test is replaced by `k` copies at the same
// indentation; copy j is renamed `<name>_dup<j>`. Precondition: k >= 1.
std::string duplicate(const SourceUnit& unit, int k);

// The `Here(...)` chain of `stmt` with its declared name replaced by
// `new_name` (a test_name argument is inserted when the chain had none).
std::string rename_chain(const LogicalStatement& stmt, const std::string& new_name);

}  // namespace itest
