#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "collatz/natural.hpp"

namespace collatz::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kDomainError = 1;
inline constexpr int kUnresolved = 2;
inline constexpr int kCounterexample = 3;
inline constexpr int kUsage = 64;

// Exact integer expressions for numeric arguments: decimal literals, `AeB`
// (A * 10^B), `A^B`, `*`, `+`, `-`, parentheses and `floor(pi*1eK)` for K <= 99.
// `100*floor(pi*1e35)` is 31415926535897932384626433832795028800.
Natural parse_natural(std::string_view text);

// Worker count from COLLATZ_LAB_THREADS, else the hardware concurrency.
unsigned default_workers();

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace collatz::cli
