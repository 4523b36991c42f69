#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "collatz/maps.hpp"
#include "collatz/natural.hpp"

namespace collatz {

struct IterationLimits {
  std::uint64_t max_steps = 1'000'000;
  std::uint64_t max_bits = 100'000;

  // Throws DomainError unless both limits are positive.
  void validate() const;
};

enum class Outcome {
  kReachedOne,
  kEnteredCycle,
  kHitStepLimit,
  kHitBitLimit,
  kHitUndefined,
  // The map produced a value <= 0; public iteration is restricted to positive integers.
  kLeftDomain,
};

std::string to_string(Outcome o);
inline bool is_limit(Outcome o) { return o == Outcome::kHitStepLimit || o == Outcome::kHitBitLimit; }

// A periodic orbit in canonical rotation: smallest member first.
struct Cycle {
  std::vector<Natural> members;
  std::size_t odd_count = 0;

  std::size_t length() const { return members.size(); }
  std::string to_string() const;  // "(1,2)"

  friend bool operator==(const Cycle& a, const Cycle& b) { return a.members == b.members; }
  friend bool operator<(const Cycle& a, const Cycle& b) { return a.members < b.members; }
};

// Rotates `orbit` so its smallest member comes first and counts odd members.
Cycle canonical_cycle(std::vector<Natural> orbit);

enum class CycleDetection {
  kAuto,     // value-history hashing until the memory budget is spent, then Brent
  kHashing,  // hashing only; the budget is ignored
  kBrent,    // Brent's algorithm only
};

struct IterateOptions {
  bool store_values = true;
  CycleDetection detection = CycleDetection::kAuto;
  std::size_t history_budget_bytes = std::size_t{64} << 20;
};

struct Trajectory {
  Natural start;
  // x_0 = start, x_{i+1} = f(x_i). Empty when values were not stored.
  std::vector<Natural> values;
  Outcome outcome = Outcome::kHitStepLimit;
  std::optional<Cycle> cycle;  // set iff outcome == kEnteredCycle
  // Map applications performed. For a cycle this is the index of the first
  // repeated value, independent of the detection method.
  std::uint64_t steps = 0;
  // Aggregates kept even when values are not stored.
  Natural last;
  Natural peak;                 // max over x_1..x_steps (x_0 when steps == 0)
  std::uint64_t odd_count = 0;  // odd values among x_0..x_{steps-1}
};

Trajectory iterate(const GeneralizedCollatzMap& map, const Natural& n, const IterationLimits& limits,
                   bool stop_at_one, const IterateOptions& options = {});
// stop_at_one taken from the map's default.
Trajectory iterate(const GeneralizedCollatzMap& map, const Natural& n, const IterationLimits& limits);

struct CycleSearch {
  Outcome outcome = Outcome::kHitStepLimit;
  std::optional<Cycle> cycle;
};

CycleSearch find_cycle(const GeneralizedCollatzMap& map, const Natural& n, const IterationLimits& limits,
                       CycleDetection detection = CycleDetection::kAuto);

struct UnresolvedStart {
  std::uint64_t start = 0;
  Outcome outcome = Outcome::kHitStepLimit;
  // Set when the orbit fell onto a smaller start of the range whose own orbit was unresolved.
  std::optional<std::uint64_t> via;
};

struct CycleCensus {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::vector<Cycle> cycles;                // deduplicated, sorted
  std::vector<UnresolvedStart> unresolved;  // ascending by start
};

// Canonical cycles reached from every start in [lo, hi]. An orbit that drops
// to a smaller start m >= lo shares m's fate, so it is not followed further.
CycleCensus cycle_census(const GeneralizedCollatzMap& map, std::uint64_t lo, std::uint64_t hi,
                         const IterationLimits& limits, unsigned workers = 1);

// Orbit of n under the Collatz permutation U, with cycle detection.
Trajectory permutation_orbit(const Natural& n, const IterationLimits& limits,
                             const IterateOptions& options = {});

}  // namespace collatz
