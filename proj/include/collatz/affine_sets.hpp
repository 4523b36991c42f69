#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "collatz/stats.hpp"

namespace collatz {

struct Guard {
  std::int64_t residue = 0;
  std::int64_t modulus = 1;
};

// x -> (a*x + b) / divisor, applied only to inputs satisfying the guard.
struct AffineGenerator {
  std::int64_t a = 1;
  std::int64_t b = 0;
  std::int64_t divisor = 1;
  std::optional<Guard> guard;

  // Throws DomainError unless every guarded input gives an exact integer.
  void validate() const;
  // nullopt when the guard fails or the image is not a positive integer.
  std::optional<std::uint64_t> apply(std::uint64_t x) const;
  std::string to_string() const;
};

struct ClosureSet {
  std::vector<std::uint64_t> seeds;
  std::vector<AffineGenerator> generators;
  std::uint64_t bound = 0;    // members are reported up to this value
  std::uint64_t ceiling = 0;  // exploration discards values above it
  std::vector<std::uint64_t> members;  // ascending, all <= bound
  // Some image exceeded the ceiling and was discarded.
  bool exceeded_ceiling = false;
  // True when discarded images provably cannot lead back below the bound
  // (no overflow, or every generator maps x to something larger than x).
  bool complete = false;
  std::uint64_t explored = 0;  // distinct values visited, <= ceiling
};

// Smallest set containing the seeds and closed under the generators,
// explored up to `ceiling` and reported up to `bound`.
ClosureSet closure_up_to(std::vector<std::uint64_t> seeds, std::vector<AffineGenerator> generators,
                         std::uint64_t bound, std::uint64_t ceiling, unsigned workers = 1);

// S0: x -> 2x, and m -> (2m - 1)/3 on m ≡ 2 (mod 3) (the map 3x+2 -> 2x+1 read on members).
std::vector<AffineGenerator> backward_collatz_generators();
// S1 (Erdős): x -> 2x+1, 3x+1, 6x+1.
std::vector<AffineGenerator> erdos_generators();
// S2 (Klarner): x -> 2x, 3x+2, 6x+3.
std::vector<AffineGenerator> klarner_generators();

inline constexpr std::uint64_t kBackwardCeilingFactor = std::uint64_t{1} << 20;

// S0 with seeds {1}; ceiling defaults to 2^20 * bound.
ClosureSet backward_collatz_set(std::uint64_t bound, std::optional<std::uint64_t> ceiling = std::nullopt,
                                unsigned workers = 1);

struct DensityPoint {
  std::uint64_t checkpoint = 0;
  std::uint64_t count = 0;
  Ratio density;  // count / checkpoint
};

// Throws DomainError for checkpoints that are not ascending or exceed the set's bound.
std::vector<DensityPoint> density_profile(const ClosureSet& set, const std::vector<std::uint64_t>& checkpoints);

}  // namespace collatz
