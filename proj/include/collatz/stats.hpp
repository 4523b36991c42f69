#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "collatz/natural.hpp"
#include "collatz/trajectory.hpp"

namespace collatz {

// Exact non-negative rational num/den, rendered by truncation toward zero.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_decimal(int places = 5) const;
  friend bool operator==(const Ratio& a, const Ratio& b) {
    return static_cast<u128>(a.num) * b.den == static_cast<u128>(b.num) * a.den;
  }
};

// One pass of T from n down to 1, using 128-bit arithmetic while the iterates
// fit and Natural beyond that.
struct TSummary {
  bool reached_one = false;
  Outcome outcome = Outcome::kHitStepLimit;  // kReachedOne, kHitStepLimit or kHitBitLimit
  std::uint64_t sigma = 0;                   // total stopping time when reached_one
  std::uint64_t odd_count = 0;               // odd values among x_0..x_{sigma-1}
  Natural peak;                              // max over k >= 1 (x_0 for n = 1)
  std::optional<std::uint64_t> stopping_time;  // least k >= 1 with x_k < n
};

TSummary summarize_t(const Natural& n, const IterationLimits& limits = {});

std::optional<std::uint64_t> total_stopping_time(const Natural& n, const IterationLimits& limits = {});

struct StoppingTime {
  enum Kind { kFinite, kInfinite, kUnknown } kind = kUnknown;
  std::uint64_t steps = 0;
};
StoppingTime stopping_time(const Natural& n, const IterationLimits& limits = {});

// odd_count / sigma; nullopt for n = 1 or when the trajectory is unresolved.
std::optional<Ratio> one_ratio(const Natural& n, const IterationLimits& limits = {});

// ln(max_{k>=1} T^k(n)) / ln n; nullopt for n = 1 or unresolved.
std::optional<double> rho(const Natural& n, const IterationLimits& limits = {});
std::optional<double> rho_from(const Natural& n, const Natural& peak);

// sigma_inf(n) / ln n; nullopt for n = 1 or unresolved.
std::optional<double> gamma(const Natural& n, const IterationLimits& limits = {});

// Parities of T^j(n) for j = 0..k-1 (1 = odd).
std::vector<std::uint8_t> parity_vector(const Natural& n, std::size_t k);

struct StatRecord {
  Natural n;
  std::optional<std::uint64_t> sigma_inf;
  StoppingTime stopping;
  std::optional<Ratio> one_ratio;
  std::optional<double> rho;
  std::optional<double> gamma;
  Natural max_iterate;
  Outcome outcome = Outcome::kReachedOne;
};

StatRecord compute_stats(const Natural& n, const IterationLimits& limits = {});

struct CensusRow {
  std::uint64_t sigma_inf = 0;
  std::uint64_t frequency = 0;
  std::optional<Ratio> one_ratio;  // of the first member; undefined when sigma_inf = 0
};

struct BlockCensus {
  Natural base;
  std::uint64_t length = 0;
  std::vector<CensusRow> rows;           // ascending sigma_inf
  std::vector<std::uint64_t> sigmas;     // sigma_inf(base + i), i = 0..length-1
  // Starts whose 1-ratio differs from the first member of their row.
  std::vector<std::uint64_t> ratio_mismatches;

  bool ratios_consistent() const { return ratio_mismatches.empty(); }
  // Differences between consecutive distinct sigma_inf values.
  std::vector<std::uint64_t> gaps() const;
};

// Throws LimitExceeded if any member's trajectory is unresolved.
BlockCensus block_census(const Natural& base, std::uint64_t length, const IterationLimits& limits = {},
                         unsigned workers = 1);

struct ReachCount {
  std::uint64_t reached = 0;
  std::uint64_t unresolved = 0;
};
ReachCount count_reaching_one(std::uint64_t x, const IterationLimits& limits = {}, unsigned workers = 1);

struct RealRecord {
  std::uint64_t n = 0;
  double value = 0;
};
struct PeakRecord {
  std::uint64_t n = 0;
  Natural peak;
};

struct RecordTable {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  // Running maxima in order of discovery; the last entry is the champion.
  std::vector<RealRecord> gamma;
  std::vector<RealRecord> rho;
  std::vector<PeakRecord> peak;
  double gamma_threshold = 0;
  std::uint64_t gamma_threshold_hits = 0;  // #{n : sigma_inf(n) >= threshold * ln n}
  std::uint64_t unresolved = 0;
};

RecordTable scan_records(std::uint64_t lo, std::uint64_t hi, double gamma_threshold = 6.143,
                         const IterationLimits& limits = {}, unsigned workers = 1);

}  // namespace collatz
