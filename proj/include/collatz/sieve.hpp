#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "collatz/natural.hpp"
#include "collatz/trajectory.hpp"

namespace collatz {

// Residue table for the k-step identity
//   T^k(q * 2^k + r) = q * 3^{c_k(r)} + s_k(r),   q >= 0,
// where c_k(r) counts odd values among r, T(r), ..., T^{k-1}(r) and s_k(r) = T^k(r).
// Residue r is eliminated when some j <= k has 3^{c_j(r)} < 2^j: then every
// n = q*2^k + r with q >= 1 falls below itself within j steps.
class SieveTable {
 public:
  static constexpr unsigned kMaxK = 24;
  static SieveTable build(unsigned k);

  unsigned k() const { return k_; }
  std::uint64_t size() const { return std::uint64_t{1} << k_; }

  unsigned odd_count(std::uint64_t r) const { return odd_[r]; }
  std::uint64_t endpoint(std::uint64_t r) const { return end_[r]; }
  bool eliminated(std::uint64_t r) const { return drop_[r] != 0; }
  // Least j with 3^{c_j(r)} < 2^j, or 0 if the residue survives.
  unsigned elimination_step(std::uint64_t r) const { return drop_[r]; }
  // Residues that must be followed during verification, ascending.
  const std::vector<std::uint32_t>& survivors() const { return survivors_; }
  // Eliminated residues whose drop was not confirmed at q = 1 (kept as survivors).
  std::uint64_t unconfirmed_eliminations() const { return unconfirmed_; }
  std::uint64_t power_of_three(unsigned c) const { return pow3_[c]; }

  Natural k_step(const Natural& n) const;

 private:
  unsigned k_ = 1;
  std::vector<std::uint8_t> odd_;
  std::vector<std::uint64_t> end_;
  std::vector<std::uint8_t> drop_;
  std::vector<std::uint32_t> survivors_;
  std::vector<std::uint64_t> pow3_;
  std::uint64_t unconfirmed_ = 0;
};

// True iff r -> (parity of T^j(r))_{j<k} is a bijection from Z/2^k onto {0,1}^k.
bool parity_bijection_check(unsigned k);

struct Counterexample {
  Natural n;
  std::string reason;  // "step-limit", "bit-limit"
  friend bool operator==(const Counterexample&, const Counterexample&) = default;
};

struct VerifyOptions {
  unsigned k = 16;
  unsigned workers = 1;
  std::string checkpoint_path;  // empty: no checkpointing
  IterationLimits limits{1'000'000, 1'024};
  // Stop after this many blocks past the resume point (leaves a resumable checkpoint).
  std::optional<std::uint64_t> stop_after_blocks;
  double checkpoint_interval_seconds = 0.5;
};

struct VerificationReport {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  unsigned k = 0;
  std::vector<Counterexample> counterexamples;  // ascending by n
  std::uint64_t survivors_checked = 0;
  unsigned workers = 1;
  std::uint64_t next_block = 0;   // first block not yet completed
  std::uint64_t end_block = 0;    // one past the last block of the range
  bool complete = false;
  bool resumed = false;
  double seconds = 0;
};

// Confirms every n in [lo, hi] falls below itself (or is 1) under T, skipping
// eliminated residue classes for n >= 2^k. With all n < lo already verified
// this establishes the conjecture on [lo, hi] by strong induction.
VerificationReport verify_range(std::uint64_t lo, std::uint64_t hi, const VerifyOptions& options);

// Per-start view of the verification logic, for cross-checking against naive iteration.
struct StartCheck {
  bool eliminated = false;       // skipped by the sieve
  unsigned elimination_step = 0;
  bool verified = false;         // fell below n (or n == 1) within limits
  std::uint64_t steps = 0;       // T-steps taken until the drop (multiple of k when k-stepping)
};
StartCheck check_start(const SieveTable& table, std::uint64_t n, const IterationLimits& limits);

// Checkpoint file handling (line-oriented text, see README).
struct Checkpoint {
  unsigned k = 0;
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::uint64_t next_block = 0;
  std::vector<Counterexample> counterexamples;
};
std::optional<Checkpoint> read_checkpoint(const std::string& path);
void write_checkpoint(const std::string& path, const Checkpoint& cp);

}  // namespace collatz
