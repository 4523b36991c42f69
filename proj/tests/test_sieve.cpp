#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "collatz/error.hpp"
#include "collatz/maps.hpp"
#include "collatz/sieve.hpp"
#include "collatz/stats.hpp"

using namespace collatz;

namespace {

// Residue r survives iff no prefix j <= k of its parity sequence has 3^c < 2^j.
// Follows x = a*q + b symbolically with a = 2^(k-j) 3^c.
std::uint64_t oracle_survivors(unsigned k) {
  std::uint64_t count = 0;
  for (std::uint64_t r = 0; r < (std::uint64_t{1} << k); ++r) {
    mpz_class b = r;
    mpz_class pow3 = 1;
    bool dropped = false;
    for (unsigned j = 1; j <= k && !dropped; ++j) {
      if (mpz_odd_p(b.get_mpz_t())) {
        b = (3 * b + 1) / 2;
        pow3 *= 3;
      } else {
        b /= 2;
      }
      mpz_class two_j = mpz_class(1) << j;
      dropped = pow3 < two_j;
    }
    if (!dropped) ++count;
  }
  return count;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("collatz_lab_" + name + "_" + std::to_string(::getpid()))).string();
}

}  // namespace

TEST(Sieve, RejectsBadWindow) {
  EXPECT_THROW(SieveTable::build(0), DomainError);
  EXPECT_THROW(SieveTable::build(25), DomainError);
  EXPECT_THROW(parity_bijection_check(0), DomainError);
}

TEST(Sieve, SurvivorCountsMatchOracle) {
  std::uint64_t prev_num = 1, prev_den = 1;
  for (unsigned k = 1; k <= 16; ++k) {
    const SieveTable t = SieveTable::build(k);
    EXPECT_EQ(t.survivors().size(), oracle_survivors(k)) << "k=" << k;
    EXPECT_EQ(t.unconfirmed_eliminations(), 0u) << "k=" << k;
    // survivor fraction is non-increasing in k
    const std::uint64_t num = t.survivors().size(), den = t.size();
    EXPECT_LE(num * prev_den, prev_num * den) << "k=" << k;
    prev_num = num;
    prev_den = den;
  }
  EXPECT_EQ(SieveTable::build(16).survivors().size(), 2114u);
}

TEST(Sieve, EliminationIsSound) {
  const SieveTable t = SieveTable::build(12);
  std::mt19937_64 rng(5);
  for (std::uint64_t r = 0; r < t.size(); ++r) {
    if (!t.eliminated(r)) continue;
    for (int i = 0; i < 4; ++i) {
      const std::uint64_t q = 1 + rng() % 1000000;
      const std::uint64_t n = q * t.size() + r;
      Natural x(n);
      for (unsigned j = 0; j < t.elimination_step(r); ++j) x = t_step(x);
      ASSERT_LT(x, Natural(n)) << "r=" << r << " q=" << q;
    }
  }
}

TEST(Sieve, KStepMatchesDirectIteration) {
  std::vector<SieveTable> tables;
  for (unsigned k = 1; k <= 16; ++k) tables.push_back(SieveTable::build(k));
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 10000; ++i) {
    const unsigned k = 1 + static_cast<unsigned>(rng() % 16);
    const SieveTable& t = tables[k - 1];
    const std::uint64_t r = rng() & (t.size() - 1);
    Natural q(rng());
    q *= rng();
    Natural n = q;
    n *= t.size();
    n += r;
    Natural direct = n;
    for (unsigned s = 0; s < k; ++s) direct = t_step(direct);
    ASSERT_EQ(t.k_step(n), direct) << "k=" << k << " r=" << r;
    Natural identity = q;
    identity *= t.power_of_three(t.odd_count(r));
    identity += t.endpoint(r);
    ASSERT_EQ(identity, direct);
  }
}

TEST(Sieve, ParityMapIsBijective) {
  for (unsigned k = 1; k <= 16; ++k) EXPECT_TRUE(parity_bijection_check(k)) << k;
}

TEST(Sieve, StartChecksAgreeWithNaiveIteration) {
  const SieveTable t = SieveTable::build(16);
  std::mt19937_64 rng(99);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t n = 2 + rng() % 999999;
    const StartCheck c = check_start(t, n, {1'000'000, 1024});
    ASSERT_TRUE(c.verified) << n;
    const StoppingTime s = stopping_time(n);
    ASSERT_EQ(s.kind, StoppingTime::kFinite);
    if (c.eliminated) {
      ASSERT_LE(s.steps, c.elimination_step) << n;
    } else {
      // The drop is detected at the first k-step boundary at or after the stopping time,
      // or exactly for starts below 2^k where every step is direct.
      if (n < t.size()) ASSERT_EQ(c.steps, s.steps) << n;
      else ASSERT_GE(c.steps, s.steps) << n;
      Natural x(n);
      for (std::uint64_t j = 0; j < c.steps; ++j) x = t_step(x);
      ASSERT_LT(x, Natural(n)) << n;
    }
  }
}

TEST(Sieve, VerifiesSmallRanges) {
  for (unsigned k : {1u, 4u, 10u, 16u}) {
    VerifyOptions o;
    o.k = k;
    const VerificationReport r = verify_range(1, 200000, o);
    EXPECT_TRUE(r.complete);
    EXPECT_TRUE(r.counterexamples.empty());
    EXPECT_EQ(r.lo, 1u);
    EXPECT_EQ(r.hi, 200000u);
  }
  EXPECT_THROW(verify_range(0, 10, {}), DomainError);
  EXPECT_THROW(verify_range(10, 9, {}), DomainError);
}

TEST(Sieve, TightLimitsProduceCounterexamples) {
  VerifyOptions o;
  o.k = 4;
  o.limits = {8, 1024};
  const VerificationReport r = verify_range(1, 100, o);
  ASSERT_FALSE(r.counterexamples.empty());
  bool has27 = false;
  for (const auto& c : r.counterexamples) {
    EXPECT_EQ(c.reason, "step-limit");
    EXPECT_GT(stopping_time(c.n).steps, 4u) << c.n;
    has27 = has27 || c.n == Natural(27);
  }
  EXPECT_TRUE(has27);
  EXPECT_TRUE(std::is_sorted(r.counterexamples.begin(), r.counterexamples.end(),
                             [](const Counterexample& a, const Counterexample& b) { return a.n < b.n; }));
}

TEST(Sieve, DeterministicAcrossWorkers) {
  VerifyOptions o;
  o.limits = {200, 1024};  // some starts hit the limit, which gives a nontrivial list to compare
  o.k = 10;
  o.workers = 1;
  const VerificationReport one = verify_range(1000, 3'000'000, o);
  ASSERT_FALSE(one.counterexamples.empty());
  for (unsigned w : {2u, 3u, 5u}) {
    o.workers = w;
    const VerificationReport many = verify_range(1000, 3'000'000, o);
    EXPECT_EQ(many.counterexamples, one.counterexamples) << w;
    EXPECT_EQ(many.survivors_checked, one.survivors_checked) << w;
    EXPECT_EQ(many.workers, w);
  }
}

TEST(Sieve, CheckpointResumeMatchesStraightRun) {
  const std::string path = temp_path("resume");
  std::filesystem::remove(path);
  VerifyOptions o;
  o.k = 10;
  o.limits = {200, 1024};
  o.workers = 2;
  const VerificationReport straight = verify_range(5, 2'000'000, o);

  o.checkpoint_path = path;
  o.stop_after_blocks = 300;
  const VerificationReport first = verify_range(5, 2'000'000, o);
  EXPECT_FALSE(first.complete);
  EXPECT_GE(first.next_block, 300u);
  const auto cp = read_checkpoint(path);
  ASSERT_TRUE(cp);
  EXPECT_EQ(cp->next_block, first.next_block);
  EXPECT_EQ(cp->k, 10u);

  o.stop_after_blocks = 700;
  o.workers = 3;
  const VerificationReport second = verify_range(5, 2'000'000, o);
  EXPECT_TRUE(second.resumed);
  EXPECT_FALSE(second.complete);

  o.stop_after_blocks.reset();
  o.workers = 1;
  const VerificationReport done = verify_range(5, 2'000'000, o);
  EXPECT_TRUE(done.complete);
  EXPECT_TRUE(done.resumed);
  EXPECT_EQ(done.counterexamples, straight.counterexamples);
  EXPECT_EQ(done.survivors_checked, straight.survivors_checked);

  // A checkpoint from another run is refused.
  VerifyOptions other = o;
  other.k = 12;
  EXPECT_THROW(verify_range(5, 2'000'000, other), DomainError);
  std::filesystem::remove(path);
}

TEST(Sieve, CheckpointFormat) {
  const std::string path = temp_path("format");
  Checkpoint cp;
  cp.k = 16;
  cp.lo = 1;
  cp.hi = 1000000;
  cp.next_block = 7;
  cp.counterexamples = {{Natural(27), "step-limit"}};
  write_checkpoint(path, cp);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "v1 16 1 1000000 7 1");
  const auto back = read_checkpoint(path);
  ASSERT_TRUE(back);
  EXPECT_EQ(back->next_block, 7u);
  EXPECT_EQ(back->counterexamples, cp.counterexamples);
  {
    std::ofstream bad(path);
    bad << "v2 garbage\n";
  }
  EXPECT_THROW(read_checkpoint(path), DomainError);
  std::filesystem::remove(path);
  EXPECT_FALSE(read_checkpoint(path));
}
