#include "collatz/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "collatz/error.hpp"
#include "collatz/maps.hpp"

namespace collatz {

std::string Ratio::to_decimal(int places) const {
  u128 scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  const u128 scaled = static_cast<u128>(num) * scale / den;
  std::string whole = collatz::to_string(scaled / scale);
  std::string frac = collatz::to_string(scaled % scale);
  if (places == 0) return whole;
  return whole + "." + std::string(static_cast<std::size_t>(places) - frac.size(), '0') + frac;
}

namespace {

// Largest odd value whose (3x+1)/2 image still fits in 128 bits.
constexpr u128 kFastOddMax = u128{1} << 127;

void finish_slow(const Natural& start, Natural x, std::uint64_t steps, std::uint64_t odd, Natural peak,
                 const IterationLimits& limits, TSummary& s) {
  while (!x.is_one()) {
    if (steps >= limits.max_steps) {
      s.outcome = Outcome::kHitStepLimit;
      s.peak = std::move(peak);
      return;
    }
    if (x.is_odd()) {
      x *= 3;
      x += 1;
      ++odd;
    }
    x.halve();
    ++steps;
    if (x > peak) peak = x;
    if (!s.stopping_time && x < start) s.stopping_time = steps;
    if (x.bit_length() > limits.max_bits) {
      s.outcome = Outcome::kHitBitLimit;
      s.peak = std::move(peak);
      return;
    }
  }
  s.reached_one = true;
  s.outcome = Outcome::kReachedOne;
  s.sigma = steps;
  s.odd_count = odd;
  s.peak = std::move(peak);
}

}  // namespace

TSummary summarize_t(const Natural& n, const IterationLimits& limits) {
  limits.validate();
  if (n.is_zero()) throw DomainError("total stopping time is defined for n >= 1");
  TSummary s;
  s.peak = n;
  if (n.is_one()) {
    s.reached_one = true;
    s.outcome = Outcome::kReachedOne;
    return s;
  }
  if (!n.fits_u128() || n.bit_length() > limits.max_bits) {
    if (n.bit_length() > limits.max_bits) {
      s.outcome = Outcome::kHitBitLimit;
      return s;
    }
    finish_slow(n, n, 0, 0, Natural{}, limits, s);
    return s;
  }

  const u128 start = n.to_u128();
  u128 x = start;
  u128 peak = 0;
  std::uint64_t steps = 0;
  std::uint64_t odd = 0;
  const u128 bit_bound = limits.max_bits < 128 ? (u128{1} << limits.max_bits) : 0;
  while (x != 1) {
    if (steps >= limits.max_steps) {
      s.outcome = Outcome::kHitStepLimit;
      s.peak = Natural::from_u128(peak);
      return s;
    }
    if (x & 1) {
      if (x >= kFastOddMax) {
        finish_slow(n, Natural::from_u128(x), steps, odd, Natural::from_u128(peak), limits, s);
        return s;
      }
      x = x + (x >> 1) + 1;
      ++odd;
    } else {
      x >>= 1;
    }
    ++steps;
    if (x > peak) peak = x;
    if (!s.stopping_time && x < start) s.stopping_time = steps;
    if (bit_bound && x >= bit_bound) {
      s.outcome = Outcome::kHitBitLimit;
      s.peak = Natural::from_u128(peak);
      return s;
    }
  }
  s.reached_one = true;
  s.outcome = Outcome::kReachedOne;
  s.sigma = steps;
  s.odd_count = odd;
  s.peak = Natural::from_u128(peak);
  return s;
}

std::optional<std::uint64_t> total_stopping_time(const Natural& n, const IterationLimits& limits) {
  const TSummary s = summarize_t(n, limits);
  if (!s.reached_one) return std::nullopt;
  return s.sigma;
}

StoppingTime stopping_time(const Natural& n, const IterationLimits& limits) {
  if (n.is_zero()) throw DomainError("stopping time is defined for n >= 1");
  if (n.is_one()) return {StoppingTime::kInfinite, 0};
  const TSummary s = summarize_t(n, limits);
  // Reaching 1 from n >= 2 always passes below n, so stopping_time is set then.
  if (s.stopping_time) return {StoppingTime::kFinite, *s.stopping_time};
  return {StoppingTime::kUnknown, 0};
}

std::optional<Ratio> one_ratio(const Natural& n, const IterationLimits& limits) {
  const TSummary s = summarize_t(n, limits);
  if (!s.reached_one || s.sigma == 0) return std::nullopt;
  return Ratio{s.odd_count, s.sigma};
}

std::optional<double> rho_from(const Natural& n, const Natural& peak) {
  if (n < Natural(2)) return std::nullopt;
  return peak.ln() / n.ln();
}

std::optional<double> rho(const Natural& n, const IterationLimits& limits) {
  if (n.is_zero()) throw DomainError("rho is defined for n >= 1");
  if (n.is_one()) return std::nullopt;
  const TSummary s = summarize_t(n, limits);
  if (!s.reached_one) return std::nullopt;
  return rho_from(n, s.peak);
}

std::optional<double> gamma(const Natural& n, const IterationLimits& limits) {
  if (n.is_zero()) throw DomainError("gamma is defined for n >= 1");
  if (n.is_one()) return std::nullopt;
  const TSummary s = summarize_t(n, limits);
  if (!s.reached_one) return std::nullopt;
  return static_cast<double>(s.sigma) / n.ln();
}

std::vector<std::uint8_t> parity_vector(const Natural& n, std::size_t k) {
  if (n.is_zero()) throw DomainError("parity vector needs n >= 1");
  if (k == 0) throw DomainError("parity vector length must be at least 1");
  std::vector<std::uint8_t> bits;
  bits.reserve(k);
  Natural x = n;
  for (std::size_t j = 0; j < k; ++j) {
    bits.push_back(x.is_odd() ? 1 : 0);
    if (j + 1 < k) x = t_step(x);
  }
  return bits;
}

StatRecord compute_stats(const Natural& n, const IterationLimits& limits) {
  const TSummary s = summarize_t(n, limits);
  StatRecord r;
  r.n = n;
  r.outcome = s.outcome;
  r.max_iterate = s.peak;
  if (n.is_one()) {
    r.sigma_inf = 0;
    r.stopping = {StoppingTime::kInfinite, 0};
    return r;
  }
  r.stopping = s.stopping_time ? StoppingTime{StoppingTime::kFinite, *s.stopping_time}
                               : StoppingTime{StoppingTime::kUnknown, 0};
  if (!s.reached_one) return r;
  r.sigma_inf = s.sigma;
  r.one_ratio = Ratio{s.odd_count, s.sigma};
  r.rho = rho_from(n, s.peak);
  r.gamma = static_cast<double>(s.sigma) / n.ln();
  return r;
}

std::vector<std::uint64_t> BlockCensus::gaps() const {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 1; i < rows.size(); ++i) out.push_back(rows[i].sigma_inf - rows[i - 1].sigma_inf);
  return out;
}

namespace {

unsigned clamp_workers(unsigned workers, std::uint64_t items) {
  if (workers == 0) workers = 1;
  return static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(items, 1)));
}

// Runs body(begin, end, worker) over contiguous slices of [0, count).
template <class Body>
void for_slices(std::uint64_t count, unsigned workers, Body&& body) {
  workers = clamp_workers(workers, count);
  if (workers == 1) {
    body(std::uint64_t{0}, count, 0u);
    return;
  }
  std::vector<std::jthread> pool;
  const std::uint64_t per = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t b = std::min(count, per * w);
    const std::uint64_t e = std::min(count, b + per);
    pool.emplace_back([&body, b, e, w] { body(b, e, w); });
  }
}

}  // namespace

BlockCensus block_census(const Natural& base, std::uint64_t length, const IterationLimits& limits,
                         unsigned workers) {
  if (base.is_zero()) throw DomainError("census base must be >= 1");
  if (length == 0) throw DomainError("census length must be >= 1");
  std::vector<TSummary> summaries(length);
  for_slices(length, workers, [&](std::uint64_t b, std::uint64_t e, unsigned) {
    for (std::uint64_t i = b; i < e; ++i) summaries[i] = summarize_t(base + Natural(i), limits);
  });

  BlockCensus c;
  c.base = base;
  c.length = length;
  std::map<std::uint64_t, std::pair<CensusRow, std::uint64_t>> by_sigma;  // row, odd count of first member
  for (std::uint64_t i = 0; i < length; ++i) {
    const TSummary& s = summaries[i];
    if (!s.reached_one) {
      throw LimitExceeded("census aborted: trajectory of " + (base + Natural(i)).to_string() +
                          " unresolved (" + to_string(s.outcome) + ")");
    }
    c.sigmas.push_back(s.sigma);
    auto [it, inserted] = by_sigma.try_emplace(s.sigma);
    auto& [row, first_odd] = it->second;
    if (inserted) {
      row.sigma_inf = s.sigma;
      if (s.sigma > 0) row.one_ratio = Ratio{s.odd_count, s.sigma};
      first_odd = s.odd_count;
    } else if (s.odd_count != first_odd) {
      c.ratio_mismatches.push_back(i);
    }
    ++row.frequency;
  }
  for (auto& [sigma, entry] : by_sigma) c.rows.push_back(entry.first);
  return c;
}

ReachCount count_reaching_one(std::uint64_t x, const IterationLimits& limits, unsigned workers) {
  if (x < 1) throw DomainError("count_reaching_one needs X >= 1");
  const unsigned w = clamp_workers(workers, x);
  std::vector<ReachCount> partial(w);
  for_slices(x, w, [&](std::uint64_t b, std::uint64_t e, unsigned wi) {
    for (std::uint64_t i = b; i < e; ++i) {
      if (summarize_t(Natural(i + 1), limits).reached_one) ++partial[wi].reached;
      else ++partial[wi].unresolved;
    }
  });
  ReachCount total;
  for (const auto& p : partial) {
    total.reached += p.reached;
    total.unresolved += p.unresolved;
  }
  return total;
}

RecordTable scan_records(std::uint64_t lo, std::uint64_t hi, double gamma_threshold,
                         const IterationLimits& limits, unsigned workers) {
  if (lo < 2 || lo > hi) throw DomainError("record scan needs 2 <= lo <= hi");
  const std::uint64_t count = hi - lo + 1;
  const unsigned w = clamp_workers(workers, count);
  std::vector<RecordTable> local(w);
  for_slices(count, w, [&](std::uint64_t b, std::uint64_t e, unsigned wi) {
    RecordTable& t = local[wi];
    for (std::uint64_t i = b; i < e; ++i) {
      const std::uint64_t n = lo + i;
      const Natural nn(n);
      const TSummary s = summarize_t(nn, limits);
      if (!s.reached_one) {
        ++t.unresolved;
        continue;
      }
      const double ln_n = std::log(static_cast<double>(n));
      const double g = static_cast<double>(s.sigma) / ln_n;
      const double r = s.peak.ln() / ln_n;
      if (static_cast<double>(s.sigma) >= gamma_threshold * ln_n) ++t.gamma_threshold_hits;
      if (t.gamma.empty() || g > t.gamma.back().value) t.gamma.push_back({n, g});
      if (t.rho.empty() || r > t.rho.back().value) t.rho.push_back({n, r});
      if (t.peak.empty() || s.peak > t.peak.back().peak) t.peak.push_back({n, s.peak});
    }
  });

  // A global running maximum is always a slice-local one; filter in slice order.
  RecordTable out;
  out.lo = lo;
  out.hi = hi;
  out.gamma_threshold = gamma_threshold;
  for (const RecordTable& t : local) {
    out.gamma_threshold_hits += t.gamma_threshold_hits;
    out.unresolved += t.unresolved;
    for (const auto& g : t.gamma) {
      if (out.gamma.empty() || g.value > out.gamma.back().value) out.gamma.push_back(g);
    }
    for (const auto& r : t.rho) {
      if (out.rho.empty() || r.value > out.rho.back().value) out.rho.push_back(r);
    }
    for (const auto& p : t.peak) {
      if (out.peak.empty() || p.peak > out.peak.back().peak) out.peak.push_back(p);
    }
  }
  return out;
}

}  // namespace collatz
