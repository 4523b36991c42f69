#include "collatz/sieve.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "collatz/error.hpp"

namespace collatz {

namespace {

std::uint64_t t_small(std::uint64_t x) { return (x & 1) ? x + (x >> 1) + 1 : x >> 1; }

}  // namespace

SieveTable SieveTable::build(unsigned k) {
  if (k < 1 || k > kMaxK) {
    throw DomainError("sieve window k must be in [1, " + std::to_string(kMaxK) + "], got " +
                      std::to_string(k));
  }
  SieveTable t;
  t.k_ = k;
  const std::uint64_t size = std::uint64_t{1} << k;
  t.odd_.resize(size);
  t.end_.resize(size);
  t.drop_.resize(size);
  t.pow3_.resize(k + 1);
  t.pow3_[0] = 1;
  for (unsigned c = 1; c <= k; ++c) t.pow3_[c] = t.pow3_[c - 1] * 3;

  for (std::uint64_t r = 0; r < size; ++r) {
    std::uint64_t x = r;
    unsigned c = 0;
    unsigned drop = 0;
    for (unsigned j = 1; j <= k; ++j) {
      if (x & 1) ++c;
      x = t_small(x);
      if (!drop && t.pow3_[c] < (std::uint64_t{1} << j)) drop = j;
    }
    t.odd_[r] = static_cast<std::uint8_t>(c);
    t.end_[r] = x;
    t.drop_[r] = static_cast<std::uint8_t>(drop);

    bool skippable = drop != 0;
    if (skippable) {
      // The drop margin grows with q, so q = 1 is the tightest case.
      std::uint64_t y = size + r;
      for (unsigned j = 0; j < drop; ++j) y = t_small(y);
      if (y >= size + r) {
        skippable = false;
        ++t.unconfirmed_;
      }
    }
    if (!skippable) t.survivors_.push_back(static_cast<std::uint32_t>(r));
  }
  return t;
}

Natural SieveTable::k_step(const Natural& n) const {
  const std::uint64_t r = n.low_bits(k_);
  Natural out = n.shifted_right(k_);
  out *= pow3_[odd_[r]];
  out += end_[r];
  return out;
}

bool parity_bijection_check(unsigned k) {
  if (k < 1 || k > 20) throw DomainError("parity bijection check supports 1 <= k <= 20");
  const std::uint64_t size = std::uint64_t{1} << k;
  std::vector<bool> hit(size, false);
  for (std::uint64_t r = 0; r < size; ++r) {
    std::uint64_t x = r;
    std::uint64_t vec = 0;
    for (unsigned j = 0; j < k; ++j) {
      vec |= (x & 1) << j;
      x = t_small(x);
    }
    if (hit[vec]) return false;
    hit[vec] = true;
  }
  return true;
}

namespace {

unsigned bit_length(u128 x) {
  const auto hi = static_cast<std::uint64_t>(x >> 64);
  if (hi) return 128 - static_cast<unsigned>(__builtin_clzll(hi));
  const auto lo = static_cast<std::uint64_t>(x);
  return lo ? 64 - static_cast<unsigned>(__builtin_clzll(lo)) : 0;
}

// Plain T iteration until x < n or x == 1.
StartCheck descend_direct(std::uint64_t n, const IterationLimits& limits) {
  StartCheck c;
  if (n == 1) {
    c.verified = true;
    return c;
  }
  u128 x = n;
  while (x >= n) {
    if (c.steps >= limits.max_steps || bit_length(x) > limits.max_bits || x >= (u128{1} << 127)) return c;
    x = (x & 1) ? x + (x >> 1) + 1 : x >> 1;
    ++c.steps;
  }
  c.verified = true;
  return c;
}

// k-step iteration for n >= 2^k until the value falls below n.
StartCheck descend_sieved(const SieveTable& table, std::uint64_t n, const IterationLimits& limits) {
  StartCheck c;
  const unsigned k = table.k();
  const std::uint64_t mask = table.size() - 1;
  const u128 fast_limit = u128{1} << (127 - 2 * k);
  u128 x = n;
  while (x >= n) {
    if (c.steps >= limits.max_steps || bit_length(x) > limits.max_bits) return c;
    if (x >= fast_limit) {
      Natural big = table.k_step(Natural::from_u128(x));
      c.steps += k;
      while (big >= Natural(n)) {
        if (c.steps >= limits.max_steps || big.bit_length() > limits.max_bits) return c;
        big = table.k_step(big);
        c.steps += k;
      }
      c.verified = true;
      return c;
    }
    const auto r = static_cast<std::uint64_t>(x) & mask;
    x = (x >> k) * table.power_of_three(table.odd_count(r)) + table.endpoint(r);
    c.steps += k;
  }
  c.verified = true;
  return c;
}

}  // namespace

StartCheck check_start(const SieveTable& table, std::uint64_t n, const IterationLimits& limits) {
  if (n == 0) throw DomainError("verification starts at n >= 1");
  if (n < table.size()) return descend_direct(n, limits);
  const std::uint64_t r = n & (table.size() - 1);
  if (!std::binary_search(table.survivors().begin(), table.survivors().end(), static_cast<std::uint32_t>(r))) {
    StartCheck c;
    c.eliminated = true;
    c.elimination_step = table.elimination_step(r);
    c.verified = true;
    return c;
  }
  return descend_sieved(table, n, limits);
}

namespace {

struct BlockResult {
  std::uint64_t survivors = 0;
  std::vector<Counterexample> counterexamples;
};

std::string reason_for(const StartCheck& c, const IterationLimits& limits) {
  return c.steps >= limits.max_steps ? "step-limit" : "bit-limit";
}

BlockResult run_block(const SieveTable& table, std::uint64_t block, std::uint64_t lo, std::uint64_t hi,
                      const IterationLimits& limits) {
  BlockResult out;
  const unsigned k = table.k();
  const std::uint64_t base = block << k;
  auto record = [&](std::uint64_t n, const StartCheck& c) {
    ++out.survivors;
    if (!c.verified) out.counterexamples.push_back({Natural(n), reason_for(c, limits)});
  };
  if (block == 0) {
    const std::uint64_t end = std::min(hi, table.size() - 1);
    for (std::uint64_t n = std::max<std::uint64_t>(lo, 1); n <= end; ++n) record(n, descend_direct(n, limits));
    return out;
  }
  for (const std::uint32_t r : table.survivors()) {
    const std::uint64_t n = base + r;
    if (n < lo) continue;
    if (n > hi) break;
    record(n, descend_sieved(table, n, limits));
  }
  return out;
}

// Number of starts run_block follows, without following them.
std::uint64_t survivors_in_block(const SieveTable& table, std::uint64_t block, std::uint64_t lo,
                                 std::uint64_t hi) {
  const std::uint64_t base = block << table.k();
  if (block == 0) {
    const std::uint64_t end = std::min(hi, table.size() - 1);
    const std::uint64_t begin = std::max<std::uint64_t>(lo, 1);
    return end >= begin ? end - begin + 1 : 0;
  }
  if (base >= lo && base + table.size() - 1 <= hi) return table.survivors().size();
  std::uint64_t count = 0;
  for (const std::uint32_t r : table.survivors()) {
    const std::uint64_t n = base + r;
    if (n >= lo && n <= hi) ++count;
  }
  return count;
}

void sort_counterexamples(std::vector<Counterexample>& v) {
  std::sort(v.begin(), v.end(), [](const Counterexample& a, const Counterexample& b) { return a.n < b.n; });
}

}  // namespace

std::optional<Checkpoint> read_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string line;
  if (!std::getline(in, line)) throw DomainError("checkpoint " + path + " is empty");
  std::istringstream header(line);
  std::string version;
  Checkpoint cp;
  std::uint64_t count = 0;
  if (!(header >> version >> cp.k >> cp.lo >> cp.hi >> cp.next_block >> count) || version != "v1") {
    throw DomainError("checkpoint " + path + " has a malformed header: '" + line + "'");
  }
  for (std::uint64_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw DomainError("checkpoint " + path + " is truncated");
    std::istringstream row(line);
    std::string n;
    std::string reason;
    if (!(row >> n >> reason)) throw DomainError("checkpoint " + path + " has a malformed counterexample line");
    cp.counterexamples.push_back({Natural::from_string(n), reason});
  }
  return cp;
}

void write_checkpoint(const std::string& path, const Checkpoint& cp) {
  std::ostringstream os;
  os << "v1 " << cp.k << ' ' << cp.lo << ' ' << cp.hi << ' ' << cp.next_block << ' '
     << cp.counterexamples.size() << '\n';
  for (const auto& c : cp.counterexamples) os << c.n << ' ' << c.reason << '\n';
  const std::string data = os.str();

  const std::string tmp = path + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) throw std::runtime_error("cannot open checkpoint " + tmp + " for writing");
  const char* p = data.data();
  std::size_t left = data.size();
  while (left > 0) {
    const ssize_t w = ::write(fd, p, left);
    if (w < 0) {
      ::close(fd);
      throw std::runtime_error("write to checkpoint " + tmp + " failed");
    }
    p += w;
    left -= static_cast<std::size_t>(w);
  }
  if (::fsync(fd) != 0) {
    ::close(fd);
    throw std::runtime_error("fsync of checkpoint " + tmp + " failed");
  }
  ::close(fd);
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("cannot move checkpoint into place at " + path);
  }
}

VerificationReport verify_range(std::uint64_t lo, std::uint64_t hi, const VerifyOptions& options) {
  if (lo < 1 || lo > hi) throw DomainError("verification range needs 1 <= lo <= hi");
  options.limits.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const SieveTable table = SieveTable::build(options.k);
  const unsigned k = table.k();

  VerificationReport report;
  report.lo = lo;
  report.hi = hi;
  report.k = k;
  report.workers = std::max(1u, options.workers);
  const std::uint64_t first_block = lo >> k;
  report.end_block = (hi >> k) + 1;

  std::uint64_t next = first_block;
  if (!options.checkpoint_path.empty()) {
    if (auto cp = read_checkpoint(options.checkpoint_path)) {
      if (cp->k != k || cp->lo != lo || cp->hi != hi) {
        throw DomainError("checkpoint " + options.checkpoint_path + " belongs to a different run (k=" +
                          std::to_string(cp->k) + ", range " + std::to_string(cp->lo) + ".." +
                          std::to_string(cp->hi) + ")");
      }
      next = std::clamp(cp->next_block, first_block, report.end_block);
      report.counterexamples = std::move(cp->counterexamples);
      report.resumed = true;
      for (std::uint64_t b = first_block; b < next; ++b) report.survivors_checked += survivors_in_block(table, b, lo, hi);
    }
  }

  std::uint64_t stop_block = report.end_block;
  if (options.stop_after_blocks) stop_block = std::min(stop_block, next + *options.stop_after_blocks);

  std::mutex mu;
  std::condition_variable cv;
  std::map<std::uint64_t, BlockResult> done;
  std::atomic<std::uint64_t> dispatch{next};
  std::atomic<bool> failed{false};
  std::exception_ptr error;

  auto worker = [&] {
    try {
      while (!failed) {
        const std::uint64_t b = dispatch.fetch_add(1);
        if (b >= stop_block) break;
        BlockResult r = run_block(table, b, lo, hi, options.limits);
        std::lock_guard lock(mu);
        done.emplace(b, std::move(r));
        cv.notify_one();
      }
    } catch (...) {
      std::lock_guard lock(mu);
      if (!error) error = std::current_exception();
      failed = true;
      cv.notify_one();
    }
  };

  auto save = [&] {
    if (options.checkpoint_path.empty()) return;
    Checkpoint cp{k, lo, hi, next, report.counterexamples};
    write_checkpoint(options.checkpoint_path, cp);
  };

  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < report.workers; ++w) pool.emplace_back(worker);

    // The calling thread is the aggregator and the only checkpoint writer.
    auto last_save = std::chrono::steady_clock::now();
    std::unique_lock lock(mu);
    while (next < stop_block && !failed) {
      cv.wait(lock, [&] { return failed || done.contains(next); });
      bool advanced = false;
      while (!done.empty() && done.begin()->first == next) {
        BlockResult& r = done.begin()->second;
        report.survivors_checked += r.survivors;
        for (auto& c : r.counterexamples) report.counterexamples.push_back(std::move(c));
        done.erase(done.begin());
        ++next;
        advanced = true;
      }
      const auto now = std::chrono::steady_clock::now();
      if (advanced && (next == stop_block ||
                       std::chrono::duration<double>(now - last_save).count() >= options.checkpoint_interval_seconds)) {
        sort_counterexamples(report.counterexamples);
        lock.unlock();
        save();
        lock.lock();
        last_save = now;
      }
    }
  }
  if (error) std::rethrow_exception(error);

  sort_counterexamples(report.counterexamples);
  save();
  report.next_block = next;
  report.complete = next >= report.end_block;
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace collatz
