#include "collatz/trajectory.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "collatz/error.hpp"

namespace collatz {

void IterationLimits::validate() const {
  if (max_steps == 0 || max_bits == 0) throw DomainError("iteration limits must be positive");
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::kReachedOne: return "ReachedOne";
    case Outcome::kEnteredCycle: return "EnteredCycle";
    case Outcome::kHitStepLimit: return "HitStepLimit";
    case Outcome::kHitBitLimit: return "HitBitLimit";
    case Outcome::kHitUndefined: return "HitUndefined";
    case Outcome::kLeftDomain: return "LeftDomain";
  }
  return "?";
}

std::string Cycle::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < members.size(); ++i) os << (i ? "," : "") << members[i];
  os << ')';
  return os.str();
}

Cycle canonical_cycle(std::vector<Natural> orbit) {
  Cycle c;
  if (orbit.empty()) return c;
  const auto min_it = std::min_element(orbit.begin(), orbit.end());
  std::rotate(orbit.begin(), min_it, orbit.end());
  c.odd_count = static_cast<std::size_t>(
      std::count_if(orbit.begin(), orbit.end(), [](const Natural& v) { return v.is_odd(); }));
  c.members = std::move(orbit);
  return c;
}

namespace {

// Follows the orbit from a point known to be periodic and returns it canonically.
Cycle collect_cycle(const GeneralizedCollatzMap& map, const Natural& on_cycle) {
  std::vector<Natural> orbit{on_cycle};
  Natural x = map.apply(on_cycle).natural();
  while (x != on_cycle) {
    orbit.push_back(x);
    x = map.apply(x).natural();
  }
  return canonical_cycle(std::move(orbit));
}

std::size_t history_cost(const Natural& x) { return 64 + (x.bit_length() / 64 + 1) * 8; }

Natural advance(const GeneralizedCollatzMap& map, Natural x, std::uint64_t k) {
  for (std::uint64_t i = 0; i < k; ++i) x = map.apply(x).natural();
  return x;
}

// Exactly `count` steps from the start, rebuilding values and aggregates.
void replay(const GeneralizedCollatzMap& map, Trajectory& t, std::uint64_t count, bool store) {
  t.values.clear();
  if (store) t.values.push_back(t.start);
  t.odd_count = 0;
  t.peak = t.start;
  Natural x = t.start;
  for (std::uint64_t i = 0; i < count; ++i) {
    if (x.is_odd()) ++t.odd_count;
    x = map.apply(x).natural();
    if (i == 0 || x > t.peak) t.peak = x;
    if (store) t.values.push_back(x);
  }
  t.steps = count;
  t.last = x;
}

// Shared iteration core. `early_exit` is consulted after every step; when it
// returns true iteration stops and *exited is set.
template <class EarlyExit>
Trajectory walk(const GeneralizedCollatzMap& map, const Natural& n, const IterationLimits& limits,
                bool stop_at_one, const IterateOptions& options, EarlyExit&& early_exit,
                bool* exited) {
  limits.validate();
  if (n.is_zero()) throw DomainError("iteration starts must be positive integers");
  if (exited) *exited = false;

  Trajectory t;
  t.start = n;
  t.last = n;
  t.peak = n;
  if (options.store_values) t.values.push_back(n);
  if (stop_at_one && n.is_one()) {
    t.outcome = Outcome::kReachedOne;
    return t;
  }

  bool hashing = options.detection != CycleDetection::kBrent;
  std::unordered_set<Natural> seen;
  std::size_t history_bytes = 0;
  if (hashing) {
    seen.insert(n);
    history_bytes = history_cost(n);
  }
  Natural tortoise = n;
  std::uint64_t power = 1;
  std::uint64_t lam = 0;

  Natural x = n;
  while (true) {
    if (t.steps >= limits.max_steps) {
      t.outcome = Outcome::kHitStepLimit;
      break;
    }
    MapValue v = map.apply(x);
    if (!v.is_defined()) {
      t.outcome = Outcome::kHitUndefined;
      break;
    }
    if (sgn(v.integer()) <= 0) {
      t.outcome = Outcome::kLeftDomain;
      break;
    }
    if (x.is_odd()) ++t.odd_count;
    x = v.natural();
    ++t.steps;
    if (options.store_values) t.values.push_back(x);
    if (t.steps == 1 || x > t.peak) t.peak = x;
    if (x.bit_length() > limits.max_bits) {
      t.outcome = Outcome::kHitBitLimit;
      break;
    }
    if (stop_at_one && x.is_one()) {
      t.outcome = Outcome::kReachedOne;
      break;
    }
    if (early_exit(x)) {
      if (exited) *exited = true;
      break;
    }
    if (hashing) {
      if (!seen.insert(x).second) {
        t.outcome = Outcome::kEnteredCycle;
        t.cycle = collect_cycle(map, x);
        break;
      }
      history_bytes += history_cost(x);
      if (options.detection == CycleDetection::kAuto && history_bytes > options.history_budget_bytes) {
        hashing = false;
        seen = {};
        tortoise = x;
        power = 1;
        lam = 0;
      }
    } else {
      ++lam;
      if (x == tortoise) {
        // Period found; locate the first repeat index mu + lam from the start.
        Natural slow = n;
        Natural fast = advance(map, n, lam);
        std::uint64_t mu = 0;
        while (slow != fast) {
          slow = map.apply(slow).natural();
          fast = map.apply(fast).natural();
          ++mu;
        }
        replay(map, t, mu + lam, options.store_values);
        t.outcome = Outcome::kEnteredCycle;
        t.cycle = collect_cycle(map, slow);
        break;
      }
      if (lam == power) {
        tortoise = x;
        power *= 2;
        lam = 0;
      }
    }
  }
  t.last = x;
  return t;
}

}  // namespace

Trajectory iterate(const GeneralizedCollatzMap& map, const Natural& n, const IterationLimits& limits,
                   bool stop_at_one, const IterateOptions& options) {
  return walk(map, n, limits, stop_at_one, options, [](const Natural&) { return false; }, nullptr);
}

Trajectory iterate(const GeneralizedCollatzMap& map, const Natural& n, const IterationLimits& limits) {
  return iterate(map, n, limits, map.default_stop_at_one());
}

CycleSearch find_cycle(const GeneralizedCollatzMap& map, const Natural& n, const IterationLimits& limits,
                       CycleDetection detection) {
  IterateOptions options;
  options.store_values = false;
  options.detection = detection;
  Trajectory t = iterate(map, n, limits, false, options);
  return {t.outcome, std::move(t.cycle)};
}

namespace {

struct StartFate {
  enum Kind : std::uint8_t { kCycle, kUnresolved, kDescended } kind = kUnresolved;
  Outcome outcome = Outcome::kHitStepLimit;
  std::uint64_t descended_to = 0;
};

}  // namespace

CycleCensus cycle_census(const GeneralizedCollatzMap& map, std::uint64_t lo, std::uint64_t hi,
                         const IterationLimits& limits, unsigned workers) {
  if (lo < 1 || lo > hi) throw DomainError("cycle census needs 1 <= lo <= hi");
  limits.validate();
  workers = std::max(1u, workers);
  const std::uint64_t count = hi - lo + 1;
  std::vector<StartFate> fates(count);
  std::vector<std::set<Cycle>> found(workers);

  IterateOptions options;
  options.store_values = false;
  auto run = [&](unsigned w) {
    for (std::uint64_t i = w; i < count; i += workers) {
      const std::uint64_t start = lo + i;
      const Natural n(start);
      std::uint64_t landed = 0;
      bool exited = false;
      Trajectory t = walk(
          map, n, limits, false, options,
          [&](const Natural& x) {
            if (x < n && x.fits_u64() && x.to_u64() >= lo) {
              landed = x.to_u64();
              return true;
            }
            return false;
          },
          &exited);
      StartFate& f = fates[i];
      if (exited) {
        f.kind = StartFate::kDescended;
        f.descended_to = landed;
      } else if (t.outcome == Outcome::kEnteredCycle) {
        f.kind = StartFate::kCycle;
        found[w].insert(std::move(*t.cycle));
      } else {
        f.kind = StartFate::kUnresolved;
        f.outcome = t.outcome;
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }

  CycleCensus census;
  census.lo = lo;
  census.hi = hi;
  std::set<Cycle> all;
  for (auto& s : found) all.merge(s);
  census.cycles.assign(all.begin(), all.end());

  // Descents always go to smaller starts, so an ascending pass resolves them.
  std::vector<std::optional<UnresolvedStart>> root(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const StartFate& f = fates[i];
    if (f.kind == StartFate::kUnresolved) {
      root[i] = UnresolvedStart{lo + i, f.outcome, std::nullopt};
    } else if (f.kind == StartFate::kDescended) {
      const auto& parent = root[f.descended_to - lo];
      if (parent) root[i] = UnresolvedStart{lo + i, parent->outcome, parent->via.value_or(parent->start)};
    }
  }
  for (auto& r : root) {
    if (r) census.unresolved.push_back(*r);
  }
  return census;
}

Trajectory permutation_orbit(const Natural& n, const IterationLimits& limits, const IterateOptions& options) {
  static const GeneralizedCollatzMap u = permutation_u_map();
  return iterate(u, n, limits, false, options);
}

}  // namespace collatz
