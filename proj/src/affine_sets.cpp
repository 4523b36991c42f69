#include "collatz/affine_sets.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "collatz/error.hpp"

namespace collatz {

namespace {

std::int64_t floor_mod(__int128 v, std::int64_t m) {
  auto r = static_cast<std::int64_t>(v % m);
  return r < 0 ? r + m : r;
}

}  // namespace

void AffineGenerator::validate() const {
  if (divisor < 1) throw DomainError("affine generator divisor must be positive");
  if (a == 0) throw DomainError("affine generator multiplier must be nonzero");
  const Guard g = guard.value_or(Guard{0, 1});
  if (g.modulus < 1 || g.residue < 0 || g.residue >= g.modulus) throw DomainError("affine guard needs 0 <= residue < modulus");
  // Inputs are residue + modulus*t; exact for all t iff both terms are.
  if (floor_mod(static_cast<__int128>(a) * g.residue + b, divisor) != 0 ||
      floor_mod(static_cast<__int128>(a) * g.modulus, divisor) != 0) {
    throw DomainError("affine generator " + to_string() + " does not give integers on its guarded inputs");
  }
}

std::optional<std::uint64_t> AffineGenerator::apply(std::uint64_t x) const {
  if (guard && floor_mod(x, guard->modulus) != guard->residue) return std::nullopt;
  const __int128 num = static_cast<__int128>(a) * x + b;
  if (num <= 0 || num % divisor != 0) return std::nullopt;
  const __int128 v = num / divisor;
  if (v > static_cast<__int128>(UINT64_MAX)) return UINT64_MAX;
  return static_cast<std::uint64_t>(v);
}

std::string AffineGenerator::to_string() const {
  std::ostringstream os;
  if (divisor != 1) os << '(';
  os << a << "x";
  if (b > 0) os << '+' << b;
  else if (b < 0) os << b;
  if (divisor != 1) os << ")/" << divisor;
  if (guard) os << " if x=" << guard->residue << " mod " << guard->modulus;
  return os.str();
}

namespace {

// Images of guarded generators are arithmetic progressions offset + step*t.
// Pairwise disjoint images of injective maps give every value at most one
// preimage, so exploration from the seeds never revisits a non-seed value.
bool images_disjoint(const std::vector<AffineGenerator>& gens) {
  struct Progression {
    __int128 offset;
    __int128 step;
  };
  std::vector<Progression> p;
  for (const auto& g : gens) {
    const Guard gd = g.guard.value_or(Guard{0, 1});
    p.push_back({(static_cast<__int128>(g.a) * gd.residue + g.b) / g.divisor,
                 static_cast<__int128>(g.a) * gd.modulus / g.divisor});
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const auto s = static_cast<std::int64_t>(std::gcd(static_cast<std::int64_t>(p[i].step < 0 ? -p[i].step : p[i].step),
                                                        static_cast<std::int64_t>(p[j].step < 0 ? -p[j].step : p[j].step)));
      if (s == 0 || (p[j].offset - p[i].offset) % s == 0) return false;
    }
  }
  return true;
}

bool all_expanding(const std::vector<AffineGenerator>& gens) {
  // (a x + b)/d > x for every x >= 1 iff a >= d and a - d + b > 0.
  return std::all_of(gens.begin(), gens.end(), [](const AffineGenerator& g) {
    return g.a >= g.divisor && g.a - g.divisor + g.b > 0;
  });
}

struct Explorer {
  const std::vector<AffineGenerator>& gens;
  const std::vector<std::uint64_t>& seeds;
  std::uint64_t bound;
  std::uint64_t ceiling;

  std::vector<std::uint64_t> members;
  std::uint64_t explored = 0;
  bool exceeded = false;

  bool is_seed(std::uint64_t v) const { return std::binary_search(seeds.begin(), seeds.end(), v); }

  // Depth-first over the preimage-free tree below `root`.
  void tree_walk(std::uint64_t root) {
    std::vector<std::uint64_t> stack{root};
    while (!stack.empty()) {
      const std::uint64_t v = stack.back();
      stack.pop_back();
      ++explored;
      if (v <= bound) members.push_back(v);
      for (const auto& g : gens) {
        const auto w = g.apply(v);
        if (!w || is_seed(*w)) continue;
        if (*w > ceiling) {
          exceeded = true;
          continue;
        }
        stack.push_back(*w);
      }
    }
  }
};

}  // namespace

ClosureSet closure_up_to(std::vector<std::uint64_t> seeds, std::vector<AffineGenerator> generators,
                         std::uint64_t bound, std::uint64_t ceiling, unsigned workers) {
  if (seeds.empty()) throw DomainError("closure needs at least one seed");
  if (generators.empty()) throw DomainError("closure needs at least one generator");
  for (const auto& g : generators) g.validate();
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  if (seeds.front() == 0) throw DomainError("closure seeds must be positive");
  if (bound < seeds.back()) throw DomainError("closure bound must be at least the largest seed");
  if (ceiling < bound) throw DomainError("closure ceiling must be at least the bound");

  ClosureSet out;
  out.seeds = seeds;
  out.bound = bound;
  out.ceiling = ceiling;

  if (images_disjoint(generators)) {
    // Split into independent subtrees: breadth-first until there are enough roots.
    workers = std::max(1u, workers);
    Explorer head{generators, seeds, bound, ceiling, {}};
    std::vector<std::uint64_t> roots = seeds;
    const std::size_t wanted = workers == 1 ? 1 : 64 * static_cast<std::size_t>(workers);
    while (!roots.empty() && roots.size() < wanted) {
      std::vector<std::uint64_t> next;
      for (const std::uint64_t v : roots) {
        ++head.explored;
        if (v <= bound) head.members.push_back(v);
        for (const auto& g : generators) {
          const auto w = g.apply(v);
          if (!w || head.is_seed(*w)) continue;
          if (*w > ceiling) {
            head.exceeded = true;
            continue;
          }
          next.push_back(*w);
        }
      }
      roots = std::move(next);
      if (workers == 1) break;
    }
    if (workers == 1) {
      // `roots` holds the children of the seeds; the seeds themselves are counted in head.
      for (const std::uint64_t r : roots) head.tree_walk(r);
      out.members = std::move(head.members);
      out.explored = head.explored;
      out.exceeded_ceiling = head.exceeded;
    } else {
      std::vector<Explorer> parts(workers, Explorer{generators, seeds, bound, ceiling, {}});
      {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
          pool.emplace_back([&, w] {
            for (std::size_t i = w; i < roots.size(); i += workers) parts[w].tree_walk(roots[i]);
          });
        }
      }
      out.members = std::move(head.members);
      out.explored = head.explored;
      out.exceeded_ceiling = head.exceeded;
      for (auto& p : parts) {
        out.members.insert(out.members.end(), p.members.begin(), p.members.end());
        out.explored += p.explored;
        out.exceeded_ceiling = out.exceeded_ceiling || p.exceeded;
      }
    }
  } else {
    // General case: breadth-first with a visited set.
    const bool use_bitmap = ceiling <= (std::uint64_t{1} << 31);
    std::vector<bool> bitmap(use_bitmap ? ceiling + 1 : 0, false);
    std::unordered_set<std::uint64_t> visited;
    auto mark = [&](std::uint64_t v) {
      if (use_bitmap) {
        if (bitmap[v]) return false;
        bitmap[v] = true;
        return true;
      }
      return visited.insert(v).second;
    };
    std::vector<std::uint64_t> frontier;
    for (const std::uint64_t s : seeds) {
      if (mark(s)) frontier.push_back(s);
    }
    while (!frontier.empty()) {
      std::vector<std::uint64_t> next;
      for (const std::uint64_t v : frontier) {
        ++out.explored;
        if (v <= bound) out.members.push_back(v);
        for (const auto& g : generators) {
          const auto w = g.apply(v);
          if (!w) continue;
          if (*w > ceiling) {
            out.exceeded_ceiling = true;
            continue;
          }
          if (mark(*w)) next.push_back(*w);
        }
      }
      frontier = std::move(next);
    }
  }
  std::sort(out.members.begin(), out.members.end());
  out.complete = !out.exceeded_ceiling || all_expanding(generators);
  out.generators = std::move(generators);
  return out;
}

std::vector<AffineGenerator> backward_collatz_generators() {
  return {AffineGenerator{2, 0, 1, std::nullopt}, AffineGenerator{2, -1, 3, Guard{2, 3}}};
}

std::vector<AffineGenerator> erdos_generators() {
  return {AffineGenerator{2, 1, 1, std::nullopt}, AffineGenerator{3, 1, 1, std::nullopt},
          AffineGenerator{6, 1, 1, std::nullopt}};
}

std::vector<AffineGenerator> klarner_generators() {
  return {AffineGenerator{2, 0, 1, std::nullopt}, AffineGenerator{3, 2, 1, std::nullopt},
          AffineGenerator{6, 3, 1, std::nullopt}};
}

ClosureSet backward_collatz_set(std::uint64_t bound, std::optional<std::uint64_t> ceiling, unsigned workers) {
  if (bound < 1) throw DomainError("S0 bound must be at least 1");
  std::uint64_t c = 0;
  if (ceiling) {
    c = *ceiling;
  } else if (bound > UINT64_MAX / 4 / kBackwardCeilingFactor) {
    throw DomainError("S0 bound too large for the default ceiling 2^20 * bound");
  } else {
    c = bound * kBackwardCeilingFactor;
  }
  return closure_up_to({1}, backward_collatz_generators(), bound, c, workers);
}

std::vector<DensityPoint> density_profile(const ClosureSet& set, const std::vector<std::uint64_t>& checkpoints) {
  std::vector<DensityPoint> out;
  std::uint64_t prev = 0;
  for (const std::uint64_t c : checkpoints) {
    if (c == 0 || c <= prev) throw DomainError("density checkpoints must be positive and strictly ascending");
    if (c > set.bound) {
      throw DomainError("density checkpoint " + std::to_string(c) + " exceeds the set bound " + std::to_string(set.bound));
    }
    const auto count = static_cast<std::uint64_t>(
        std::upper_bound(set.members.begin(), set.members.end(), c) - set.members.begin());
    out.push_back({c, count, Ratio{count, c}});
    prev = c;
  }
  return out;
}

}  // namespace collatz
