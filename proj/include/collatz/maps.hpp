#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "collatz/natural.hpp"

namespace collatz {

// Collatz function C: 3n+1 for odd n, n/2 for even n. Throws on n = 0.
Natural collatz_step(const Natural& n);

// 3x+1 function T: (3n+1)/2 for odd n, n/2 for even n. Throws on n = 0.
Natural t_step(const Natural& n);

// Collatz permutation U(2m) = 3m, U(4m+1) = 3m+1, U(4m+3) = 3m+2. Throws on n = 0.
Natural collatz_permutation_u(const Natural& n);

struct CoefficientPair {
  std::int64_t a = 0;
  std::int64_t b = 0;
  friend bool operator==(const CoefficientPair&, const CoefficientPair&) = default;
};

// Result of applying a generalized map: a (possibly negative) exact integer,
// or Undefined when the division is inexact on a partial map.
class MapValue {
 public:
  static MapValue undefined() { return MapValue(); }
  static MapValue defined(mpz_class v) { return MapValue(std::move(v)); }

  bool is_defined() const { return value_.has_value(); }
  bool is_negative() const { return value_ && sgn(*value_) < 0; }
  // The value as a Natural; throws DomainError if undefined or negative.
  Natural natural() const;
  const mpz_class& integer() const;

  std::string to_string() const { return value_ ? value_->get_str() : "undefined"; }

 private:
  MapValue() = default;
  explicit MapValue(mpz_class v) : value_(std::move(v)) {}
  std::optional<mpz_class> value_;
};

// f(x) = (a_i x + b_i) / d for x ≡ i (mod d). Immutable once constructed;
// admissibility per residue (i*a_i + b_i ≡ 0 mod d) is checked exactly.
class GeneralizedCollatzMap {
 public:
  std::int64_t modulus() const { return d_; }
  const std::vector<CoefficientPair>& pairs() const { return pairs_; }
  bool partial() const { return partial_; }
  bool relatively_prime_type() const { return relatively_prime_; }
  // Residues i for which i*a_i + b_i is not divisible by d.
  const std::vector<std::int64_t>& inadmissible_residues() const { return inadmissible_; }
  const std::string& name() const { return name_; }

  // Iteration stops at 1 by default only for the 3x+1 and Collatz maps.
  bool default_stop_at_one() const { return name_ == "3x+1" || name_ == "collatz"; }

  MapValue apply(const Natural& x) const;

  // Renders the `d=...;pairs=...;partial=...` form.
  std::string spec_string() const;

  friend bool operator==(const GeneralizedCollatzMap& a, const GeneralizedCollatzMap& b) {
    return a.d_ == b.d_ && a.pairs_ == b.pairs_;
  }

 private:
  friend GeneralizedCollatzMap make_general_map(std::int64_t, std::vector<CoefficientPair>, bool,
                                                std::string);
  std::int64_t d_ = 2;
  std::vector<CoefficientPair> pairs_;
  bool partial_ = false;
  bool relatively_prime_ = false;
  std::vector<std::int64_t> inadmissible_;
  std::string name_;
};

// Validates and builds a generalized map. If some residue is inadmissible and
// allow_partial is false, throws DomainError naming the first offending residue.
GeneralizedCollatzMap make_general_map(std::int64_t d, std::vector<CoefficientPair> pairs,
                                       bool allow_partial, std::string name = {});

// The 3x+k function, k ≡ 1 or 5 (mod 6).
GeneralizedCollatzMap make_3k_map(std::int64_t k);

GeneralizedCollatzMap t_map();          // 3x+1 function T
GeneralizedCollatzMap collatz_map();    // C written as d=2, (1,0),(6,2)
GeneralizedCollatzMap five_x_plus_one_map();
GeneralizedCollatzMap permutation_u_map();  // U as d=4, (6,0),(3,1),(6,0),(3,-1)

// Parses either a named shorthand (`3x+1`, `collatz`, `5x+1`, `3x+<k>`, `U`)
// or `d=<int>;pairs=(a0,b0),(a1,b1),...;partial=<bool>`.
GeneralizedCollatzMap parse_map_spec(std::string_view text);

}  // namespace collatz
