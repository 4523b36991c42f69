#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace collatz {

using u128 = unsigned __int128;

// Arbitrary-precision non-negative integer. Every iterate of every map in the
// library is carried as a Natural; conversions from text or signed values
// reject negatives.
class Natural {
 public:
  Natural() = default;
  Natural(std::uint64_t v);  // NOLINT(google-explicit-constructor)

  static Natural from_u128(u128 v);
  // Parses a plain decimal digit string (no sign, no separators).
  static Natural from_string(std::string_view decimal);
  // Wraps a GMP integer; throws DomainError if negative.
  static Natural from_mpz(mpz_class v);

  std::string to_string() const;

  bool is_zero() const { return sgn(value_) == 0; }
  bool is_one() const { return value_ == 1; }
  bool is_odd() const { return mpz_odd_p(value_.get_mpz_t()) != 0; }
  bool is_even() const { return !is_odd(); }

  // Number of significant bits; 0 for zero.
  std::size_t bit_length() const;
  bool fits_u64() const { return mpz_fits_ulong_p(value_.get_mpz_t()) != 0; }
  bool fits_u128() const { return bit_length() <= 128; }
  std::uint64_t to_u64() const;  // requires fits_u64()
  u128 to_u128() const;          // requires fits_u128()

  // Natural logarithm; -inf for zero. Accurate to double precision.
  double ln() const;

  // Low `bits` bits (bits <= 64) and the remaining high part.
  std::uint64_t low_bits(unsigned bits) const;
  Natural shifted_right(unsigned bits) const;

  std::uint64_t mod_small(std::uint64_t d) const;

  Natural& operator+=(const Natural& rhs);
  Natural& operator+=(std::uint64_t rhs);
  Natural& operator*=(const Natural& rhs);
  Natural& operator*=(std::uint64_t rhs);
  // Exact division; throws DomainError if d does not divide.
  Natural& divide_exact(std::uint64_t d);
  Natural& halve();

  friend Natural operator+(Natural a, const Natural& b) { return a += b; }
  friend Natural operator*(Natural a, const Natural& b) { return a *= b; }
  friend Natural operator*(Natural a, std::uint64_t b) { return a *= b; }

  friend bool operator==(const Natural& a, const Natural& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Natural& a, const Natural& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  const mpz_class& mpz() const { return value_; }
  std::size_t hash() const;

 private:
  mpz_class value_;
};

std::ostream& operator<<(std::ostream& os, const Natural& n);

// Decimal text of an unsigned 128-bit value.
std::string to_string(u128 v);

}  // namespace collatz

template <>
struct std::hash<collatz::Natural> {
  std::size_t operator()(const collatz::Natural& n) const noexcept { return n.hash(); }
};
