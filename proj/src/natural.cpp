#include "collatz/natural.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "collatz/error.hpp"

namespace collatz {

namespace {

constexpr double kLn2 = 0.69314718055994530941723212145817656807550013436;

void set_u128(mpz_class& out, u128 v) {
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  const auto lo = static_cast<std::uint64_t>(v);
  out = hi;
  out <<= 64;
  out += lo;
}

}  // namespace

Natural::Natural(std::uint64_t v) : value_(static_cast<unsigned long>(v)) {}

Natural Natural::from_u128(u128 v) {
  Natural n;
  set_u128(n.value_, v);
  return n;
}

Natural Natural::from_string(std::string_view decimal) {
  if (decimal.empty() ||
      !std::all_of(decimal.begin(), decimal.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw DomainError("not a non-negative decimal integer: '" + std::string(decimal) + "'");
  }
  Natural n;
  n.value_.set_str(std::string(decimal), 10);
  return n;
}

Natural Natural::from_mpz(mpz_class v) {
  if (sgn(v) < 0) throw DomainError("negative value where a natural number is required");
  Natural n;
  n.value_ = std::move(v);
  return n;
}

std::string Natural::to_string() const { return value_.get_str(10); }

std::size_t Natural::bit_length() const {
  if (is_zero()) return 0;
  return mpz_sizeinbase(value_.get_mpz_t(), 2);
}

std::uint64_t Natural::to_u64() const { return mpz_get_ui(value_.get_mpz_t()); }

u128 Natural::to_u128() const {
  const u128 lo = mpz_getlimbn(value_.get_mpz_t(), 0);
  const u128 hi = mpz_size(value_.get_mpz_t()) > 1 ? mpz_getlimbn(value_.get_mpz_t(), 1) : 0;
  return (hi << 64) | lo;
}

double Natural::ln() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  // value = mantissa * 2^exp with mantissa in [0.5, 1).
  long exp = 0;
  const double mantissa = mpz_get_d_2exp(&exp, value_.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exp) * kLn2;
}

std::uint64_t Natural::low_bits(unsigned bits) const {
  if (is_zero()) return 0;
  const std::uint64_t limb = mpz_getlimbn(value_.get_mpz_t(), 0);
  return bits >= 64 ? limb : (limb & ((std::uint64_t{1} << bits) - 1));
}

Natural Natural::shifted_right(unsigned bits) const {
  Natural out;
  mpz_fdiv_q_2exp(out.value_.get_mpz_t(), value_.get_mpz_t(), bits);
  return out;
}

std::uint64_t Natural::mod_small(std::uint64_t d) const {
  return mpz_fdiv_ui(value_.get_mpz_t(), static_cast<unsigned long>(d));
}

Natural& Natural::operator+=(const Natural& rhs) {
  value_ += rhs.value_;
  return *this;
}

Natural& Natural::operator+=(std::uint64_t rhs) {
  mpz_add_ui(value_.get_mpz_t(), value_.get_mpz_t(), rhs);
  return *this;
}

Natural& Natural::operator*=(const Natural& rhs) {
  value_ *= rhs.value_;
  return *this;
}

Natural& Natural::operator*=(std::uint64_t rhs) {
  mpz_mul_ui(value_.get_mpz_t(), value_.get_mpz_t(), rhs);
  return *this;
}

Natural& Natural::divide_exact(std::uint64_t d) {
  if (d == 0 || mpz_divisible_ui_p(value_.get_mpz_t(), d) == 0) {
    throw DomainError("inexact division by " + std::to_string(d));
  }
  mpz_divexact_ui(value_.get_mpz_t(), value_.get_mpz_t(), d);
  return *this;
}

Natural& Natural::halve() {
  mpz_fdiv_q_2exp(value_.get_mpz_t(), value_.get_mpz_t(), 1);
  return *this;
}

std::size_t Natural::hash() const {
  const mpz_srcptr z = value_.get_mpz_t();
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  const std::size_t limbs = mpz_size(z);
  for (std::size_t i = 0; i < limbs; ++i) {
    h ^= static_cast<std::size_t>(mpz_getlimbn(z, static_cast<mp_size_t>(i))) + 0x9e3779b97f4a7c15ULL +
         (h << 6) + (h >> 2);
  }
  return h;
}

std::ostream& operator<<(std::ostream& os, const Natural& n) { return os << n.to_string(); }

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

}  // namespace collatz
