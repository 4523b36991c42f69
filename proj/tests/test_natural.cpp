#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "collatz/error.hpp"
#include "collatz/natural.hpp"

using collatz::Natural;
using collatz::u128;

TEST(Natural, DecimalRoundTrip) {
  const std::string s = "31415926535897932384626433832795028800";
  EXPECT_EQ(Natural::from_string(s).to_string(), s);
  EXPECT_EQ(Natural::from_string("0").to_string(), "0");
  EXPECT_EQ(Natural(18446744073709551615ull).to_string(), "18446744073709551615");
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    std::string digits = std::to_string(1 + rng() % 9);
    const int len = static_cast<int>(rng() % 120);
    for (int j = 0; j < len; ++j) digits += static_cast<char>('0' + rng() % 10);
    EXPECT_EQ(Natural::from_string(digits).to_string(), digits);
  }
}

TEST(Natural, RejectsMalformedText) {
  EXPECT_THROW(Natural::from_string(""), collatz::DomainError);
  EXPECT_THROW(Natural::from_string("-3"), collatz::DomainError);
  EXPECT_THROW(Natural::from_string("12a"), collatz::DomainError);
  EXPECT_THROW(Natural::from_string(" 12"), collatz::DomainError);
  EXPECT_THROW(Natural::from_mpz(mpz_class(-1)), collatz::DomainError);
}

TEST(Natural, ExactSmallArithmetic) {
  Natural x = Natural::from_string("100000000000000000000000000000000000");
  x *= 3;
  x += 1;
  EXPECT_EQ(x.to_string(), "300000000000000000000000000000000001");
  // 10^35 = 10 * (10^6)^5 * ... ; compare against mpz directly
  EXPECT_EQ(x.mod_small(7), mpz_class(x.mpz() % 7).get_ui());
  Natural y = x;
  y.divide_exact(1);
  EXPECT_EQ(y, x);
  EXPECT_THROW(Natural(10).divide_exact(3), collatz::DomainError);
  Natural z(12);
  z.divide_exact(3);
  EXPECT_EQ(z, Natural(4));
  z.halve();
  EXPECT_EQ(z, Natural(2));
}

TEST(Natural, WidthConversions) {
  const u128 big = (u128{1} << 100) + 12345;
  const Natural n = Natural::from_u128(big);
  EXPECT_TRUE(n.fits_u128());
  EXPECT_FALSE(n.fits_u64());
  EXPECT_TRUE(n.to_u128() == big);
  EXPECT_EQ(n.bit_length(), 101u);
  EXPECT_EQ(collatz::to_string(big), n.to_string());
  EXPECT_EQ(n.low_bits(16), 12345u);
  EXPECT_EQ(n.shifted_right(100), Natural(1));
  EXPECT_EQ(Natural(0).bit_length(), 0u);
}

TEST(Natural, Ordering) {
  EXPECT_LT(Natural(3), Natural(4));
  EXPECT_GT(Natural::from_string("100000000000000000000000"), Natural(~0ull));
  EXPECT_TRUE(Natural(9).is_odd());
  EXPECT_TRUE(Natural(1).is_one());
  EXPECT_TRUE(Natural().is_zero());
}

TEST(Natural, Logarithm) {
  EXPECT_NEAR(Natural(1000).ln(), std::log(1000.0), 1e-12);
  const Natural n0 = Natural::from_string("31415926535897932384626433832795028800");
  EXPECT_NEAR(n0.ln(), 86.34037832662908, 1e-9);
  Natural huge(1);
  for (int i = 0; i < 3000; ++i) huge *= 2;
  EXPECT_NEAR(huge.ln(), 3000 * std::log(2.0), 1e-9);
  EXPECT_TRUE(std::isinf(Natural(0).ln()));
}
