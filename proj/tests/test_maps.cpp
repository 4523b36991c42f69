#include <gtest/gtest.h>

#include <set>

#include "collatz/error.hpp"
#include "collatz/maps.hpp"

using namespace collatz;

TEST(Maps, StepExamples) {
  EXPECT_EQ(collatz_step(1), Natural(4));
  EXPECT_EQ(collatz_step(4), Natural(2));
  EXPECT_EQ(collatz_step(6), Natural(3));
  EXPECT_EQ(t_step(1), Natural(2));
  EXPECT_EQ(t_step(2), Natural(1));
  EXPECT_EQ(t_step(7), Natural(11));
  EXPECT_EQ(collatz_permutation_u(1), Natural(1));
  EXPECT_EQ(collatz_permutation_u(8), Natural(12));
  EXPECT_EQ(collatz_permutation_u(7), Natural(5));
}

TEST(Maps, RejectZero) {
  EXPECT_THROW(collatz_step(0), DomainError);
  EXPECT_THROW(t_step(0), DomainError);
  EXPECT_THROW(collatz_permutation_u(0), DomainError);
}

TEST(Maps, TIsCComposedWithItself) {
  for (std::uint64_t x = 1; x <= 10000; ++x) {
    const Natural n(x);
    const Natural expect = x % 2 ? collatz_step(collatz_step(n)) : collatz_step(n);
    ASSERT_EQ(t_step(n), expect) << x;
  }
}

TEST(Maps, ThreeKFamily) {
  const auto t1 = make_3k_map(1);
  EXPECT_EQ(t1.modulus(), 2);
  EXPECT_EQ(t1.pairs(), (std::vector<CoefficientPair>{{1, 0}, {3, 1}}));
  EXPECT_TRUE(t1.relatively_prime_type());
  EXPECT_FALSE(t1.partial());
  EXPECT_EQ(make_3k_map(5).apply(1).natural(), Natural(4));  // (3*1+5)/2
  EXPECT_THROW(make_3k_map(3), DomainError);
  EXPECT_THROW(make_3k_map(9), DomainError);
  EXPECT_THROW(make_3k_map(0), DomainError);
  EXPECT_THROW(make_3k_map(-1), DomainError);
  EXPECT_NO_THROW(make_3k_map(7));
  EXPECT_NO_THROW(make_3k_map(11));
}

TEST(Maps, GeneralAdmissibility) {
  const auto t = make_general_map(2, {{1, 0}, {3, 1}}, false);
  EXPECT_TRUE(t.relatively_prime_type());
  const auto c = make_general_map(2, {{1, 0}, {6, 2}}, false);
  EXPECT_FALSE(c.relatively_prime_type());
  EXPECT_FALSE(c.partial());
  try {
    make_general_map(2, {{1, 0}, {1, 0}}, false);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("residue 1"), std::string::npos) << e.what();
  }
  const auto p = make_general_map(2, {{1, 0}, {1, 0}}, true);
  EXPECT_TRUE(p.partial());
  EXPECT_EQ(p.inadmissible_residues(), std::vector<std::int64_t>{1});
  EXPECT_FALSE(p.apply(3).is_defined());
  EXPECT_TRUE(p.apply(4).is_defined());
  EXPECT_THROW(make_general_map(1, {{1, 0}}, false), DomainError);
  EXPECT_THROW(make_general_map(3, {{1, 0}, {1, 0}}, false), DomainError);
}

TEST(Maps, ApplyExamples) {
  EXPECT_EQ(t_map().apply(3).natural(), Natural(5));
  EXPECT_EQ(five_x_plus_one_map().apply(7).natural(), Natural(18));
}

TEST(Maps, AdmissibleMapsAreTotalAndInadmissibleResiduesFail) {
  const std::vector<GeneralizedCollatzMap> maps = {t_map(), collatz_map(), five_x_plus_one_map(), permutation_u_map(),
                                                   make_3k_map(5), make_3k_map(13)};
  for (const auto& m : maps) {
    for (std::uint64_t x = 0; x < static_cast<std::uint64_t>(m.modulus()) * 1000; ++x) {
      const MapValue v = m.apply(x);
      ASSERT_TRUE(v.is_defined()) << m.name() << " at " << x;
      const auto& p = m.pairs()[x % static_cast<std::uint64_t>(m.modulus())];
      ASSERT_EQ(v.integer() * m.modulus(), mpz_class(p.a) * x + p.b);
    }
  }
  // Residues 1 and 2 of d=3 with (1,0) everywhere are inadmissible.
  const auto partial = make_general_map(3, {{1, 0}, {1, 0}, {1, 0}}, true);
  EXPECT_EQ(partial.inadmissible_residues(), (std::vector<std::int64_t>{1, 2}));
  for (const auto r : partial.inadmissible_residues()) {
    bool found = false;
    for (std::uint64_t x = static_cast<std::uint64_t>(r); x < 3000; x += 3) found = found || !partial.apply(x).is_defined();
    EXPECT_TRUE(found);
  }
}

TEST(Maps, PermutationIsInjective) {
  const std::uint64_t n = 100000;
  std::set<std::uint64_t> seen;
  for (std::uint64_t x = 1; x <= n; ++x) {
    const Natural u = collatz_permutation_u(x);
    ASSERT_TRUE(u.fits_u64());
    ASSERT_LE(u.to_u64(), 3 * n / 2);
    ASSERT_TRUE(seen.insert(u.to_u64()).second) << "U(" << x << ") repeated";
    ASSERT_EQ(permutation_u_map().apply(x).natural(), u);
  }
}

TEST(Maps, ThreeXPlusOneFormsAgree) {
  const auto a = make_3k_map(1);
  const auto b = make_general_map(2, {{1, 0}, {3, 1}}, false);
  EXPECT_EQ(a, b);
  for (std::uint64_t x = 1; x <= 10000; ++x) {
    const Natural n(x);
    ASSERT_EQ(a.apply(n).natural(), t_step(n));
    ASSERT_EQ(b.apply(n).natural(), t_step(n));
    ASSERT_EQ(collatz_map().apply(n).natural(), collatz_step(n));
  }
}

TEST(Maps, NegativeValuesAreReported) {
  const auto m = make_general_map(2, {{1, -4}, {1, -1}}, false);
  const MapValue v = m.apply(0);
  EXPECT_TRUE(v.is_negative());
  EXPECT_THROW(v.natural(), DomainError);
}

TEST(Maps, SpecParsing) {
  EXPECT_EQ(parse_map_spec("3x+1"), t_map());
  EXPECT_EQ(parse_map_spec("T"), t_map());
  EXPECT_EQ(parse_map_spec("collatz"), collatz_map());
  EXPECT_EQ(parse_map_spec("5x+1"), five_x_plus_one_map());
  EXPECT_EQ(parse_map_spec("U"), permutation_u_map());
  EXPECT_EQ(parse_map_spec("3x+5"), make_3k_map(5));
  EXPECT_EQ(parse_map_spec("d=2;pairs=(1,0),(3,1);partial=false"), t_map());
  const auto p = parse_map_spec("d=2;pairs=(1,0),(1,0);partial=true");
  EXPECT_TRUE(p.partial());
  EXPECT_THROW(parse_map_spec("d=2;pairs=(1,0),(1,0);partial=false"), DomainError);
  EXPECT_THROW(parse_map_spec("3x+3"), DomainError);
  EXPECT_THROW(parse_map_spec("nonsense"), DomainError);
  EXPECT_THROW(parse_map_spec("d=2;pairs=(1,0)"), DomainError);
  EXPECT_EQ(parse_map_spec(t_map().spec_string()), t_map());
  EXPECT_TRUE(t_map().default_stop_at_one());
  EXPECT_TRUE(collatz_map().default_stop_at_one());
  EXPECT_FALSE(five_x_plus_one_map().default_stop_at_one());
}
