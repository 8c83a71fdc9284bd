#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qcdense/circle.hpp"
#include "qcdense/errors.hpp"

using namespace qcdense;

TEST(UnitRational, CanonicalForm) {
  EXPECT_EQ(UnitRational(-1, 4), UnitRational(3, 4));
  EXPECT_EQ(UnitRational(5, 4), UnitRational(1, 4));
  EXPECT_EQ(UnitRational(2, 4).den(), 2);
  EXPECT_EQ(UnitRational(3, -6), UnitRational(1, 2));
  EXPECT_EQ(UnitRational(7, 7), UnitRational());
  EXPECT_EQ(UnitRational(7, 7).den(), 1);
  EXPECT_THROW(UnitRational(1, 0), InvalidArgument);
}

TEST(UnitRational, StringRoundTrip) {
  for (auto [a, b] : {std::pair{0, 1}, {1, 2}, {5, 12}, {-3, 7}}) {
    const UnitRational x(a, b);
    EXPECT_EQ(UnitRational::parse(x.to_string()), x);
  }
  EXPECT_EQ(UnitRational(1, 3).to_string(), "1/3");
  EXPECT_EQ(UnitRational::parse("-1/3"), UnitRational(2, 3));
  EXPECT_THROW(UnitRational::parse("1/0"), InvalidArgument);
  EXPECT_THROW(UnitRational::parse("x"), InvalidArgument);
}

TEST(Circle, AddExample) { EXPECT_EQ(circle_add(UnitRational(1, 3), UnitRational(2, 3)), UnitRational(0, 1)); }

TEST(Circle, PhiAgreesOnBothOverloads) {
  for (int a = -30; a <= 30; ++a)
    for (int b = 1; b <= 12; ++b) EXPECT_EQ(phi(a, b), phi(mpq_class(a, b)));
  const mpq_class big(mpz_class("123456789012345678901234567"), mpz_class(10));
  EXPECT_EQ(phi(big), UnitRational(7, 10));
}

TEST(Circle, PhiRejectsHugeDenominators) {
  EXPECT_THROW(phi(mpq_class(1, mpz_class("340282366920938463463374607431768211457"))), ArithmeticOverflow);
}

TEST(Circle, ScaleAndNegate) {
  EXPECT_EQ(circle_scale(3, UnitRational(1, 6)), UnitRational(1, 2));
  EXPECT_EQ(circle_scale(-3, UnitRational(1, 6)), UnitRational(1, 2));
  EXPECT_EQ(circle_scale(mpz_class("100000000000000000001"), UnitRational(1, 10)), UnitRational(1, 10));
  EXPECT_EQ(circle_neg(UnitRational(1, 5)), UnitRational(4, 5));
  EXPECT_EQ(signed_numerator(UnitRational(3, 4)), -1);
  EXPECT_EQ(signed_numerator(UnitRational(1, 2)), 1);
  EXPECT_EQ(element_order(UnitRational(4, 6)), 3);
}

TEST(Circle, TPlusBoundary) {
  EXPECT_TRUE(in_tplus(UnitRational()));
  EXPECT_TRUE(in_tplus(UnitRational(1, 4)));
  EXPECT_TRUE(in_tplus(UnitRational(3, 4)));
  EXPECT_FALSE(in_tplus(UnitRational(1, 3)));
  EXPECT_FALSE(in_tplus(UnitRational(1, 2)));
  EXPECT_FALSE(in_tplus(UnitRational(2, 3)));
}

TEST(Circle, TPlusMatchesRationalOracle) {
  for (std::int64_t d = 1; d <= 80; ++d)
    for (std::int64_t v = 0; v < d; ++v) {
      const bool expected = oracle::in_tplus(mpq_class(v, d));
      EXPECT_EQ(in_tplus(UnitRational(v, d)), expected) << v << "/" << d;
      EXPECT_EQ(residue_in_tplus(v, d), expected) << v << "/" << d;
    }
}

TEST(Circle, OrderingByValue) {
  EXPECT_LT(UnitRational(1, 3), UnitRational(1, 2));
  EXPECT_LT(UnitRational(), UnitRational(1, 100));
  EXPECT_GT(UnitRational(3, 4), UnitRational(2, 3));
}
