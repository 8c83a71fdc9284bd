#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qcdense/errors.hpp"
#include "qcdense/groups.hpp"

using namespace qcdense;

namespace {

const PrimeList k235{2, 3, 5};

ProfiniteElem ip(long m) { return ProfiniteElem::integer(m); }

SolenoidPoint sp(long num, long den, long h = 0) { return SolenoidPoint(mpq_class(num, den), ip(h)); }

}  // namespace

TEST(Primes, BelowAndValidate) {
  EXPECT_EQ(primes_below(20), (PrimeList{2, 3, 5, 7, 11, 13, 17, 19}));
  EXPECT_EQ(primes_below(100), oracle::primes_below(100));
  EXPECT_EQ(primes_below(100).size(), 25u);
  EXPECT_THROW(validate_primes({3, 2}), InvalidArgument);
  EXPECT_THROW(validate_primes({2, 4}), InvalidArgument);
  EXPECT_THROW(validate_primes({2, 2}), InvalidArgument);
  EXPECT_NO_THROW(validate_primes({2, 5, 11}));
}

TEST(KSequence, Examples) {
  EXPECT_EQ(k_sequence(k235, 0), 1);
  EXPECT_EQ(k_sequence(k235, 2), 36);
  EXPECT_EQ(k_sequence(k235, 3), 27000);
  EXPECT_THROW(k_sequence(k235, 4), IndexOutOfRange);
}

TEST(KSequence, MatchesOracleAndDivisibility) {
  const PrimeList ps = primes_below(40);
  const KSequence ks(ps);
  for (std::size_t n = 0; n <= ps.size(); ++n) {
    EXPECT_EQ(ks.k(n), oracle::k(ps, n));
    EXPECT_EQ(k_sequence(ps, n), oracle::k(ps, n));
    for (std::size_t i = 0; i < n; ++i) {
      mpz_class pn;
      mpz_ui_pow_ui(pn.get_mpz_t(), ps[i], n);
      EXPECT_EQ(ks.k(n) % pn, 0);
    }
    for (std::uint64_t b : {2u, 7u, 360u, 9973u}) EXPECT_EQ(ks.k_mod(n, b), mpz_class(oracle::k(ps, n) % b).get_ui());
  }
  EXPECT_THROW(ks.k(ps.size() + 1), IndexOutOfRange);
}

TEST(ResidueMod, Examples) {
  EXPECT_EQ(residue_mod(ip(7), 3), 1u);
  EXPECT_EQ(residue_mod(ip(-1), 4), 3u);
  const auto h = ProfiniteElem::residues({{2, 2, 1}, {3, 1, 2}});
  EXPECT_EQ(residue_mod(h, 12), 5u);
}

TEST(ResidueMod, InsufficientPrecision) {
  const auto h = ProfiniteElem::residues({{2, 2, 1}, {3, 1, 2}});
  try {
    residue_mod(h, 8);
    FAIL() << "expected InsufficientPrecision";
  } catch (const InsufficientPrecision& e) {
    EXPECT_EQ(e.prime(), 2u);
    EXPECT_EQ(e.needed_exponent(), 3u);
  }
  EXPECT_THROW(residue_mod(h, 5), InsufficientPrecision);
  EXPECT_THROW(residue_mod(ip(1), 0), InvalidArgument);
}

TEST(ResidueMod, Homomorphism) {
  const GroupDesc g = GroupDesc::profinite(k235);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> dist(-100000, 100000);
  for (int t = 0; t < 300; ++t) {
    const ProfiniteElem x = (t % 2) ? to_residues(ip(dist(rng)), k235, 6) : ip(dist(rng));
    const ProfiniteElem y = (t % 3) ? to_residues(ip(dist(rng)), k235, 6) : ip(dist(rng));
    const auto sum = std::get<ProfiniteElem>(group_add(g, x, y));
    for (std::uint64_t b : {2u, 12u, 30u, 360u, 729u}) {
      EXPECT_EQ(residue_mod(sum, b), (residue_mod(x, b) + residue_mod(y, b)) % b);
    }
  }
}

TEST(InWn, ExamplesAndChain) {
  EXPECT_TRUE(in_Wn(ip(1), k235, 0));
  EXPECT_TRUE(in_Wn(ip(2), k235, 1));
  EXPECT_FALSE(in_Wn(ip(1), k235, 1));
  EXPECT_THROW(in_Wn(ip(1), k235, 4), InsufficientPrecision);
  for (long m = -500; m <= 500; ++m)
    for (std::size_t n = 0; n < 3; ++n) {
      const bool here = in_Wn(ip(m), k235, n + 1);
      if (here) EXPECT_TRUE(in_Wn(ip(m), k235, n));
      EXPECT_EQ(here, oracle::in_w(k235, n + 1, m));
    }
  EXPECT_TRUE(in_Wn(to_residues(ip(36), k235, 4), k235, 2));
  EXPECT_FALSE(in_Wn(to_residues(ip(18), k235, 4), k235, 2));
}

TEST(GroupLaw, Examples) {
  const GroupDesc t = GroupDesc::torus();
  EXPECT_EQ(std::get<UnitRational>(group_add(t, UnitRational(1, 3), UnitRational(2, 3))), UnitRational());
  const GroupDesc h = GroupDesc::profinite(k235);
  EXPECT_TRUE(group_equal(h, group_add(h, ip(2), ip(3)), ip(5)));
  EXPECT_TRUE(std::get<ProfiniteElem>(group_add(h, ip(2), ip(3))).is_integer_point());
  const GroupDesc c = GroupDesc::solenoid(k235);
  const Element twice = group_add(c, sp(1, 2), sp(1, 2));
  EXPECT_TRUE(group_equal(c, twice, sp(1, 1)));
  EXPECT_TRUE(group_equal(c, twice, SolenoidPoint(mpq_class(0), ip(-1))));
  EXPECT_TRUE(group_equal(c, SolenoidPoint(mpq_class(0), ip(1)), sp(-1, 1)));
}

TEST(GroupLaw, SolenoidCanonicalForm) {
  const SolenoidPoint p(mpq_class(1, 3), ip(5));
  EXPECT_EQ(p.r(), mpq_class(-14, 3));
  EXPECT_TRUE(p.h().is_exact_zero());
  EXPECT_TRUE(p.arc());
  const SolenoidPoint q(mpq_class(1, 3), to_residues(ip(5), k235, 3));
  EXPECT_FALSE(q.arc());
}

TEST(GroupLaw, SolenoidEqualityInvariantUnderU) {
  const GroupDesc c = GroupDesc::solenoid(k235);
  for (long m = -6; m <= 6; ++m)
    for (long a = -3; a <= 3; ++a) {
      const SolenoidPoint x(mpq_class(a, 7), ip(4));
      const SolenoidPoint y(mpq_class(a, 7) + m, ip(4 + m));
      EXPECT_TRUE(group_equal(c, x, y));
      const SolenoidPoint z(mpq_class(a, 7) + m, to_residues(ip(4 + m), k235, 5));
      EXPECT_TRUE(group_equal(c, x, z));
    }
  EXPECT_FALSE(group_equal(c, sp(1, 2), sp(1, 3)));
  EXPECT_FALSE(group_equal(c, sp(1, 1), sp(0, 1)));
}

namespace {

void check_laws(const GroupDesc& g, const std::vector<Element>& xs) {
  const Element zero = group_zero(g);
  for (const auto& x : xs) {
    EXPECT_TRUE(group_equal(g, group_add(g, x, zero), x));
    EXPECT_TRUE(group_equal(g, group_add(g, x, group_neg(g, x)), zero));
    EXPECT_TRUE(group_equal(g, group_scale(g, 3, x), group_add(g, x, group_add(g, x, x))));
    for (const auto& y : xs) {
      EXPECT_TRUE(group_equal(g, group_add(g, x, y), group_add(g, y, x)));
      for (const auto& z : xs)
        EXPECT_TRUE(group_equal(g, group_add(g, group_add(g, x, y), z), group_add(g, x, group_add(g, y, z))));
    }
  }
}

}  // namespace

TEST(GroupLaw, AbelianGroupAxiomsPerKind) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> small(-40, 40), den(1, 12);
  std::vector<Element> tor, pro, sol, cyc, prod;
  for (int i = 0; i < 8; ++i) {
    tor.emplace_back(phi(small(rng), den(rng)));
    pro.emplace_back(i % 2 ? ip(small(rng)) : to_residues(ip(small(rng)), k235, 4));
    sol.emplace_back(SolenoidPoint(mpq_class(small(rng), den(rng)), i % 3 ? ip(small(rng)) : to_residues(ip(small(rng)), k235, 4)));
    cyc.emplace_back(CyclicElem{static_cast<std::uint64_t>(small(rng) + 40) % 9});
    prod.emplace_back(ProductElem{{tor.back(), cyc.back()}});
  }
  check_laws(GroupDesc::torus(), tor);
  check_laws(GroupDesc::profinite(k235), pro);
  check_laws(GroupDesc::solenoid(k235), sol);
  check_laws(GroupDesc::cyclic(9), cyc);
  check_laws(GroupDesc::product({GroupDesc::torus(), GroupDesc::cyclic(9)}), prod);
}

TEST(GroupLaw, MixedPrecision) {
  const GroupDesc h = GroupDesc::profinite(k235);
  const auto deep = to_residues(ip(100), k235, 6);
  const auto shallow = to_residues(ip(7), k235, 3);
  const auto sum = std::get<ProfiniteElem>(group_add(h, deep, shallow));
  EXPECT_TRUE(sum.truncated());
  for (const auto& d : sum.digits()) EXPECT_EQ(d.exponent, 3u);
  EXPECT_EQ(residue_mod(sum, 8 * 27 * 125), 107u);
  const auto coerced = std::get<ProfiniteElem>(group_add(h, ip(5), shallow));
  EXPECT_FALSE(coerced.is_integer_point());
  EXPECT_FALSE(coerced.truncated());
  EXPECT_EQ(residue_mod(coerced, 1000), 12u);
  const auto other = ProfiniteElem::residues({{2, 3, 1}, {7, 2, 3}});
  EXPECT_THROW(group_add(h, deep, other), PrecisionMismatch);
}

TEST(Elements, Validation) {
  EXPECT_THROW(ProfiniteElem::residues({{2, 2, 4}}), InvalidArgument);
  EXPECT_THROW(ProfiniteElem::residues({{3, 1, 0}, {2, 1, 0}}), InvalidArgument);
  EXPECT_THROW(ProfiniteElem::residues({{4, 1, 0}}), InvalidArgument);
  EXPECT_THROW(check_element(GroupDesc::torus(), ip(1)), KindMismatch);
  EXPECT_THROW(check_element(GroupDesc::cyclic(5), CyclicElem{5}), KindMismatch);
  EXPECT_THROW(check_element(GroupDesc::product({GroupDesc::torus()}), ProductElem{}), KindMismatch);
  EXPECT_NO_THROW(check_element(GroupDesc::solenoid(k235), sp(1, 2)));
}

TEST(Elements, HashAgreesWithEquality) {
  const GroupDesc c = GroupDesc::solenoid(k235);
  const Element a = sp(-3, 1);
  const Element b = SolenoidPoint(mpq_class(-1), ip(2));
  EXPECT_TRUE(group_equal(c, a, b));
  EXPECT_EQ(element_hash(a), element_hash(b));
  EXPECT_EQ(element_hash(ip(12)), element_hash(ip(12)));
}
