#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <set>

#include "oracles.hpp"
#include "qcdense/duality.hpp"
#include "qcdense/errors.hpp"

using namespace qcdense;

namespace {

const PrimeList k235{2, 3, 5};

ProfiniteElem ip(long m) { return ProfiniteElem::integer(m); }

std::vector<std::int64_t> torus_ms(const std::vector<Character>& cs) {
  std::vector<std::int64_t> out;
  for (const auto& c : cs) out.push_back(std::get<TorusChar>(c).m);
  return out;
}

}  // namespace

TEST(EvalChar, Examples) {
  EXPECT_EQ(eval_char(GroupDesc::torus(), TorusChar{3}, UnitRational(1, 6)), UnitRational(1, 2));
  EXPECT_EQ(eval_char(GroupDesc::profinite(k235), ProfiniteChar{UnitRational(1, 3)}, ip(2)), UnitRational(2, 3));
  EXPECT_EQ(eval_char(GroupDesc::solenoid(k235), solenoid_char(1, 2), SolenoidPoint(mpq_class(-1), ip(0))),
            UnitRational(1, 2));
  EXPECT_EQ(eval_char(GroupDesc::cyclic(6), CyclicChar{2}, CyclicElem{5}), UnitRational(4, 6));
  const GroupDesc tt = GroupDesc::product({GroupDesc::torus(), GroupDesc::torus()});
  EXPECT_EQ(eval_char(tt, ProductChar{{TorusChar{1}, TorusChar{2}}}, ProductElem{{UnitRational(1, 3), UnitRational(1, 3)}}),
            UnitRational());
}

TEST(EvalChar, TrivialCharacters) {
  const std::vector<GroupDesc> groups{GroupDesc::torus(), GroupDesc::profinite(k235), GroupDesc::solenoid(k235),
                                      GroupDesc::cyclic(5),
                                      GroupDesc::product({GroupDesc::torus(), GroupDesc::cyclic(3)})};
  const std::vector<Element> points{UnitRational(2, 7), ip(11), SolenoidPoint(mpq_class(3, 5), ip(0)),
                                    CyclicElem{4}, ProductElem{{UnitRational(1, 2), CyclicElem{2}}}};
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const Character z = trivial_character(groups[i]);
    EXPECT_TRUE(is_trivial(z));
    EXPECT_EQ(complexity(z), 0u);
    EXPECT_EQ(eval_char(groups[i], z, points[i]), UnitRational());
  }
}

TEST(EvalChar, KindMismatchAndPrecision) {
  EXPECT_THROW(eval_char(GroupDesc::torus(), ProfiniteChar{UnitRational(1, 2)}, UnitRational(1, 2)), KindMismatch);
  EXPECT_THROW(eval_char(GroupDesc::torus(), TorusChar{1}, ip(1)), KindMismatch);
  const auto shallow = ProfiniteElem::residues({{2, 1, 1}, {3, 1, 1}, {5, 1, 1}});
  EXPECT_THROW(eval_char(GroupDesc::profinite(k235), ProfiniteChar{UnitRational(1, 4)}, shallow), InsufficientPrecision);
}

TEST(EvalChar, SolenoidMatchesRationalOracle) {
  const GroupDesc c = GroupDesc::solenoid(k235);
  for (std::int64_t a = -9; a <= 9; ++a)
    for (std::int64_t b : {1, 2, 3, 4, 6, 8, 9, 10}) {
      if (a == 0 || std::gcd(a, b) != 1) continue;
      for (long num = -7; num <= 7; ++num)
        for (long den : {1, 2, 3, 7})
          for (long h : {0, 1, -5, 12}) {
            // chi(pi(r, h)) = phi(a r / b - a h / b) on any representative.
            const mpq_class r(num, den);
            const mpq_class expected = mpq_class(a, b) * r - mpq_class(a * h, b);
            const UnitRational got = eval_char(c, solenoid_char(a, b), SolenoidPoint(r, ip(h)));
            EXPECT_EQ(mpq_class(got.num(), got.den()), oracle::frac(expected));
          }
    }
}

TEST(EvalChar, Additivity) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> d(-60, 60), den(1, 10);
  const GroupDesc t = GroupDesc::torus(), h = GroupDesc::profinite(k235), c = GroupDesc::solenoid(k235);
  for (int i = 0; i < 200; ++i) {
    const Element x = phi(d(rng), den(rng)), y = phi(d(rng), den(rng));
    const TorusChar tc{d(rng)};
    EXPECT_EQ(eval_char(t, tc, group_add(t, x, y)), circle_add(eval_char(t, tc, x), eval_char(t, tc, y)));

    const Element hx = to_residues(ip(d(rng)), k235, 4), hy = ip(d(rng));
    const ProfiniteChar pc{UnitRational(d(rng), 72)};
    EXPECT_EQ(eval_char(h, pc, group_add(h, hx, hy)), circle_add(eval_char(h, pc, hx), eval_char(h, pc, hy)));

    const Element sx = SolenoidPoint(mpq_class(d(rng), den(rng)), to_residues(ip(d(rng)), k235, 4));
    const Element sy = SolenoidPoint(mpq_class(d(rng), den(rng)), ip(d(rng)));
    const SolenoidChar sc = solenoid_char(d(rng) | 1, 12);
    EXPECT_EQ(eval_char(c, sc, group_add(c, sx, sy)), circle_add(eval_char(c, sc, sx), eval_char(c, sc, sy)));
  }
}

TEST(EvalChar, SolenoidWellDefinedOnQuotient) {
  const GroupDesc c = GroupDesc::solenoid(k235);
  for (std::int64_t a : {-7, -1, 1, 2, 5})
    for (std::int64_t b : {1, 3, 4, 5, 9})
      for (long m = -4; m <= 4; ++m) {
        if (std::gcd(a, b) != 1) continue;
        const auto chi = solenoid_char(a, b);
        const SolenoidPoint p(mpq_class(2, 7), to_residues(ip(3), k235, 4));
        const SolenoidPoint q(mpq_class(2, 7) + m, to_residues(ip(3 + m), k235, 4));
        EXPECT_EQ(eval_char(c, chi, p), eval_char(c, chi, q));
        // pi(0, v) = -pi(1, 0).
        EXPECT_EQ(eval_char(c, chi, SolenoidPoint(mpq_class(0), to_residues(ip(1), k235, 4))), UnitRational(-a, b));
        EXPECT_EQ(eval_char(c, chi, SolenoidPoint(mpq_class(-1), ip(0))), UnitRational(-a, b));
      }
}

TEST(Enumerate, Examples) {
  EXPECT_EQ(torus_ms(enumerate_chars(GroupDesc::torus(), Complexity(2))), (std::vector<std::int64_t>{1, -1, 2, -2}));
  const auto p = enumerate_chars(GroupDesc::profinite(k235), Complexity(3));
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(std::get<ProfiniteChar>(p[0]).q, UnitRational(1, 2));
  EXPECT_EQ(std::get<ProfiniteChar>(p[1]).q, UnitRational(1, 3));
  EXPECT_EQ(std::get<ProfiniteChar>(p[2]).q, UnitRational(2, 3));
  const auto s = enumerate_chars(GroupDesc::solenoid(k235), Complexity(1));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(std::get<SolenoidChar>(s[0]), (SolenoidChar{-1, 1}));
  EXPECT_EQ(std::get<SolenoidChar>(s[1]), (SolenoidChar{1, 1}));
  EXPECT_THROW(Complexity(0), InvalidArgument);
}

TEST(Enumerate, UnsupportedBound) {
  EXPECT_THROW(enumerate_chars(GroupDesc::profinite(k235), Complexity(7)), UnsupportedBound);
  EXPECT_THROW(enumerate_chars(GroupDesc::solenoid(k235), Complexity(7)), UnsupportedBound);
  EXPECT_THROW(check_bound_supported(GroupDesc::product({GroupDesc::torus(), GroupDesc::profinite(k235)}), Complexity(7)),
               UnsupportedBound);
  const auto smooth = enumerate_chars(GroupDesc::profinite(k235), Complexity(7), DualScope::PrefixSmooth);
  for (const auto& c : smooth) EXPECT_NE(std::get<ProfiniteChar>(c).q.den(), 7);
  EXPECT_EQ(smooth.size(), 1u + 2 + 2 + 4 + 2);  // b = 2, 3, 4, 5, 6
  EXPECT_NO_THROW(enumerate_chars(GroupDesc::profinite(primes_below(8)), Complexity(7)));
}

TEST(Enumerate, CountsMatchOracle) {
  const PrimeList ps = primes_below(30);
  for (std::uint64_t B : {1u, 5u, 12u, 29u}) {
    std::size_t profinite = 0, solenoid = 0;
    for (std::int64_t b = 2; b <= static_cast<std::int64_t>(B); ++b)
      for (std::int64_t a = 1; a < b; ++a) profinite += std::gcd(a, b) == 1;
    for (std::int64_t b = 1; b <= static_cast<std::int64_t>(B); ++b)
      for (std::int64_t a = -static_cast<std::int64_t>(B); a <= static_cast<std::int64_t>(B); ++a)
        solenoid += a != 0 && std::gcd(a, b) == 1;
    EXPECT_EQ(enumerate_chars(GroupDesc::profinite(ps), Complexity(B)).size(), profinite);
    EXPECT_EQ(enumerate_chars(GroupDesc::solenoid(ps), Complexity(B)).size(), solenoid);
    EXPECT_EQ(enumerate_chars(GroupDesc::torus(), Complexity(B)).size(), 2 * B);
  }
  EXPECT_EQ(enumerate_chars(GroupDesc::cyclic(7), Complexity(3)).size(), 6u);
}

TEST(Enumerate, OrderedDeduplicatedAndSound) {
  const PrimeList ps = primes_below(20);
  const std::vector<GroupDesc> groups{GroupDesc::torus(), GroupDesc::profinite(ps), GroupDesc::solenoid(ps),
                                      GroupDesc::cyclic(10),
                                      GroupDesc::product({GroupDesc::torus(), GroupDesc::cyclic(4)})};
  for (const auto& g : groups) {
    const auto cs = enumerate_chars(g, Complexity(12));
    for (std::size_t i = 0; i + 1 < cs.size(); ++i) {
      EXPECT_TRUE(compare_chars(cs[i], cs[i + 1]) < 0);
      EXPECT_LE(complexity(cs[i]), complexity(cs[i + 1]));
    }
    for (const auto& c : cs) {
      EXPECT_GE(complexity(c), 1u);
      EXPECT_LE(complexity(c), 12u);
      EXPECT_NO_THROW(check_character(g, c));
    }
  }
  // Soundness: each character is nonzero somewhere.
  const GroupDesc c = GroupDesc::solenoid(ps);
  for (const auto& chi : enumerate_chars(c, Complexity(12))) {
    const auto& s = std::get<SolenoidChar>(chi);
    const std::vector<Element> probe{SolenoidPoint(mpq_class(-1), ip(0)),
                                     SolenoidPoint(mpq_class(1, 2 * std::abs(s.a)), ip(0))};
    EXPECT_FALSE(annihilates(c, chi, probe)) << to_string(chi);
  }
}

TEST(Enumerate, ProductLimit) {
  const GroupDesc big = GroupDesc::product({GroupDesc::torus(), GroupDesc::torus(), GroupDesc::torus()});
  EXPECT_EQ(enumerate_chars(big, Complexity(2)).size(), 5u * 5 * 5 - 1);
  EXPECT_THROW(enumerate_chars(big, Complexity(100)), SizeLimit);
}

TEST(Annihilates, Examples) {
  EXPECT_TRUE(annihilates(GroupDesc::torus(), TorusChar{2}, {UnitRational(1, 2)}));
  EXPECT_FALSE(annihilates(GroupDesc::torus(), TorusChar{1}, {UnitRational(1, 2)}));
  EXPECT_TRUE(annihilates(GroupDesc::profinite(k235), ProfiniteChar{UnitRational(1, 2)}, {ip(2)}));
  EXPECT_TRUE(annihilates(GroupDesc::torus(), TorusChar{5}, {}));
}

TEST(Characters, ComplexityAndReduction) {
  EXPECT_EQ(solenoid_char(2, -4), (SolenoidChar{-1, 2}));
  EXPECT_THROW(solenoid_char(1, 0), InvalidArgument);
  EXPECT_EQ(complexity(TorusChar{-7}), 7u);
  EXPECT_EQ(complexity(ProfiniteChar{UnitRational(3, 8)}), 8u);
  EXPECT_EQ(complexity(solenoid_char(-9, 4)), 9u);
  EXPECT_EQ(complexity(CyclicChar{3}), 1u);
  EXPECT_EQ(complexity(ProductChar{{TorusChar{2}, TorusChar{-5}}}), 5u);
  EXPECT_THROW(check_character(GroupDesc::cyclic(4), CyclicChar{4}), KindMismatch);
  EXPECT_THROW(check_character(GroupDesc::product({GroupDesc::torus()}), ProductChar{}), KindMismatch);
  EXPECT_TRUE(is_smooth_over(360, k235));
  EXPECT_FALSE(is_smooth_over(14, k235));
}
