#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qcdense/errors.hpp"
#include "qcdense/sequences.hpp"

using namespace qcdense;

namespace {

const PrimeList k235{2, 3, 5};

std::vector<mpz_class> integer_members(const SuperSeq& s) {
  std::vector<mpz_class> out;
  for (const auto& m : s.members()) out.push_back(std::get<ProfiniteElem>(m.value).integer_value());
  return out;
}

}  // namespace

TEST(TorusSequence, Examples) {
  const SuperSeq one = torus_sequence(1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(std::get<UnitRational>(one.members()[0].value), UnitRational(1, 2));
  EXPECT_EQ(std::get<UnitRational>(one.limit()), UnitRational());
  const SuperSeq three = torus_sequence(3);
  ASSERT_EQ(three.size(), 3u);
  EXPECT_EQ(std::get<UnitRational>(three.members()[2].value), UnitRational(1, 6));
  EXPECT_EQ(three.members()[2].meta.derivations, (std::vector<std::pair<std::uint64_t, std::uint64_t>>{{3, 0}}));
  EXPECT_THROW(torus_sequence(0), InvalidArgument);
}

TEST(TorusSequence, PrefixMonotone) {
  const SuperSeq a = torus_sequence(20), b = torus_sequence(50);
  for (std::size_t i = 0; i < a.size(); ++i)
    EXPECT_TRUE(group_equal(a.group(), a.members()[i].value, b.members()[i].value));
}

TEST(ProfiniteSequence, Examples) {
  EXPECT_EQ(integer_members(profinite_sequence(k235, 0)), (std::vector<mpz_class>{1, 2}));
  const SuperSeq s = profinite_sequence(k235, 1, 3);
  EXPECT_EQ(integer_members(s), (std::vector<mpz_class>{1, 2, 4, 6}));
  // 2v = 2 k_0 v = 1 k_1 v keeps both derivations.
  EXPECT_EQ(s.members()[1].meta.derivations, (std::vector<std::pair<std::uint64_t, std::uint64_t>>{{0, 2}, {1, 1}}));
  EXPECT_THROW(profinite_sequence(k235, 3), IndexOutOfRange);
  EXPECT_THROW(profinite_sequence(k235, 1, 0), InvalidArgument);
}

TEST(ProfiniteSequence, MatchesEquationOneOracle) {
  const PrimeList ps = primes_below(20);
  for (std::size_t n_max : {0u, 1u, 2u, 3u})
    for (std::uint64_t cap : {5u, 40u, 400u}) {
      const auto expected = oracle::eq1_members(ps, n_max, cap);
      EXPECT_EQ(integer_members(profinite_sequence(ps, n_max, cap)), expected) << n_max << " " << cap;
    }
  const auto full = profinite_sequence(k235, 2);
  EXPECT_EQ(integer_members(full), oracle::eq1_members(k235, 2, 1000000));
  for (const auto& m : full.members()) EXPECT_FALSE(m.arc);
}

TEST(ProfiniteSequence, MembersDistinctAndExcludeLimit) {
  const SuperSeq s = profinite_sequence(primes_below(12), 3, 300);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_FALSE(group_equal(s.group(), s.members()[i].value, s.limit()));
    EXPECT_EQ(s.find(s.members()[i].value), i);
  }
  EXPECT_EQ(s.spec().param("n_max"), "3");
  EXPECT_EQ(s.spec().param("m_cap"), "300");
}

TEST(SolenoidSequence, Example) {
  const SuperSeq s = solenoid_sequence(k235, 0, 1);
  ASSERT_EQ(s.size(), 3u);
  const GroupDesc& c = s.group();
  EXPECT_TRUE(group_equal(c, s.members()[0].value, SolenoidPoint(mpq_class(-1), ProfiniteElem::integer(0))));
  EXPECT_TRUE(group_equal(c, s.members()[1].value, SolenoidPoint(mpq_class(-2), ProfiniteElem::integer(0))));
  EXPECT_TRUE(group_equal(c, s.members()[2].value, SolenoidPoint(mpq_class(1, 2), ProfiniteElem::integer(0))));
  EXPECT_TRUE(group_equal(c, s.limit(), SolenoidPoint{}));
  EXPECT_EQ(s.members()[0].meta.source, "S'");
  EXPECT_EQ(s.members()[2].meta.source, "S''");
  for (const auto& m : s.members()) EXPECT_TRUE(m.arc);
}

TEST(SolenoidSequence, AllArcAndContainsVShifts) {
  const SuperSeq s = solenoid_sequence(k235, 2, 30, 50);
  for (const auto& m : s.members()) EXPECT_TRUE(m.arc);
  // pi(0, 4v) = pi(-4, 0) is a member since 4v is in the Eq. (1) truncation.
  EXPECT_TRUE(s.contains(SolenoidPoint(mpq_class(0), ProfiniteElem::integer(4))));
  EXPECT_TRUE(s.contains(SolenoidPoint(mpq_class(0), to_residues(ProfiniteElem::integer(4), k235, 5))));
  EXPECT_FALSE(s.contains(SolenoidPoint(mpq_class(1, 3), ProfiniteElem::integer(0))));
  EXPECT_THROW(solenoid_sequence(k235, 0, 0), InvalidArgument);
}

TEST(Fan, Examples) {
  const SuperSeq one = fan({torus_sequence(3)});
  EXPECT_EQ(one.size(), 3u);
  const SuperSeq two = fan({torus_sequence(1), torus_sequence(1)});
  ASSERT_EQ(two.size(), 2u);
  const GroupDesc& g = two.group();
  EXPECT_TRUE(group_equal(g, two.members()[0].value, ProductElem{{UnitRational(1, 2), UnitRational()}}));
  EXPECT_TRUE(group_equal(g, two.members()[1].value, ProductElem{{UnitRational(), UnitRational(1, 2)}}));
  EXPECT_TRUE(group_equal(g, two.limit(), group_zero(g)));
  EXPECT_EQ(two.members()[1].meta.component, 1u);
  EXPECT_THROW(fan({}), InvalidArgument);
}

TEST(Fan, ComponentMembersRoundTrip) {
  const SuperSeq a = torus_sequence(4);
  const SuperSeq b = solenoid_sequence(k235, 0, 2);
  const SuperSeq f = fan({a, b});
  const SuperSeq back = component_members(f, 1);
  ASSERT_EQ(back.size(), b.size());
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_TRUE(group_equal(b.group(), back.members()[i].value, b.members()[i].value));
  EXPECT_THROW(component_members(f, 2), IndexOutOfRange);
}

TEST(Fan, ConvergenceToZeroInBoxNeighbourhoods) {
  // Constraints: component 0 in W_1 (profinite), component 1 within 1/20 of 0 on T.
  const SuperSeq p = profinite_sequence(k235, 2, 100);
  const SuperSeq t = torus_sequence(200);
  const SuperSeq f = fan({p, t});
  std::size_t violations = 0;
  for (const auto& m : f.members()) {
    const auto& x = std::get<ProductElem>(m.value);
    const bool in0 = in_Wn(std::get<ProfiniteElem>(x.coords[0]), k235, 1);
    const auto& y = std::get<UnitRational>(x.coords[1]);
    const bool in1 = std::llabs(signed_numerator(y)) * 20 <= y.den();
    violations += !(in0 && in1);
  }
  // Violations: odd members of p and the first 9 torus terms.
  std::size_t odd = 0;
  for (const auto& m : p.members()) odd += !in_Wn(std::get<ProfiniteElem>(m.value), k235, 1);
  EXPECT_EQ(violations, odd + 9);
}

TEST(Pushforward, SolenoidToTorus) {
  const SuperSeq s = solenoid_sequence(k235, 1, 25);
  const SuperSeq img = pushforward(s, QuotientMap::solenoid_to_torus());
  const SuperSeq t = torus_sequence(25);
  ASSERT_EQ(img.size(), t.size());  // S' collapses onto the limit
  for (std::size_t i = 0; i < t.size(); ++i)
    EXPECT_EQ(std::get<UnitRational>(img.members()[i].value), std::get<UnitRational>(t.members()[i].value));
  EXPECT_EQ(apply_map(QuotientMap::solenoid_to_torus(), s.group(), SolenoidPoint(mpq_class(-1), ProfiniteElem::integer(0))),
            Element(UnitRational()));
  EXPECT_THROW(pushforward(t, QuotientMap::solenoid_to_torus()), KindMismatch);
}

TEST(Pushforward, CommutesWithEvaluation) {
  const SuperSeq s = solenoid_sequence(k235, 1, 10);
  const auto map = QuotientMap::solenoid_to_torus();
  for (std::int64_t m = -6; m <= 6; ++m) {
    const Character chi = lift_character(map, s.group(), TorusChar{m});
    for (const auto& x : s.members())
      EXPECT_EQ(eval_char(GroupDesc::torus(), TorusChar{m}, apply_map(map, s.group(), x.value)),
                eval_char(s.group(), chi, x.value));
  }
  const SuperSeq f = fan({torus_sequence(3), torus_sequence(5)});
  const auto proj = QuotientMap::projection(1);
  const SuperSeq img = pushforward(f, proj);
  EXPECT_EQ(img.size(), 5u);
  for (const auto& x : f.members())
    EXPECT_EQ(eval_char(GroupDesc::torus(), TorusChar{3}, apply_map(proj, f.group(), x.value)),
              eval_char(f.group(), lift_character(proj, f.group(), TorusChar{3}), x.value));
}

TEST(ExtractSuitable, Examples) {
  const auto s = extract_suitable(torus_sequence(2));
  EXPECT_EQ(s.elements.size(), 2u);
  EXPECT_TRUE(s.requires_generation_check);
  EXPECT_TRUE(extract_suitable(SuperSeq::from_members(GroupDesc::torus(), {})).elements.empty());
  const auto p = extract_suitable(profinite_sequence(k235, 0));
  ASSERT_EQ(p.elements.size(), 2u);
  EXPECT_EQ(std::get<ProfiniteElem>(p.elements[1]).integer_value(), 2);
}

TEST(SuperSeq, AddAbsorbsLimitAndMerges) {
  SuperSeq s(GroupDesc::torus(), UnitRational(), SequenceSpec{"custom", {}});
  EXPECT_FALSE(s.add(UnitRational(), Provenance{"custom", {}, std::nullopt, {}}));
  EXPECT_EQ(s.add(UnitRational(1, 3), Provenance{"custom", {{1, 1}}, std::nullopt, {}}), 0u);
  EXPECT_EQ(s.add(UnitRational(4, 3), Provenance{"custom", {{2, 2}}, std::nullopt, {}}), 0u);
  EXPECT_EQ(s.size(), 1u);
  EXPECT_EQ(s.members()[0].meta.derivations.size(), 2u);
  EXPECT_THROW(s.add(ProfiniteElem::integer(1), Provenance{}), KindMismatch);
}
