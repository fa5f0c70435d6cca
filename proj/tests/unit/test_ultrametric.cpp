#include "ballfix/padic.hpp"
#include "ballfix/ultrametric.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace ballfix;

namespace {

// d(a,b)=1, d(a,c)=2, d(b,c)=2 over the chain 0 < 1 < 2
UltrametricSpace three_point() {
  return UltrametricSpace({"a", "b", "c"}, ValuePoset::chain(3), {0, 1, 2, 1, 0, 2, 2, 2, 0});
}

// d(a,b)=2, d(b,c)=1, d(a,c)=2
UltrametricSpace descending() {
  return UltrametricSpace({"a", "b", "c"}, ValuePoset::chain(3), {0, 2, 2, 2, 0, 1, 2, 1, 0});
}

// Diamond values 0 < p, q < top with ids 0, 1, 2, 3. d(x,y)=p, d(t,x)=q, d(t,y)=top.
UltrametricSpace diamond_domain() {
  const ValuePoset d = product_poset(ValuePoset::chain(2), ValuePoset::chain(2));
  return UltrametricSpace({"x", "y", "t"}, d, {0, 1, 2, 1, 0, 3, 2, 3, 0});
}

// z′, u, w with d′(u,z′)=1, d′(w,z′)=2, d′(u,w)=2.
UltrametricSpace chain_codomain() {
  return UltrametricSpace({"z", "u", "w"}, ValuePoset::chain(3), {0, 1, 2, 1, 0, 2, 2, 2, 0});
}

// Ball computed straight from the distance table.
PointSet ball_by_table(const UltrametricSpace& s, PointId x, PointId y) {
  PointSet b(s.size());
  for (PointId z = 0; z < s.size(); ++z)
    if (s.leq(s.d(x, z), s.d(x, y))) b.set(z);
  return b;
}

std::vector<UltrametricSpace> sample_spaces(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<UltrametricSpace> out;
  const ValuePoset diamond = product_poset(ValuePoset::chain(2), ValuePoset::chain(2));
  const ValuePoset six = product_poset(ValuePoset::chain(3), ValuePoset::chain(2));
  while (static_cast<int>(out.size()) < count) {
    const std::size_t n = 1 + rng() % 5;
    if (rng() % 2) {
      out.push_back(random_chain_ultrametric(n, 1 + rng() % 3, rng));
    } else if (auto s = random_poset_ultrametric(n, rng() % 2 ? diamond : six, rng)) {
      out.push_back(*s);
    }
  }
  return out;
}

}  // namespace

TEST(UmBall, ContainsCenterAndPartner) {
  const UltrametricSpace s = three_point();
  EXPECT_TRUE(um_ball_contains(s, 0, 1, 0));
  EXPECT_TRUE(um_ball_contains(s, 0, 1, 1));
}

TEST(UmBall, ExcludesFartherPoint) {
  EXPECT_FALSE(um_ball_contains(three_point(), 0, 1, 2));
}

TEST(UmBall, InclusionLaw) {
  const UltrametricSpace s = three_point();
  EXPECT_TRUE(um_ball_leq(s, 0, 1, 0, 1));
  // t, z in B(x,y) gives B(t,z) ⊆ B(x,y)
  EXPECT_TRUE(um_ball_leq(s, 1, 0, 0, 2));
  // d(b,a) = 1 < d(a,c) = 2 gives B(b,a) ⊊ B(a,c)
  EXPECT_TRUE(proper_subset(s.ball(1, 0), s.ball(0, 2)));
  EXPECT_FALSE(um_ball_leq(s, 0, 2, 0, 1));
}

TEST(UmBall, SymmetricInCenters) {
  const UltrametricSpace s = three_point();
  for (PointId x = 0; x < 3; ++x)
    for (PointId y = 0; y < 3; ++y) EXPECT_EQ(s.ball(x, y), s.ball(y, x));
}

TEST(Axioms, RejectsBrokenTriangle) {
  // d(a,b)=1, d(b,c)=1, d(a,c)=2 breaks the triangle law
  EXPECT_THROW(UltrametricSpace({"a", "b", "c"}, ValuePoset::chain(3), {0, 1, 2, 1, 0, 1, 2, 1, 0}), Error);
  // asymmetric
  EXPECT_THROW(UltrametricSpace({"a", "b"}, ValuePoset::chain(2), {0, 1, 0, 0}), Error);
}

TEST(Contracting, IdentityAndConstant) {
  const UltrametricSpace s = three_point();
  EXPECT_TRUE(is_contracting(s, SelfMap::identity(3)).holds);
  EXPECT_TRUE(is_contracting(s, SelfMap({2, 2, 2})).holds);
}

TEST(Contracting, DistanceIncreaseHasWitness) {
  const UltrametricSpace s = three_point();
  // a,b at distance 1 go to a,c at distance 2
  const SelfMap f({0, 2, 2});
  const ContractingVerdict v = is_contracting(s, f);
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.witness.has_value());
  const auto [x, y] = *v.witness;
  EXPECT_FALSE(s.leq(s.d(f(x), f(y)), s.d(x, y)));
}

TEST(Sufpt, Assignment) {
  const UltrametricSpace s = descending();
  const BallAssignment a = sufpt_assignment(s, SelfMap({1, 2, 2}));
  EXPECT_EQ(a[0], s.ball(0, 1));
  EXPECT_EQ(a[1], s.ball(1, 2));
  EXPECT_EQ(a[2], singleton_set(3, 2));
  const BallAssignment c = sufpt_assignment(s, SelfMap({2, 2, 2}));
  for (PointId x = 0; x < 3; ++x) EXPECT_EQ(c[x], s.ball(x, 2));
}

TEST(Sufpt, HypothesesOnDescendingExample) {
  const ConditionReport r = check_sufpt_hypotheses(descending(), SelfMap({1, 2, 2}));
  EXPECT_TRUE(r.holds("scoo"));
  EXPECT_TRUE(r.holds("SUFPTc"));
}

TEST(Sufpt, TwoCycleFailsDescent) {
  const UltrametricSpace s = descending();
  EXPECT_FALSE(check_sufpt_hypotheses(s, SelfMap({1, 0, 2})).holds("scoo"));
  EXPECT_TRUE(check_sufpt_hypotheses(s, SelfMap::identity(3)).passed());
}

TEST(Sufpt, Solver) {
  const UltrametricSpace s = descending();
  const FixedPointReport r = solve_sufpt(s, SelfMap({1, 2, 2}));
  ASSERT_TRUE(r.found());
  EXPECT_EQ(*r.witness, 2u);
  const FixedPointReport at = solve_sufpt(s, SelfMap({1, 2, 2}), kDefaultBudget, 2);
  EXPECT_EQ(*at.witness, 2u);
  EXPECT_EQ(solve_sufpt(s, SelfMap({1, 0, 2})).outcome, Outcome::HypothesisViolated);
}

TEST(Csco, ConstantAndDescending) {
  EXPECT_TRUE(check_csco(three_point(), SelfMap({2, 2, 2})).passed());
  EXPECT_TRUE(check_csco(descending(), SelfMap({1, 2, 2})).passed());
}

TEST(Csco, NonContractingPrecondition) {
  const ConditionReport r = check_csco(three_point(), SelfMap({0, 2, 2}));
  EXPECT_FALSE(r.holds("contracting"));
}

TEST(Attractor, IdentityPhi) {
  const UltrametricSpace s = three_point();
  const std::vector<PointId> phi{0, 1, 2};
  const AttractorReport r = solve_attractor(s, s, phi, 1, [](PointId) -> PointId { return 1; }, 1);
  ASSERT_TRUE(r.preimage.has_value());
  EXPECT_EQ(*r.preimage, 1u);
  EXPECT_EQ(r.validated_steps, 0u);
}

TEST(Attractor, SquareRootOfTwoModulo343) {
  const std::uint64_t p = 7;
  const unsigned N = 3;
  const UltrametricSpace s = padic_ultrametric_all(p, N);
  const std::uint64_t mod = padic_modulus(p, N);
  std::vector<PointId> phi(mod);
  for (std::uint64_t r = 0; r < mod; ++r) phi[r] = r * r % mod;
  const Polynomial P = Polynomial::from_integers({-2, 0, 1}, p, N);
  auto newton = [&](PointId x) -> PointId { return newton_map(P, PAdicInt::from_residue(p, N, x)).residue(); };
  const AttractorReport r = solve_attractor(s, s, phi, 2, newton, 3);
  ASSERT_TRUE(r.preimage.has_value());
  EXPECT_EQ(*r.preimage, 108u);
  EXPECT_TRUE(r.attractor_checks.passed());
  const auto roots = oracle::polynomial_roots({-2, 0, 1}, mod);
  EXPECT_NE(std::find(roots.begin(), roots.end(), *r.preimage), roots.end());
}

TEST(Attractor, IncomparableStepViolatesUat3) {
  const std::vector<PointId> phi{1, 0, 2};
  try {
    solve_attractor(diamond_domain(), chain_codomain(), phi, 0, [](PointId) -> PointId { return 1; }, 0);
    FAIL() << "expected contract-violation";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ContractViolation);
    EXPECT_NE(std::string(e.what()).find("UAT3"), std::string::npos);
  }
}

TEST(Attractor, ChooserMustImprove) {
  const std::vector<PointId> phi{1, 0, 2};
  try {
    solve_attractor(diamond_domain(), chain_codomain(), phi, 0, [](PointId) -> PointId { return 2; }, 0);
    FAIL() << "expected contract-violation";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("UAT1"), std::string::npos);
  }
}

TEST(Uat3Prime, IdentityVacuous) {
  const UltrametricSpace s = three_point();
  const std::vector<PointId> phi{0, 1, 2};
  EXPECT_TRUE(check_uat3_prime(s, s, SelfMap::identity(3), phi, 1).passed());
}

TEST(Uat3Prime, TotalOrderComparable) {
  const UltrametricSpace s = descending();
  const std::vector<PointId> phi{0, 1, 2};
  EXPECT_TRUE(check_uat3_prime(s, s, SelfMap({1, 2, 2}), phi, 2).holds("UAT3'-comparable"));
}

TEST(Uat3Prime, DiamondOverlapFails) {
  const std::vector<PointId> phi{1, 0, 2};
  const ConditionReport r = check_uat3_prime(diamond_domain(), chain_codomain(), SelfMap({1, 1, 0}), phi, 0);
  EXPECT_FALSE(r.holds("UAT3'"));
  EXPECT_FALSE(r.holds("UAT3'-comparable"));
  EXPECT_EQ(r.at("UAT3'-comparable").points.size(), 2u);
}

TEST(UltrametricProperty, AxiomsOnGeneratedSpaces) {
  for (const auto& s : sample_spaces(21, 100)) {
    const ConditionReport r = s.check_axioms();
    EXPECT_TRUE(r.holds("U1"));
    EXPECT_TRUE(r.holds("U2"));
    EXPECT_TRUE(r.holds("U3"));
    if (s.values().is_total()) EXPECT_TRUE(r.holds("UT"));
  }
}

TEST(UltrametricProperty, InclusionLawAndStrictInclusion) {
  for (const auto& s : sample_spaces(22, 100)) {
    const std::size_t n = s.size();
    for (PointId t = 0; t < n; ++t)
      for (PointId z = 0; z < n; ++z)
        for (PointId x = 0; x < n; ++x)
          for (PointId y = 0; y < n; ++y) {
            EXPECT_EQ(um_ball_leq(s, t, z, x, y), ball_by_table(s, t, z).is_subset_of(ball_by_table(s, x, y)));
          }
    for (PointId x = 0; x < n; ++x)
      for (PointId y = 0; y < n; ++y)
        for (PointId z = 0; z < n; ++z)
          if (s.lt(s.d(y, z), s.d(x, y))) EXPECT_TRUE(proper_subset(ball_by_table(s, y, z), ball_by_table(s, x, y)));
  }
}

TEST(UltrametricProperty, TotalOrderOverlapImpliesComparable) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const UltrametricSpace s = random_chain_ultrametric(1 + rng() % 5, 1 + rng() % 3, rng);
    const BallSpace bs = s.ball_space();
    for (const auto& a : bs.balls())
      for (const auto& b : bs.balls())
        if (a.intersects(b)) EXPECT_TRUE(comparable_by_inclusion(a, b));
  }
}

// Every map on small generated spaces: SUFPT hypotheses give a fixed point,
// and so do contracting maps with orbit descent.
TEST(UltrametricProperty, SufptAndUfptEndToEnd) {
  std::size_t solved = 0;
  for (const auto& s : sample_spaces(24, 60)) {
    const std::size_t n = s.size();
    if (n > 4) continue;
    std::vector<PointId> t(n, 0);
    for (;;) {
      const SelfMap f(t);
      const auto fixed = oracle::fixed_points({t.begin(), t.end()});
      const ConditionReport h = check_sufpt_hypotheses(s, f);
      if (h.passed()) {
        const FixedPointReport r = solve_sufpt(s, f);
        ASSERT_TRUE(r.found());
        EXPECT_EQ(t[*r.witness], *r.witness);
        EXPECT_FALSE(fixed.empty());
        ++solved;
      }
      if (is_contracting(s, f).holds && h.holds("scoo")) {
        EXPECT_TRUE(check_csco(s, f).passed());
        const FixedPointReport r = solve_sufpt(s, f);
        ASSERT_TRUE(r.found());
        EXPECT_EQ(t[*r.witness], *r.witness);
      }
      std::size_t i = 0;
      while (i < n && ++t[i] == n) t[i++] = 0;
      if (i == n) break;
    }
  }
  EXPECT_GT(solved, 0u);
}
