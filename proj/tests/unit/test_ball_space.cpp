#include "ballfix/ball_space.hpp"
#include "ballfix/orbit_engine.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace ballfix;

namespace {

// X = {a,b,c}, balls {X, {b,c}, {c}}, f: a→b, b→c, c→c
BallSpace chain_space() {
  return BallSpace::from_names({"a", "b", "c"}, {{"a", "b", "c"}, {"b", "c"}, {"c"}});
}

SelfMap descending_map(const BallSpace& s) {
  return SelfMap::from_names(s, {{"a", "b"}, {"b", "c"}, {"c", "c"}});
}

oracle::Set mask(const PointSet& s) {
  oracle::Set m = 0;
  for (PointId p : members(s)) m |= oracle::Set{1} << p;
  return m;
}

std::vector<oracle::Set> masks(const BallSpace& s) {
  std::vector<oracle::Set> out;
  for (const auto& b : s.balls()) out.push_back(mask(b));
  return out;
}

oracle::Table table(const SelfMap& f) { return {f.table().begin(), f.table().end()}; }

// Natural numbers with balls [lo, hi]; hi = -1 stands for no upper bound.
using Interval = std::pair<long, long>;

PresentedSpace<long, Interval> naturals() {
  PresentedSpace<long, Interval> s;
  s.contains = [](const long& m, const Interval& b) { return m >= b.first && (b.second < 0 || m <= b.second); };
  s.subset = [](const Interval& a, const Interval& b) {
    if (a.first < b.first) return false;
    if (b.second < 0) return true;
    return a.second >= 0 && a.second <= b.second;
  };
  return s;
}

std::optional<long> count_up(std::size_t k) { return static_cast<long>(k); }

}  // namespace

TEST(FContracting, SingletonFixedPoint) {
  const BallSpace s = chain_space();
  const SelfMap f = descending_map(s);
  EXPECT_TRUE(is_f_contracting(s, f, s.set_of({2})));
}

TEST(FContracting, ProperImage) {
  const BallSpace s = BallSpace::from_names({"a", "b"}, {{"a", "b"}});
  const SelfMap f = SelfMap::from_names(s, {{"a", "b"}, {"b", "b"}});
  EXPECT_TRUE(is_f_contracting(s, f, s.full()));
}

TEST(FContracting, SwapIsNotContracting) {
  const BallSpace s = BallSpace::from_names({"a", "b"}, {{"a", "b"}});
  const SelfMap f = SelfMap::from_names(s, {{"a", "b"}, {"b", "a"}});
  EXPECT_FALSE(is_f_contracting(s, f, s.full()));
}

TEST(FContracting, RejectsForeignSet) {
  const BallSpace s = chain_space();
  const SelfMap f = descending_map(s);
  try {
    is_f_contracting(s, f, s.set_of({0}));
    FAIL() << "expected invalid-ball";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidBall);
  }
}

TEST(Conditions, ChainExamplePassesBoth) {
  const BallSpace s = chain_space();
  const SelfMap f = descending_map(s);
  const ConditionReport c = check_c_conditions(s, f);
  EXPECT_TRUE(c.holds("C1"));
  EXPECT_TRUE(c.holds("C2"));
  EXPECT_TRUE(c.holds("C3"));
  EXPECT_TRUE(check_cu_conditions(s, f).passed());
}

TEST(Conditions, SwapFailsC1) {
  const BallSpace s = BallSpace::from_names({"a", "b"}, {{"a", "b"}});
  const SelfMap f = SelfMap::from_names(s, {{"a", "b"}, {"b", "a"}});
  EXPECT_FALSE(check_c_conditions(s, f).holds("C1"));
}

TEST(Conditions, SinglePointIdentity) {
  const BallSpace s = BallSpace::from_names({"a"}, {{"a"}});
  EXPECT_TRUE(check_c_conditions(s, SelfMap::identity(1)).passed());
}

TEST(Conditions, CU2NeedsImageBall) {
  const BallSpace with = BallSpace::from_names({"a", "b"}, {{"a", "b"}, {"a"}});
  const BallSpace without = BallSpace::from_names({"a", "b"}, {{"a", "b"}});
  const SelfMap f({0, 0});
  EXPECT_TRUE(check_cu_conditions(with, f).passed());
  const ConditionReport r = check_cu_conditions(without, f);
  EXPECT_FALSE(r.holds("CU2"));
}

TEST(Nfpt1, ChainExample) {
  const BallSpace s = chain_space();
  const FixedPointReport r = solve_nfpt1(s, descending_map(s));
  ASSERT_TRUE(r.found());
  EXPECT_EQ(*r.witness, 2u);
  ASSERT_EQ(r.nest.size(), 3u);
  EXPECT_EQ(r.nest.chain()[0], s.full());
  EXPECT_EQ(r.nest.chain()[1], s.set_of({1, 2}));
  EXPECT_EQ(r.nest.chain()[2], s.set_of({2}));
  EXPECT_EQ(brute_force_fixed_points(descending_map(s)), std::vector<PointId>{2});
}

TEST(Nfpt1, IdentityOnSingletons) {
  const BallSpace s = BallSpace::unnamed(3, {singleton_set(3, 0), singleton_set(3, 1), singleton_set(3, 2)});
  const FixedPointReport r = solve_nfpt1(s, SelfMap::identity(3));
  ASSERT_TRUE(r.found());
  EXPECT_EQ(*r.witness, 0u);
}

TEST(Nfpt1, SwapViolatesC1) {
  const BallSpace s = BallSpace::from_names({"a", "b"}, {{"a", "b"}});
  const FixedPointReport r = solve_nfpt1(s, SelfMap({1, 0}));
  EXPECT_EQ(r.outcome, Outcome::HypothesisViolated);
  EXPECT_EQ(r.violated, "C1");
}

TEST(Nfpt1, ZeroBudgetRejected) {
  const BallSpace s = chain_space();
  EXPECT_THROW(solve_nfpt1(s, descending_map(s), 0), Error);
}

TEST(Nfpt2, ChainExampleTwoDescents) {
  const BallSpace s = chain_space();
  const FixedPointReport r = solve_nfpt2(s, descending_map(s));
  ASSERT_TRUE(r.found());
  EXPECT_EQ(*r.witness, 2u);
  EXPECT_EQ(r.stage, 2u);
}

TEST(Nfpt2, SinglePointStageZero) {
  const BallSpace s = BallSpace::from_names({"a"}, {{"a"}});
  const FixedPointReport r = solve_nfpt2(s, SelfMap::identity(1));
  ASSERT_TRUE(r.found());
  EXPECT_EQ(r.stage, 0u);
}

TEST(Nfpt2, IdentityOnTwoPointsViolated) {
  const BallSpace s = BallSpace::from_names({"a", "b"}, {{"a", "b"}, {"a"}, {"b"}});
  const FixedPointReport r = solve_nfpt2(s, SelfMap::identity(2));
  EXPECT_EQ(r.outcome, Outcome::HypothesisViolated);
}

TEST(ScAxioms, ChainAssignment) {
  const BallSpace s = chain_space();
  const BallAssignment a{{s.full(), s.set_of({1, 2}), s.set_of({2})}};
  const ConditionReport r = check_sc_axioms(s, descending_map(s), a);
  EXPECT_TRUE(r.holds("SC1"));
  EXPECT_TRUE(r.holds("SC2"));
  EXPECT_TRUE(r.holds("SC3"));
}

TEST(ScAxioms, ConstantAssignmentWithCycle) {
  const BallSpace s = BallSpace::unnamed(2, {full_set(2)});
  const BallAssignment a{{full_set(2), full_set(2)}};
  EXPECT_FALSE(check_sc_axioms(s, SelfMap({1, 0}), a).holds("SC2"));
}

TEST(ScAxioms, IdentityWithSingletons) {
  const BallSpace s = BallSpace::unnamed(2, {singleton_set(2, 0), singleton_set(2, 1)});
  const BallAssignment a{{singleton_set(2, 0), singleton_set(2, 1)}};
  EXPECT_TRUE(check_sc_axioms(s, SelfMap::identity(2), a).passed());
}

TEST(ScAxioms, MissingPointIsInvalidAssignment) {
  const BallSpace s = chain_space();
  const BallAssignment a{{s.full(), s.full()}};
  try {
    check_sc_axioms(s, descending_map(s), a);
    FAIL() << "expected invalid-assignment";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidAssignment);
  }
}

TEST(Gfpt2, ChainFromA) {
  const BallSpace s = chain_space();
  const BallAssignment a{{s.full(), s.set_of({1, 2}), s.set_of({2})}};
  const FixedPointReport r = solve_gfpt2(s, descending_map(s), a, kDefaultBudget, 0);
  ASSERT_TRUE(r.found());
  EXPECT_EQ(*r.witness, 2u);
}

TEST(Gfpt2, StartAtFixedPoint) {
  const BallSpace s = chain_space();
  const BallAssignment a{{s.full(), s.set_of({1, 2}), s.set_of({2})}};
  const FixedPointReport r = solve_gfpt2(s, descending_map(s), a, kDefaultBudget, 2);
  ASSERT_TRUE(r.found());
  EXPECT_EQ(*r.witness, 2u);
  EXPECT_LE(r.iterations, 1u);
}

TEST(Gfpt2, CycleWithSingleBall) {
  const BallSpace s = BallSpace::unnamed(2, {full_set(2)});
  const BallAssignment a{{full_set(2), full_set(2)}};
  const FixedPointReport r = solve_gfpt2(s, SelfMap({1, 0}), a);
  EXPECT_EQ(r.outcome, Outcome::HypothesisViolated);
}

TEST(Gfpt2, LazyVariantMatches) {
  const BallSpace s = chain_space();
  const std::vector<PointSet> balls{s.full(), s.set_of({1, 2}), s.set_of({2})};
  const FixedPointReport r =
      solve_gfpt2(3, [](PointId p) { return p == 0 ? PointId{1} : PointId{2}; }, [&](PointId p) { return balls[p]; }, 0);
  ASSERT_TRUE(r.found());
  EXPECT_EQ(*r.witness, 2u);
}

TEST(SphericalCompleteness, FiniteSpaces) {
  EXPECT_TRUE(is_spherically_complete(chain_space()));
}

TEST(Preimage, SpecExample) {
  const BallSpace target = BallSpace::from_names({"a", "b"}, {{"a"}, {"a", "b"}});
  const std::vector<PointId> f{0, 0, 1, 1};
  const PreimageSpace pre = preimage_space(f, target, {"1", "2", "3", "4"});
  EXPECT_TRUE(pre.space.is_ball(make_set(4, {0, 1})));
  EXPECT_TRUE(pre.space.is_ball(full_set(4)));
  EXPECT_EQ(pre.space.ball_count(), 2u);

  const Nest n({target.full(), target.set_of({0})});
  const Nest back = preimage_nest(f, 4, n);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back.chain()[0], full_set(4));
  EXPECT_EQ(back.chain()[1], make_set(4, {0, 1}));
  const auto z = transfer_intersection_point(f, 4, n);
  ASSERT_TRUE(z.has_value());
  EXPECT_TRUE(n.intersection().test(*z));
}

TEST(Preimage, EmptyPreimageRejected) {
  const BallSpace target = BallSpace::from_names({"a", "b"}, {{"b"}, {"a", "b"}});
  const std::vector<PointId> f{0, 0};
  try {
    preimage_space(f, target);
    FAIL() << "expected empty-preimage";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyPreimage);
  }
}

TEST(CofinalSubnest, SortsAndDeduplicates) {
  const std::vector<PointSet> balls{make_set(4, {2}), full_set(4), make_set(4, {1, 2}), full_set(4)};
  const Nest n = cofinal_subnest(balls);
  ASSERT_EQ(n.size(), 3u);
  EXPECT_EQ(n.largest(), full_set(4));
  EXPECT_EQ(n.smallest(), make_set(4, {2}));
  EXPECT_EQ(n.intersection(), make_set(4, {2}));
  const std::vector<PointSet> one{full_set(2)};
  EXPECT_EQ(cofinal_subnest(one).size(), 1u);
}

TEST(CofinalSubnest, RejectsNonChain) {
  const std::vector<PointSet> balls{make_set(3, {0}), make_set(3, {1})};
  EXPECT_THROW(cofinal_subnest(balls), Error);
}

TEST(NestType, RejectsUnsortedChain) {
  EXPECT_THROW(Nest({make_set(3, {0}), full_set(3)}), Error);
  EXPECT_THROW(Nest(std::vector<PointSet>{}), Error);
}

// The library's condition checkers agree with the definitional oracle on
// random collections over four points.
TEST(ConditionsProperty, AgreeWithOracle) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 1 + rng() % 4;
    std::vector<PointSet> balls;
    const std::size_t count = 1 + rng() % 5;
    for (std::size_t i = 0; i < count; ++i) {
      PointSet b(n);
      while (b.none())
        for (std::size_t p = 0; p < n; ++p)
          if (rng() % 2) b.set(p);
      balls.push_back(b);
    }
    if (rng() % 2) balls.push_back(full_set(n));
    const BallSpace s = BallSpace::unnamed(n, balls);
    std::vector<PointId> t(n);
    for (auto& x : t) x = rng() % n;
    const SelfMap f(t);
    EXPECT_EQ(check_c_conditions(s, f).passed(), oracle::c_conditions(table(f), masks(s)));
    EXPECT_EQ(check_cu_conditions(s, f).passed(), oracle::cu_conditions(n, table(f), masks(s)));
  }
}

TEST(PreimageProperty, NestsPullBackToNests) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n2 = 2 + rng() % 3;
    const std::size_t n1 = 2 + rng() % 4;
    std::vector<PointId> f(n1);
    for (auto& x : f) x = rng() % n2;
    // target chain: images of prefixes of a random order
    std::vector<PointId> order(n2);
    for (std::size_t i = 0; i < n2; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<PointSet> chain;
    for (std::size_t k = n2; k >= 1; --k) {
      PointSet b(n2);
      for (std::size_t i = 0; i < k; ++i) b.set(order[i]);
      chain.push_back(b);
    }
    bool all_hit = true;
    for (const auto& b : chain) {
      bool hit = false;
      for (PointId x : f) hit = hit || b.test(x);
      all_hit = all_hit && hit;
    }
    const Nest target(chain);
    if (!all_hit) continue;
    const Nest back = preimage_nest(f, n1, target);
    for (std::size_t i = 0; i + 1 < back.size(); ++i) EXPECT_TRUE(back.chain()[i + 1].is_subset_of(back.chain()[i]));
    if (back.intersection().any()) {
      const auto z = transfer_intersection_point(f, n1, target);
      ASSERT_TRUE(z.has_value());
      EXPECT_TRUE(target.intersection().test(*z));
    }
  }
}

TEST(Presented, TailsOfNaturalsHaveEmptyIntersection) {
  const std::function<Interval(std::size_t)> tail = [](std::size_t n) { return Interval{static_cast<long>(n), -1}; };
  const std::size_t budget = 200;
  const auto probe = probe_nest_intersection<long, Interval>(naturals(), tail, budget + 1, count_up, budget);
  EXPECT_FALSE(probe.nonempty);
  EXPECT_EQ(probe.probes, budget);
  const std::vector<std::function<Interval(std::size_t)>> nests{tail};
  const auto v = is_spherically_complete_presented<long, Interval>(naturals(), nests, budget + 1, count_up, budget);
  EXPECT_FALSE(v.complete);
  EXPECT_EQ(v.failing_nest, std::optional<std::size_t>(0));
}

TEST(Presented, BoundedNestHasSurvivor) {
  const std::function<Interval(std::size_t)> shrink = [](std::size_t n) { return Interval{0, 100 - static_cast<long>(n)}; };
  const auto probe = probe_nest_intersection<long, Interval>(naturals(), shrink, 50, count_up, 10);
  EXPECT_TRUE(probe.nonempty);
  EXPECT_EQ(probe.survivor, std::optional<long>(0));
}

TEST(Presented, NonNestRejected) {
  const std::function<Interval(std::size_t)> bad = [](std::size_t n) { return Interval{0, static_cast<long>(n)}; };
  EXPECT_THROW((probe_nest_intersection<long, Interval>(naturals(), bad, 3, count_up, 10)), Error);
}

TEST(Presented, HalvingOrbitReachesZero) {
  PresentedRun<long, Interval> run;
  run.space = naturals();
  run.f = [](const long& x) { return x / 2; };
  run.assign = [](const long& x) { return Interval{0, x}; };
  const auto r = solve_gfpt2_presented(run, 1000L, 100);
  ASSERT_TRUE(r.found());
  EXPECT_EQ(*r.witness, 0);
  EXPECT_EQ(r.nest.size(), 11u);

  const std::vector<long> starts{5, 64, 999};
  const std::vector<long> probes{0, 1, 2, 3};
  EXPECT_TRUE((check_sc_axioms_sampled<long, Interval>(run.space, run.f, run.assign, starts, 20, probes).passed()));
}

TEST(Presented, ChooserOutsideNestRejected) {
  PresentedRun<long, Interval> run;
  run.space = naturals();
  run.f = [](const long& x) { return x / 2; };
  run.assign = [](const long& x) { return Interval{0, x}; };
  run.chooser = [](std::span<const NestLink<long, Interval>>) -> std::optional<long> { return 5000; };
  EXPECT_THROW(solve_gfpt2_presented(run, 1000L, 100), Error);
}

TEST(Presented, NonNestingAssignmentReported) {
  PresentedRun<long, Interval> run;
  run.space = naturals();
  run.f = [](const long& x) { return x + 1; };
  run.assign = [](const long& x) { return Interval{x, x + 1}; };
  const auto r = solve_gfpt2_presented(run, 0L, 10);
  EXPECT_EQ(r.outcome, Outcome::HypothesisViolated);
  EXPECT_EQ(r.violated, "SC2");
}
