#include "ballfix/topology.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace ballfix;

namespace {

oracle::Table table_of(const SelfMap& f) { return {f.table().begin(), f.table().end()}; }

std::vector<oracle::Set> sets_of(const std::vector<Mask>& ms) { return {ms.begin(), ms.end()}; }

bool is_subset_mask(Mask a, Mask b) { return (a & ~b) == 0; }

// Antichains of nonempty opens covering X, by brute force over subfamilies.
std::vector<std::vector<Mask>> antichain_covers(const FiniteTopology& top) {
  std::vector<Mask> nonempty;
  for (Mask m : top.opens())
    if (m != 0) nonempty.push_back(m);
  std::vector<std::vector<Mask>> out;
  for (std::uint32_t bits = 1; bits < (1u << nonempty.size()); ++bits) {
    std::vector<Mask> fam;
    Mask u = 0;
    for (std::size_t i = 0; i < nonempty.size(); ++i)
      if (bits >> i & 1) {
        fam.push_back(nonempty[i]);
        u |= nonempty[i];
      }
    if (u != top.full()) continue;
    bool antichain = true;
    for (Mask a : fam)
      for (Mask b : fam)
        if (a != b && is_subset_mask(a, b)) antichain = false;
    if (antichain) out.push_back(fam);
  }
  return out;
}

FiniteTopology discrete_named(std::vector<std::string> names) {
  const std::size_t n = names.size();
  std::vector<Mask> opens;
  for (Mask m = 0; m < (Mask{1} << n); ++m) opens.push_back(m);
  return FiniteTopology(n, opens, std::move(names));
}

}  // namespace

TEST(FiniteTopology, RejectsNonTopologies) {
  EXPECT_THROW(FiniteTopology(2, {0, 1, 2}), Error);
  EXPECT_THROW(FiniteTopology(2, {1, 3}), Error);
  EXPECT_THROW(FiniteTopology(3, {0, 1, 2, 7}), Error);
}

TEST(FiniteTopology, SierpinskiStructure) {
  const FiniteTopology s = FiniteTopology::sierpinski();
  const Mask o = Mask{1} << s.point("o");
  const Mask c = Mask{1} << s.point("c");
  EXPECT_TRUE(s.is_open(o));
  EXPECT_FALSE(s.is_closed(o));
  EXPECT_TRUE(s.is_closed(c));
  EXPECT_EQ(s.closure(o), s.full());
  EXPECT_EQ(s.closure(c), c);
  EXPECT_TRUE(s.is_connected());
  EXPECT_FALSE(s.is_hausdorff());
  EXPECT_EQ(s.closed_sets().size(), 3u);
}

TEST(ClosedMap, SierpinskiExamples) {
  const FiniteTopology s = FiniteTopology::sierpinski();
  const PointId o = s.point("o"), c = s.point("c");
  EXPECT_TRUE(is_closed_map(s, SelfMap::identity(2)).closed);
  EXPECT_TRUE(is_closed_map(s, SelfMap({c, c})).closed);
  const ClosedMapVerdict to_o = is_closed_map(s, SelfMap({o, o}));
  EXPECT_FALSE(to_o.closed);
  EXPECT_EQ(to_o.witness, Mask{1} << c);
}

TEST(ClosedMap, DiscreteAlwaysClosed) {
  const FiniteTopology d = FiniteTopology::discrete(3);
  for (const SelfMap& f : all_self_maps(3)) EXPECT_TRUE(is_closed_map(d, f).closed);
}

TEST(Topn, SierpinskiStrong) {
  const FiniteTopology s = FiniteTopology::sierpinski();
  const PointId c = s.point("c");
  const SelfMap f({c, c});
  const TopnReport r = check_topn_hypotheses(s, f);
  EXPECT_EQ(r.verdict, TopnVerdict::Strong);
  EXPECT_EQ(r.invariant_closed.size(), 2u);
  const FixedPointReport sol = solve_topn(s, f);
  ASSERT_TRUE(sol.found());
  EXPECT_EQ(*sol.witness, c);
  EXPECT_EQ(brute_force_fixed_points(f), std::vector<PointId>{c});
}

TEST(Topn, DiscreteIdentityWeak) {
  const TopnReport r = check_topn_hypotheses(FiniteTopology::discrete(2), SelfMap::identity(2));
  EXPECT_EQ(r.verdict, TopnVerdict::Weak);
  EXPECT_EQ(r.witness, Mask{3});
  const FixedPointReport sol = solve_topn(FiniteTopology::discrete(2), SelfMap::identity(2));
  EXPECT_TRUE(sol.found());
}

TEST(Topn, DiscreteSwapFails) {
  const SelfMap swap({1, 0});
  const TopnReport r = check_topn_hypotheses(FiniteTopology::discrete(2), swap);
  EXPECT_EQ(r.verdict, TopnVerdict::Fails);
  EXPECT_EQ(r.witness, Mask{3});
  const FixedPointReport sol = solve_topn(FiniteTopology::discrete(2), swap);
  EXPECT_EQ(sol.outcome, Outcome::HypothesisViolated);
  EXPECT_EQ(sol.violated, "topn");
}

TEST(Topn, OnePointIdentity) {
  const FixedPointReport sol = solve_topn(FiniteTopology::discrete(1), SelfMap::identity(1));
  ASSERT_TRUE(sol.found());
  EXPECT_EQ(*sol.witness, 0u);
}

TEST(Topn, NonClosedMapRejected) {
  const FiniteTopology s = FiniteTopology::sierpinski();
  const PointId o = s.point("o");
  try {
    check_topn_hypotheses(s, SelfMap({o, o}));
    FAIL() << "expected precondition";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Precondition);
  }
}

TEST(SmallestInvariantClosed, Examples) {
  const FiniteTopology s = FiniteTopology::sierpinski();
  const PointId o = s.point("o"), c = s.point("c");
  const SelfMap f({c, c});
  EXPECT_EQ(smallest_invariant_closed(s, f, o), s.full());
  EXPECT_EQ(smallest_invariant_closed(s, f, c), Mask{1} << c);
  EXPECT_TRUE(top3_hypothesis(s, f));

  const FiniteTopology d = discrete_named({"a", "b", "c"});
  const SelfMap chain({1, 2, 2});
  EXPECT_EQ(smallest_invariant_closed(d, chain, 0), d.full());
  EXPECT_EQ(smallest_invariant_closed(d, chain, 1), Mask{6});
  EXPECT_EQ(smallest_invariant_closed(d, chain, 2), Mask{4});
  EXPECT_TRUE(top3_hypothesis(d, chain));
  EXPECT_TRUE(check_sc_axioms(chain, smallest_invariant_assignment(d, chain)).passed());
}

TEST(SmallestInvariantClosed, FixedPointWithClosedSingleton) {
  const FiniteTopology d = FiniteTopology::discrete(2);
  EXPECT_EQ(smallest_invariant_closed(d, SelfMap::identity(2), 1), Mask{2});
  EXPECT_FALSE(top3_hypothesis(d, SelfMap({1, 0})));
}

TEST(JContraction, Examples) {
  EXPECT_TRUE(check_j_contraction(FiniteTopology::discrete(1), SelfMap::identity(1)).holds);
  EXPECT_TRUE(check_j_contraction(FiniteTopology::discrete(2), SelfMap::identity(2)).holds);
  const SelfMap swap({1, 0});
  const JContractionVerdict v = check_j_contraction(FiniteTopology::discrete(2), swap);
  EXPECT_TRUE(v.holds);
  EXPECT_TRUE(v.complete);
  // a J-contraction of a disconnected space without fixed points
  EXPECT_TRUE(brute_force_fixed_points(swap).empty());
}

TEST(JContraction, CapLabelsPartialVerdict) {
  const JContractionVerdict v = check_j_contraction(FiniteTopology::discrete(3), SelfMap::identity(3), 2);
  EXPECT_FALSE(v.complete);
  EXPECT_LE(v.covers_checked, 2u);
}

TEST(JLemmas, Preconditions) {
  const JLemmaReport one = check_j_lemmas(FiniteTopology::discrete(1), SelfMap::identity(1));
  EXPECT_TRUE(one.preconditions);
  EXPECT_TRUE(one.checks.passed());

  const JLemmaReport two = check_j_lemmas(FiniteTopology::discrete(2), SelfMap({1, 0}));
  EXPECT_FALSE(two.preconditions);
  EXPECT_TRUE(two.checks.holds("Hausdorff"));
  EXPECT_FALSE(two.checks.holds("connected"));

  const FiniteTopology s = FiniteTopology::sierpinski();
  const PointId c = s.point("c");
  const JLemmaReport sier = check_j_lemmas(s, SelfMap({c, c}));
  EXPECT_FALSE(sier.preconditions);
  EXPECT_TRUE(sier.checks.holds("connected"));
  EXPECT_FALSE(sier.checks.holds("Hausdorff"));
  EXPECT_EQ(check_topn_hypotheses(s, SelfMap({c, c})).verdict, TopnVerdict::Strong);
}

TEST(Enumeration, Counts) {
  const std::size_t classes[] = {1, 3, 9, 33};
  const std::size_t labeled[] = {1, 4, 29, 355};
  for (std::size_t n = 1; n <= 4; ++n) {
    EXPECT_EQ(enumerate_topologies(n, true).size(), classes[n - 1]);
    EXPECT_EQ(enumerate_topologies(n, false).size(), labeled[n - 1]);
  }
  EXPECT_THROW(enumerate_topologies(5), Error);
  EXPECT_EQ(all_self_maps(3).size(), 27u);
}

// Every chain of nonempty closed sets has nonempty intersection.
TEST(TopologyProperty, ClosedSetsSphericallyComplete) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (const FiniteTopology& top : enumerate_topologies(n, false)) {
      EXPECT_TRUE(is_spherically_complete(top.closed_ball_space()));
      std::vector<Mask> closed;
      for (Mask m : top.closed_sets())
        if (m != 0) closed.push_back(m);
      for (std::uint32_t bits = 1; bits < (1u << closed.size()); ++bits) {
        Mask meet = top.full();
        bool chain = true;
        for (std::size_t i = 0; i < closed.size() && chain; ++i) {
          if (!(bits >> i & 1)) continue;
          for (std::size_t j = 0; j < closed.size(); ++j)
            if ((bits >> j & 1) && !is_subset_mask(closed[i], closed[j]) && !is_subset_mask(closed[j], closed[i]))
              chain = false;
          meet &= closed[i];
        }
        if (chain) EXPECT_NE(meet, 0u);
      }
    }
}

TEST(TopologyProperty, ClosureIsSmallestClosedSuperset) {
  for (const FiniteTopology& top : enumerate_topologies(3, false))
    for (Mask a = 0; a <= top.full(); ++a) {
      Mask expected = top.full();
      for (Mask b : top.closed_sets())
        if (is_subset_mask(a, b)) expected &= b;
      EXPECT_EQ(top.closure(a), expected);
    }
}

TEST(TopologyProperty, TopnVerdictsAgainstOracle) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (const FiniteTopology& top : enumerate_topologies(n, true))
      for (const SelfMap& f : all_self_maps(n)) {
        const oracle::Table t = table_of(f);
        bool closed = true;
        for (Mask b : top.closed_sets()) closed = closed && top.is_closed(oracle::image(t, b));
        EXPECT_EQ(is_closed_map(top, f).closed, closed);
        if (!closed) continue;

        bool strong = true, weak = true;
        for (Mask b : top.closed_sets()) {
          if (b == 0 || !is_subset_mask(oracle::image(t, b), b)) continue;
          strong = strong && oracle::contracting(t, b);
          bool sub = false;
          for (Mask c : top.closed_sets()) sub = sub || (c != 0 && is_subset_mask(c, b) && oracle::contracting(t, c));
          weak = weak && sub;
        }
        const TopnReport r = check_topn_hypotheses(top, f);
        const TopnVerdict expected = strong ? TopnVerdict::Strong : weak ? TopnVerdict::Weak : TopnVerdict::Fails;
        ASSERT_EQ(r.verdict, expected);

        const auto fixed = oracle::fixed_points(t);
        const FixedPointReport sol = solve_topn(top, f);
        if (expected == TopnVerdict::Fails) {
          EXPECT_EQ(sol.outcome, Outcome::HypothesisViolated);
          continue;
        }
        ASSERT_TRUE(sol.found());
        EXPECT_NE(std::find(fixed.begin(), fixed.end(), *sol.witness), fixed.end());
        if (expected == TopnVerdict::Strong) EXPECT_EQ(fixed.size(), 1u);
      }
}

TEST(TopologyProperty, Top3AssignmentsAreSelfContractive) {
  std::size_t instances = 0;
  for (std::size_t n = 1; n <= 3; ++n)
    for (const FiniteTopology& top : enumerate_topologies(n, true))
      for (const SelfMap& f : all_self_maps(n)) {
        if (!is_closed_map(top, f).closed || !top3_hypothesis(top, f)) continue;
        ++instances;
        const BallAssignment a = smallest_invariant_assignment(top, f);
        std::vector<oracle::Set> assign;
        for (PointId x = 0; x < n; ++x) assign.push_back(top.to_mask(a[x]));
        const oracle::ScVerdict v = oracle::sc_conditions(n, table_of(f), assign);
        EXPECT_TRUE(v.sc1 && v.sc2 && v.sc3 && v.nest);
        EXPECT_TRUE(check_sc_axioms(f, a).passed());
      }
  EXPECT_GT(instances, 0u);
}

TEST(TopologyProperty, JContractionAgainstOracle) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (const FiniteTopology& top : enumerate_topologies(n, true)) {
      const auto covers = antichain_covers(top);
      EXPECT_EQ(open_covers(top, kDefaultCoverCap).size(), covers.size());
      for (const SelfMap& f : all_self_maps(n)) {
        const oracle::Table t = table_of(f);
        bool all = true;
        for (const auto& cover : covers) {
          const bool exists = oracle::j_refinement_exists(n, sets_of(top.opens()), t, sets_of(cover));
          Mask u = 0;
          for (Mask v : greatest_j_refinement(top, f, cover)) u |= v;
          EXPECT_EQ(u == top.full(), exists);
          all = all && exists;
        }
        const JContractionVerdict v = check_j_contraction(top, f);
        EXPECT_TRUE(v.complete);
        EXPECT_EQ(v.holds, all);
      }
    }
}

TEST(TopologyProperty, JLemmaChain) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (const FiniteTopology& top : enumerate_topologies(n, true))
      for (const SelfMap& f : all_self_maps(n)) {
        if (!is_closed_map(top, f).closed) continue;
        const JLemmaReport r = check_j_lemmas(top, f);
        EXPECT_EQ(r.preconditions, n == 1);
        if (r.preconditions) EXPECT_TRUE(r.checks.passed());
      }
}
