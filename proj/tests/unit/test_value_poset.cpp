#include "ballfix/value_poset.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ballfix;

TEST(ValuePoset, BottomBelowEverything) {
  const ValuePoset c = ValuePoset::chain(4);
  for (ValueId i = 0; i < c.size(); ++i) EXPECT_TRUE(c.leq(c.bottom(), c.value(i)));
}

TEST(ValuePoset, ChainOrder) {
  const ValuePoset c = ValuePoset::chain({"0", "a", "b"});
  EXPECT_TRUE(c.leq(c.value("a"), c.value("b")));
  EXPECT_FALSE(c.leq(c.value("b"), c.value("a")));
  EXPECT_TRUE(c.is_total());
}

TEST(ValuePoset, AntichainPair) {
  const ValuePoset p({"0", "g", "d"}, {{0, 1}, {0, 2}}, 0);
  EXPECT_FALSE(p.leq(p.value("g"), p.value("d")));
  EXPECT_FALSE(p.leq(p.value("d"), p.value("g")));
  EXPECT_FALSE(p.comparable(p.value("g"), p.value("d")));
  EXPECT_TRUE(p.comparable(p.value("g"), p.value("g")));
  EXPECT_FALSE(p.is_total());
}

TEST(ValuePoset, CrossPosetComparisonRejected) {
  const ValuePoset a = ValuePoset::chain(2);
  const ValuePoset b = ValuePoset::chain(2);
  try {
    a.leq(a.value(0), b.value(1));
    FAIL() << "expected domain-mismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DomainMismatch);
  }
}

TEST(ValuePoset, RejectsCycle) {
  EXPECT_THROW(ValuePoset({"0", "a", "b"}, {{0, 1}, {0, 2}, {1, 2}, {2, 1}}, 0), Error);
}

TEST(ValuePoset, RejectsNonTransitive) {
  EXPECT_THROW(ValuePoset({"0", "a", "b", "c"}, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {2, 3}}, 0), Error);
}

TEST(ValuePoset, RejectsMissingBottom) {
  EXPECT_THROW(ValuePoset({"0", "a", "b"}, {{0, 1}}, 0), Error);
}

TEST(ValuePoset, ClosureLoader) {
  const ValuePoset p = ValuePoset::from_names({"0", "a", "b", "c"}, {{"0", "a"}, {"a", "b"}, {"b", "c"}}, "0");
  EXPECT_TRUE(p.leq(p.value("0"), p.value("c")));
  EXPECT_TRUE(p.leq(p.value("a"), p.value("c")));
}

TEST(ProductPoset, DiamondHasIncomparablePair) {
  const ValuePoset c = ValuePoset::chain(2);
  const ValuePoset d = product_poset(c, c);
  ASSERT_EQ(d.size(), 4u);
  // (0,1) has id 1, (1,0) has id 2
  EXPECT_FALSE(d.comparable_id(1, 2));
  EXPECT_TRUE(d.leq_id(0, 3));
  EXPECT_EQ(d.bottom_id(), 0u);
}

TEST(ProductPoset, TrivialFactorIsIsomorphic) {
  const ValuePoset p = ValuePoset::chain(3);
  const ValuePoset q = product_poset(p, ValuePoset::trivial());
  ASSERT_EQ(q.size(), p.size());
  for (ValueId a = 0; a < p.size(); ++a)
    for (ValueId b = 0; b < p.size(); ++b) EXPECT_EQ(q.leq_id(a, b), p.leq_id(a, b));
}

TEST(ProductPoset, SixElementMaximalPairIncomparable) {
  const ValuePoset q = product_poset(ValuePoset::chain(3), ValuePoset::chain(2));
  ASSERT_EQ(q.size(), 6u);
  // (2,0) = 4, (1,1) = 3
  EXPECT_FALSE(q.comparable_id(4, 3));
  int maximal = 0;
  for (ValueId a = 0; a < 6; ++a) {
    bool top = true;
    for (ValueId b = 0; b < 6; ++b) top = top && !q.lt_id(a, b);
    maximal += top;
  }
  EXPECT_EQ(maximal, 1);
}

// Componentwise order, checked against independent enumeration.
TEST(ProductPoset, ComponentwiseExhaustive) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const ValuePoset p = random_poset(1 + rng() % 4, 0.4, rng);
    const ValuePoset q = random_poset(1 + rng() % 4, 0.4, rng);
    const ValuePoset r = product_poset(p, q);
    for (ValueId a1 = 0; a1 < p.size(); ++a1)
      for (ValueId a2 = 0; a2 < q.size(); ++a2)
        for (ValueId b1 = 0; b1 < p.size(); ++b1)
          for (ValueId b2 = 0; b2 < q.size(); ++b2)
            EXPECT_EQ(r.leq_id(a1 * q.size() + a2, b1 * q.size() + b2), p.leq_id(a1, b1) && q.leq_id(a2, b2));
  }
}

TEST(ValuePosetProperty, RandomPosetsArePartialOrders) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const ValuePoset p = random_poset(1 + rng() % 7, 0.3, rng);
    const std::size_t n = p.size();
    for (ValueId a = 0; a < n; ++a) {
      EXPECT_TRUE(p.leq_id(a, a));
      EXPECT_TRUE(p.leq_id(p.bottom_id(), a));
      for (ValueId b = 0; b < n; ++b) {
        EXPECT_EQ(p.comparable_id(a, b), p.comparable_id(b, a));
        if (a != b && p.leq_id(a, b)) EXPECT_FALSE(p.leq_id(b, a));
        for (ValueId c = 0; c < n; ++c)
          if (p.leq_id(a, b) && p.leq_id(b, c)) EXPECT_TRUE(p.leq_id(a, c));
      }
    }
  }
}

// Random relations either build a valid order or are rejected; they are
// rejected exactly when antisymmetry, transitivity or the bottom fails.
TEST(ValuePosetProperty, RandomRelationsValidated) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng() % 3;
    std::vector<std::pair<ValueId, ValueId>> rel;
    std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
    for (ValueId a = 0; a < n; ++a) m[a][a] = true;
    for (ValueId a = 0; a < n; ++a)
      for (ValueId b = 0; b < n; ++b)
        if (a != b && rng() % 3 == 0) {
          rel.emplace_back(a, b);
          m[a][b] = true;
        }
    bool ok = true;
    for (ValueId a = 0; a < n; ++a) {
      ok = ok && m[0][a];
      for (ValueId b = 0; b < n; ++b) {
        if (a != b && m[a][b] && m[b][a]) ok = false;
        for (ValueId c = 0; c < n; ++c)
          if (m[a][b] && m[b][c] && !m[a][c]) ok = false;
      }
    }
    std::vector<std::string> names;
    for (ValueId a = 0; a < n; ++a) names.push_back("v" + std::to_string(a));
    if (ok)
      EXPECT_NO_THROW(ValuePoset(names, rel, 0));
    else
      EXPECT_THROW(ValuePoset(names, rel, 0), Error);
  }
}
