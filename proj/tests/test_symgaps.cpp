#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "ifsgap/errors.hpp"
#include "ifsgap/symgaps.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace ifsgap;
using namespace ifsgap::symgaps;
using testing_support::load;
using testing_support::q;
using testing_support::qs;

namespace {

// Complementary gaps >= cutoff of an exact cover fine enough that no spurious gap from
// the finite depth can reach the cutoff.
std::vector<Rational> oracle_gaps(const model::GDInstance& g, std::size_t u, const Rational& cutoff) {
  const auto h = model::hulls(g);
  std::vector<oracle::Iv> hv;
  for (const auto& iv : h) hv.emplace_back(iv.lo, iv.hi);
  Rational diam(0);
  for (const auto& iv : h) diam = max(diam, iv.length());
  const Rational rmax = g.max_ratio();
  int depth = 0;
  for (Rational res = diam; !(res < cutoff / Rational(4)); res *= rmax) ++depth;
  const auto got = oracle::complement_gaps(oracle::merged(oracle::cover(g, hv, u, depth)), cutoff);
  return {got.begin(), got.end()};
}

}  // namespace

TEST(Build, LevelZeroGaps) {
  EXPECT_EQ(SymbolicGapSet::build(load("cantor"), 0).level0(0), qs({{1, 3}}));
  EXPECT_EQ(SymbolicGapSet::build(load("mixed"), 0).level0(0), qs({{1, 6}}));
  // gd2: u children [0,1/4] and [3/4,1]; v children [0,1/3] and [2/3,1].
  const auto s = SymbolicGapSet::build(load("gd2"), 0);
  EXPECT_EQ(s.level0(0), qs({{1, 2}}));
  EXPECT_EQ(s.level0(1), qs({{1, 3}}));
  EXPECT_EQ(s.natural_delta(), q(1, 3));
}

TEST(Build, RejectsInstancesWithoutHullDisjointness) {
  EXPECT_THROW(SymbolicGapSet::build(load("overlap3"), 0), UnsupportedError);
  EXPECT_THROW(SymbolicGapSet::build(load("halves"), 0), UnsupportedError);
}

TEST(Enumerate, Examples) {
  EXPECT_EQ(SymbolicGapSet::build(load("cantor"), 0).enumerate(q(1, 100)).values,
            qs({{1, 81}, {1, 27}, {1, 9}, {1, 3}}));
  EXPECT_EQ(SymbolicGapSet::build(load("mixed"), 0).enumerate(q(1, 40)).values,
            qs({{1, 36}, {1, 24}, {1, 18}, {1, 12}, {1, 6}}));
  EXPECT_TRUE(SymbolicGapSet::build(load("mixed"), 0).enumerate(q(2)).values.empty());
}

TEST(Enumerate, BudgetIsEnforced) {
  const auto s = SymbolicGapSet::build(load("mixed"), 0);
  EXPECT_THROW(s.enumerate(q(1, 1'000'000), 50), ResourceError);
}

TEST(Enumerate, MatchesCoverComplementOnFixtures) {
  for (const char* name : {"cantor", "mixed", "iterate2-cantor", "gd2"}) {
    const auto g = load(name);
    for (std::size_t u = 0; u < g.vertex_count(); ++u) {
      const auto s = SymbolicGapSet::build(g, u);
      for (const auto& cutoff : qs({{1, 10}, {1, 50}, {1, 200}})) {
        EXPECT_EQ(s.enumerate(cutoff).values, oracle_gaps(g, u, cutoff)) << name << " u=" << u << " " << cutoff;
      }
    }
  }
}

TEST(Enumerate, MatchesCoverComplementOnRandomInstances) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = oracle::random_disjoint_ifs(rng, 2, 3);
    const auto s = SymbolicGapSet::build(g, 0);
    const Rational cutoff(1, 60);
    EXPECT_EQ(s.enumerate(cutoff).values, oracle_gaps(g, 0, cutoff)) << g.to_json().dump();
  }
}

TEST(Enumerate, RecursiveIdentity) {
  for (const char* name : {"cantor", "mixed", "gd2"}) {
    const auto g = load(name);
    const auto s = SymbolicGapSet::build(g, 0);
    const Rational cutoff(1, 500);
    std::set<Rational> expect;
    for (const auto& x : s.level0(0)) {
      if (x >= cutoff) expect.insert(x);
    }
    for (auto ei : g.out_edges(0)) {
      const auto& e = g.edges()[ei];
      for (const auto& x : s.enumerate_at(e.to, cutoff / e.map.ratio).values) expect.insert(e.map.ratio * x);
    }
    EXPECT_EQ(s.enumerate(cutoff).values, std::vector<Rational>(expect.begin(), expect.end())) << name;
  }
}

TEST(Enumerate, MonotoneInCutoff) {
  const auto s = SymbolicGapSet::build(load("mixed"), 0);
  std::vector<Rational> prev;
  for (long d : {10, 30, 100, 300, 1000}) {
    const auto cur = s.enumerate(q(1, d)).values;
    EXPECT_TRUE(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
    prev = cur;
  }
}

TEST(Contains, Examples) {
  const auto c = SymbolicGapSet::build(load("cantor"), 0);
  EXPECT_TRUE(c.contains(q(1, 27)));
  EXPECT_FALSE(c.contains(q(1, 2)));
  EXPECT_FALSE(c.contains(q(3, 2)));
  const auto m = SymbolicGapSet::build(load("mixed"), 0);
  EXPECT_TRUE(m.contains(q(1, 6) * q(1, 8) * q(1, 9)));
  EXPECT_FALSE(m.contains(q(1, 5)));
}

TEST(Contains, AgreesWithEnumeration) {
  for (const char* name : {"cantor", "mixed", "gd2", "iterate2-cantor"}) {
    const auto s = SymbolicGapSet::build(load(name), 0);
    const auto listed = s.enumerate(q(1, 2000)).values;
    const std::set<Rational> in(listed.begin(), listed.end());
    for (const auto& x : listed) {
      EXPECT_TRUE(s.contains(x)) << name << " " << x;
      EXPECT_FALSE(s.representations(x).empty());
    }
    // Ratios of neighbours are mostly not gaps; check agreement on them.
    for (std::size_t i = 0; i + 1 < listed.size(); ++i) {
      const Rational y = (listed[i] + listed[i + 1]) / q(2);
      EXPECT_EQ(s.contains(y), in.count(y) > 0) << name << " " << y;
    }
  }
}

TEST(Contains, ClosedUnderRatioProducts) {
  for (const char* name : {"cantor", "mixed", "iterate2-cantor"}) {
    const auto g = load(name);
    const auto s = SymbolicGapSet::build(g, 0);
    const auto ratios = g.ratio_set();
    const auto products = oracle::products_above(ratios, q(1, 5000));
    for (const auto& x : s.enumerate(q(1, 100)).values) {
      for (const auto& r : products) EXPECT_TRUE(s.contains(x * r)) << name << " " << x << "*" << r;
    }
  }
}

TEST(ResidualSplit, Examples) {
  const auto c = SymbolicGapSet::build(load("cantor"), 0);
  EXPECT_EQ(residual_split(c, q(1, 4)).gamma, qs({{1, 3}}));
  EXPECT_TRUE(residual_split(c, q(1, 2)).gamma.empty());
  const auto m = SymbolicGapSet::build(load("mixed"), 0);
  EXPECT_EQ(residual_split(m, q(1, 10)).gamma, qs({{1, 6}}));
}

TEST(ResidualSplit, TailGeneratorsLieBelowDelta) {
  const auto g = load("gd2");
  const auto s = SymbolicGapSet::build(g, 0);
  const Rational delta(1, 5);
  const auto split = residual_split(s, delta);
  EXPECT_EQ(split.gamma, s.enumerate(delta).values);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    for (const auto& l : split.lambda_by_vertex[v]) {
      EXPECT_LT(l, delta);
      EXPECT_TRUE(SymbolicGapSet::build(g, v).contains(l));
    }
  }
}
