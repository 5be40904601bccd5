#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "ifsgap/errors.hpp"
#include "ifsgap/model.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace ifsgap;
using namespace ifsgap::model;
using testing_support::load;
using testing_support::map;
using testing_support::q;

namespace {

bool has_finding(const std::vector<std::string>& fs, const std::string& needle) {
  return std::any_of(fs.begin(), fs.end(), [&](const std::string& f) { return f.find(needle) != std::string::npos; });
}

// Hulls by iterating I_u <- hull(U S_e(I_v)) in floating point from a large box.
std::vector<std::pair<double, double>> iterated_hulls(const GDInstance& g) {
  std::vector<std::pair<double, double>> h(g.vertex_count(), {-100.0, 100.0});
  for (int step = 0; step < 400; ++step) {
    std::vector<std::pair<double, double>> next(g.vertex_count(), {1e300, -1e300});
    for (const auto& e : g.edges()) {
      const double r = e.map.sign * e.map.ratio.to_double(), b = e.map.offset.to_double();
      const double x = r * h[e.to].first + b, y = r * h[e.to].second + b;
      next[e.from].first = std::min({next[e.from].first, x, y});
      next[e.from].second = std::max({next[e.from].second, x, y});
    }
    h = next;
  }
  return h;
}

GDInstance random_valid_ifs(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(2, 4);
  std::uniform_int_distribution<long> off(-12, 12);
  std::bernoulli_distribution flip(0.4);
  while (true) {
    std::vector<Similarity1D> maps;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) maps.push_back(map(oracle::smooth_ratio(rng, q(9, 10)), q(off(rng), 12), flip(rng) ? -1 : 1));
    auto g = GDInstance::ifs(maps);
    if (validate(g).empty()) return g;
  }
}

std::vector<Interval> intervals(const std::vector<oracle::Iv>& ivs) {
  std::vector<Interval> out;
  for (const auto& [a, b] : ivs) out.push_back({a, b});
  return out;
}

}  // namespace

TEST(Validate, FixturesAndFindings) {
  for (const char* name : {"cantor", "mixed", "iterate2-cantor", "overlap3", "gd2", "halves"}) {
    EXPECT_TRUE(validate(load(name)).empty()) << name;
  }
  EXPECT_TRUE(has_finding(validate(load("single-map")), "d_u = 1 < 2"));
  const auto bad = GDInstance::ifs({map(q(3, 2), q(0)), map(q(1, 3), q(2, 3))});
  EXPECT_TRUE(has_finding(validate(bad), "not contracting"));
  const auto dup = GDInstance::ifs({map(q(1, 3), q(0)), map(q(1, 3), q(0)), map(q(1, 3), q(2, 3))});
  EXPECT_FALSE(validate(dup).empty());
  EXPECT_THROW(require_valid(bad), ValidationError);
}

TEST(Instance, JsonRoundTripAndMalformedInput) {
  const auto g = load("gd2");
  const auto back = GDInstance::from_json(g.to_json());
  ASSERT_EQ(back.edge_count(), g.edge_count());
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    EXPECT_EQ(back.edges()[i].map, g.edges()[i].map);
    EXPECT_EQ(back.edges()[i].from, g.edges()[i].from);
    EXPECT_EQ(back.edges()[i].to, g.edges()[i].to);
  }
  EXPECT_THROW(GDInstance::from_json(nlohmann::json::parse(R"({"ifs": [{"ratio": "x"}]})")), DomainError);
  EXPECT_THROW(GDInstance::from_json(nlohmann::json::parse(R"({"edges": []})")), DomainError);
}

TEST(Hulls, Examples) {
  EXPECT_EQ(hulls(load("cantor"))[0], (Interval{q(0), q(1)}));
  EXPECT_EQ(hulls(load("mixed"))[0], (Interval{q(0), q(1)}));
  const auto flipped = GDInstance::ifs({map(q(1, 3), q(1), -1), map(q(1, 3), q(0))});
  const auto h = hulls(flipped)[0];
  const auto it = iterated_hulls(flipped)[0];
  EXPECT_NEAR(h.lo.to_double(), it.first, 1e-12);
  EXPECT_NEAR(h.hi.to_double(), it.second, 1e-12);
  const auto gd = hulls(load("gd2"));
  EXPECT_EQ(gd[0], (Interval{q(0), q(1)}));
  EXPECT_EQ(gd[1], (Interval{q(0), q(1)}));
}

TEST(Hulls, SelfConsistentAndMatchIterationOnRandomInstances) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = random_valid_ifs(rng);
    const auto h = hulls(g);
    const auto kids = child_hulls(g, h, 0);
    Rational lo = kids[0].interval.lo, hi = kids[0].interval.hi;
    for (const auto& k : kids) {
      lo = min(lo, k.interval.lo);
      hi = max(hi, k.interval.hi);
    }
    EXPECT_EQ(lo, h[0].lo);
    EXPECT_EQ(hi, h[0].hi);
    const auto it = iterated_hulls(g)[0];
    EXPECT_NEAR(h[0].lo.to_double(), it.first, 1e-9);
    EXPECT_NEAR(h[0].hi.to_double(), it.second, 1e-9);
  }
}

TEST(ChildHulls, Examples) {
  auto check = [](const GDInstance& g, std::vector<Interval> expect) {
    const auto kids = child_hulls(g, hulls(g), 0);
    ASSERT_EQ(kids.size(), expect.size());
    for (std::size_t i = 0; i < kids.size(); ++i) EXPECT_EQ(kids[i].interval, expect[i]);
  };
  check(load("cantor"), {{q(0), q(1, 3)}, {q(2, 3), q(1)}});
  check(load("mixed"), {{q(0), q(1, 2)}, {q(2, 3), q(1)}});
  check(GDInstance::ifs({map(q(1, 2), q(1, 2)), map(q(1, 4), q(0))}), {{q(0), q(1, 4)}, {q(1, 2), q(1)}});
}

TEST(Separation, FixtureVerdicts) {
  for (const char* name : {"cantor", "mixed", "iterate2-cantor", "gd2"}) {
    const auto g = load(name);
    EXPECT_EQ(separation_check(g).verdict, Separation::hull_disjoint) << name;
    const auto h = hulls(g);
    for (std::size_t u = 0; u < g.vertex_count(); ++u) {
      const auto kids = child_hulls(g, h, u);
      for (std::size_t i = 0; i + 1 < kids.size(); ++i) EXPECT_LT(kids[i].interval.hi, kids[i + 1].interval.lo);
    }
  }
  const auto g3 = load("overlap3");
  const auto nest = separation_check(g3);
  EXPECT_EQ(nest.verdict, Separation::overlap);
  ASSERT_TRUE(nest.nested_edge);
  EXPECT_EQ(g3.edges()[*nest.nested_edge].id, "S3");
  EXPECT_EQ(g3.edges()[*nest.container_edge].id, "S1");

  const auto touch = separation_check(load("halves"));
  EXPECT_EQ(touch.verdict, Separation::overlap);
  ASSERT_TRUE(touch.witness_point);
  EXPECT_EQ(*touch.witness_point, q(1, 2));
}

TEST(Separation, RandomDisjointInstancesAreHullDisjoint) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    EXPECT_EQ(separation_check(oracle::random_disjoint_ifs(rng)).verdict, Separation::hull_disjoint);
  }
}

TEST(Approximate, Examples) {
  const auto c = approximate(load("cantor"), 0, 2);
  EXPECT_EQ(c.intervals, (std::vector<Interval>{{q(0), q(1, 9)}, {q(2, 9), q(1, 3)}, {q(2, 3), q(7, 9)}, {q(8, 9), q(1)}}));
  EXPECT_EQ(c.resolution, q(1, 9));
  const auto m = load("mixed");
  EXPECT_EQ(approximate(m, 0, 0).intervals, (std::vector<Interval>{{q(0), q(1)}}));
  EXPECT_EQ(approximate(m, 0, 1).intervals, (std::vector<Interval>{{q(0), q(1, 2)}, {q(2, 3), q(1)}}));
  const auto ends = approximate(load("cantor"), 0, 1, {.points = PointMode::endpoints});
  EXPECT_EQ(ends.points, (std::vector<Rational>{q(0), q(1, 3), q(2, 3), q(1)}));
  EXPECT_EQ(approximate(load("cantor"), 0, 1).points, (std::vector<Rational>{q(1, 6), q(5, 6)}));
}

TEST(Approximate, BudgetIsEnforced) {
  EXPECT_THROW(approximate(load("cantor"), 0, 20), ResourceError);
  EXPECT_NO_THROW(approximate(load("cantor"), 0, 10, {.interval_budget = 1024}));
  EXPECT_THROW(approximate(load("cantor"), 0, 11, {.interval_budget = 1024}), ResourceError);
}

TEST(Approximate, CoversNestAndMatchOracle) {
  for (const char* name : {"cantor", "mixed", "gd2"}) {
    const auto g = load(name);
    const auto h = hulls(g);
    std::vector<oracle::Iv> hv;
    for (const auto& iv : h) hv.emplace_back(iv.lo, iv.hi);
    for (std::size_t u = 0; u < g.vertex_count(); ++u) {
      Rational prev_res = q(2);
      std::vector<Interval> prev;
      for (int k = 0; k <= 6; ++k) {
        const auto a = approximate(g, u, k);
        EXPECT_EQ(a.intervals, intervals(oracle::cover(g, hv, u, k))) << name << " depth " << k;
        EXPECT_LT(a.resolution, prev_res);
        for (const auto& iv : a.intervals) {
          EXPECT_LE(iv.length(), a.resolution);
          if (k > 0) {
            EXPECT_TRUE(std::any_of(prev.begin(), prev.end(), [&](const Interval& p) { return p.contains(iv); }));
          }
        }
        prev = a.intervals;
        prev_res = a.resolution;
      }
    }
  }
}

TEST(PathProducts, Examples) {
  EXPECT_EQ(path_products(load("cantor"), 0, 0, q(1, 30)), (std::set<Rational>{q(1, 27), q(1, 9), q(1, 3)}));
  const GDInstance sink({"a", "b"}, {{"e1", 0, 1, map(q(1, 3), q(0))},
                                     {"e2", 0, 1, map(q(1, 3), q(2, 3))},
                                     {"e3", 1, 1, map(q(1, 3), q(0))},
                                     {"e4", 1, 1, map(q(1, 3), q(2, 3))}});
  EXPECT_TRUE(path_products(sink, 1, 0, q(1, 1000)).empty());
  EXPECT_EQ(path_products(sink, 0, 1, q(1, 10)), (std::set<Rational>{q(1, 9), q(1, 3)}));
}

TEST(PathProducts, MatchLayeredEnumerationAndAreClosed) {
  const auto g = load("gd2");
  const Rational floor(1, 1000);
  for (std::size_t u = 0; u < 2; ++u) {
    // Oracle: layer-by-layer (vertex, product) frontier.
    std::vector<std::set<Rational>> expect(2);
    std::vector<std::pair<std::size_t, Rational>> layer{{u, q(1)}};
    while (!layer.empty()) {
      std::vector<std::pair<std::size_t, Rational>> next;
      for (const auto& [v, p] : layer) {
        for (const auto& e : g.edges()) {
          if (e.from != v) continue;
          const Rational np = p * e.map.ratio;
          if (np < floor) continue;
          expect[e.to].insert(np);
          next.emplace_back(e.to, np);
        }
      }
      layer = std::move(next);
    }
    for (std::size_t v = 0; v < 2; ++v) {
      const auto got = path_products(g, u, v, floor);
      EXPECT_EQ(got, expect[v]);
      for (const auto& p : got) EXPECT_GE(p, floor);
      for (const auto& e : g.edges()) {
        if (e.from != v) continue;
        const auto ext = path_products(g, u, e.to, floor);
        for (const auto& p : got) {
          const Rational np = p * e.map.ratio;
          EXPECT_TRUE(np < floor || ext.count(np));
        }
      }
    }
  }
}

TEST(Hausdorff, MatchesOracleOnRandomUnions) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<long> pt(0, 200), cnt(1, 6);
  auto random_union = [&] {
    std::vector<long> xs;
    const long n = cnt(rng);
    for (long i = 0; i < 2 * n; ++i) xs.push_back(pt(rng));
    std::sort(xs.begin(), xs.end());
    std::vector<oracle::Iv> out;
    for (long i = 0; i < n; ++i) out.emplace_back(q(xs[2 * i], 50), q(xs[2 * i + 1], 50));
    return out;
  };
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_union(), b = random_union();
    EXPECT_EQ(hausdorff_distance(intervals(a), intervals(b)), oracle::hausdorff(a, b));
  }
  EXPECT_EQ(hausdorff_distance({{q(0), q(1)}}, {{q(0), q(1)}}), q(0));
  EXPECT_EQ(hausdorff_distance({{q(0), q(1)}}, {{q(0), q(1, 3)}, {q(2, 3), q(1)}}), q(1, 6));
}
