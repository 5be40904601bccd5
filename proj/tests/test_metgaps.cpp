#include <gtest/gtest.h>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ifsgap/errors.hpp"
#include "ifsgap/metgaps.hpp"
#include "ifsgap/symgaps.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace ifsgap;
using namespace ifsgap::metgaps;
using testing_support::load;
using testing_support::q;
using testing_support::qs;

namespace {

PointCloud cloud_of(const oracle::Cloud& c) { return PointCloud::from_coordinates(c.dim, c.xs); }

PointCloud cantor_endpoints() {
  return PointCloud::from_exact(qs({{0, 1}, {1, 9}, {2, 9}, {1, 3}, {2, 3}, {7, 9}, {8, 9}, {1, 1}}));
}

void expect_weights_near(const std::vector<double>& got, const std::vector<double>& expect) {
  ASSERT_EQ(got.size(), expect.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], expect[i], 1e-12 * (1.0 + expect[i]));
}

// Cloud on an integer lattice: almost every distance is tied with many others.
oracle::Cloud lattice(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  std::uniform_int_distribution<int> coord(0, 6);
  oracle::Cloud c;
  c.dim = dim;
  std::set<std::vector<int>> seen;
  while (seen.size() < n) {
    std::vector<int> p(dim);
    for (auto& x : p) x = coord(rng);
    if (seen.insert(p).second) {
      for (int x : p) c.xs.push_back(x);
    }
  }
  return c;
}

}  // namespace

TEST(Kappa, Examples) {
  const auto two = PointCloud::from_coordinates(1, {0.0, 1.0});
  EXPECT_EQ(kappa(two, 0.5), 2u);
  EXPECT_EQ(kappa(two, 1.0), 1u);
  const auto c = cantor_endpoints();
  EXPECT_EQ(kappa(c, 0.2), 2u);
  EXPECT_EQ(kappa(c, 0.05), 8u);
  EXPECT_EQ(kappa_exact(c, q(1, 9)), 2u);
  EXPECT_EQ(kappa_exact(c, q(1, 9) - q(1, 1000)), 8u);
  EXPECT_EQ(kappa_exact(c, q(1, 3)), 1u);
  EXPECT_THROW(kappa(c, 0.0), DomainError);
  EXPECT_THROW(PointCloud::from_coordinates(1, {}), DomainError);
}

TEST(Kappa, ClosedInequalityOnTiedLattice) {
  // Unit-spaced lattice points: delta exactly 1 connects all of them.
  std::vector<double> xs;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      xs.push_back(i);
      xs.push_back(j);
    }
  }
  const auto c = PointCloud::from_coordinates(2, xs);
  EXPECT_EQ(kappa(c, 1.0), 1u);
  EXPECT_EQ(kappa(c, std::nextafter(1.0, 0.0)), 25u);
  const auto p = merge_heights(c);
  EXPECT_EQ(p.heights, std::vector<double>{1.0});
  EXPECT_EQ(p.at(1.0), 1u);
  EXPECT_EQ(p.at(0.999), 25u);
}

TEST(Kappa, MatchesAllPairsOracleAndIsMonotone) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 0.3);
  for (std::size_t dim = 1; dim <= 3; ++dim) {
    for (bool clustered : {false, true}) {
      auto raw = oracle::random_cloud(rng, 1500, dim, clustered);
      const auto c = cloud_of(raw);
      oracle::Cloud dedup{dim, c.coordinates()};
      std::vector<double> deltas(60);
      for (auto& d : deltas) d = u(rng) / (dim * 20.0);
      std::sort(deltas.begin(), deltas.end());
      const auto expect = oracle::all_pairs_kappa(dedup, deltas);
      const auto profile = merge_heights(c);
      for (std::size_t i = 0; i < deltas.size(); ++i) {
        const auto k = kappa(c, deltas[i]);
        EXPECT_EQ(k, expect[i]) << "dim " << dim << " delta " << deltas[i];
        EXPECT_EQ(profile.at(deltas[i]), expect[i]);
        if (i > 0) EXPECT_GE(expect[i - 1], k);
      }
    }
  }
}

TEST(MergeHeights, Examples) {
  const auto p = merge_heights(cantor_endpoints());
  ASSERT_TRUE(p.exact_heights);
  EXPECT_EQ(*p.exact_heights, qs({{1, 9}, {1, 3}}));
  EXPECT_EQ(p.counts, (std::vector<std::size_t>{8, 2, 1}));
  std::vector<double> line;
  for (int i = 0; i < 50; ++i) line.push_back(0.25 * i);
  EXPECT_EQ(merge_heights(PointCloud::from_coordinates(1, line)).heights, std::vector<double>{0.25});
  EXPECT_TRUE(merge_heights(PointCloud::from_coordinates(2, {0.5, 0.5})).heights.empty());
}

TEST(MergeHeights, StepStructure) {
  std::mt19937_64 rng(32);
  const auto c = cloud_of(oracle::random_cloud(rng, 800, 2, true));
  const auto p = merge_heights(c);
  ASSERT_EQ(p.counts.size(), p.heights.size() + 1);
  EXPECT_EQ(p.counts.front(), c.size());
  EXPECT_EQ(p.counts.back(), 1u);
  for (std::size_t k = 0; k < p.heights.size(); ++k) {
    EXPECT_GT(p.counts[k], p.counts[k + 1]);
    EXPECT_EQ(kappa(c, p.heights[k]), p.counts[k + 1]);
    EXPECT_EQ(kappa(c, std::nextafter(p.heights[k], 0.0)), p.counts[k]);
  }
}

TEST(Mst, BoruvkaPrimAndKruskalAgree) {
  std::mt19937_64 rng(33);
  for (std::size_t dim = 1; dim <= 3; ++dim) {
    for (int trial = 0; trial < 6; ++trial) {
      const bool clustered = trial % 2 == 1;
      const auto raw = oracle::random_cloud(rng, 200 + 150 * trial, dim, clustered);
      const auto c = cloud_of(raw);
      const auto fast = mst_weights(c);
      EXPECT_EQ(fast, mst_weights_reference(c));
      expect_weights_near(fast, oracle::kruskal_weights(oracle::Cloud{dim, c.coordinates()}));
    }
  }
}

TEST(Mst, TiesOnLatticeClouds) {
  std::mt19937_64 rng(34);
  for (std::size_t dim = 1; dim <= 3; ++dim) {
    const std::size_t n = dim == 1 ? 7 : (dim == 2 ? 40 : 200);
    const auto raw = lattice(rng, n, dim);
    const auto c = cloud_of(raw);
    const auto fast = mst_weights(c);
    EXPECT_EQ(fast, mst_weights_reference(c));
    EXPECT_EQ(fast, oracle::kruskal_weights(oracle::Cloud{dim, c.coordinates()}));
    EXPECT_EQ(merge_heights(c).heights, merge_heights_reference(c).heights);
  }
}

TEST(Mst, IndependentOfThreadCount) {
  std::mt19937_64 rng(35);
  const auto c = cloud_of(oracle::random_cloud(rng, 20000, 2, true));
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto one = merge_heights(c);
  omp_set_num_threads(4);
  const auto four = merge_heights(c);
  omp_set_num_threads(saved);
  EXPECT_EQ(one.heights, four.heights);
  EXPECT_EQ(one.counts, four.counts);
}

TEST(Csv, ParsesExactAndFloatingClouds) {
  std::istringstream exact("1/3\n0\n2/3\n1\n0\n");
  const auto e = PointCloud::from_csv(exact);
  EXPECT_TRUE(e.is_exact());
  EXPECT_EQ(e.size(), 4u);
  EXPECT_EQ(e.exact_points(), qs({{0, 1}, {1, 3}, {2, 3}, {1, 1}}));

  std::istringstream flat("0.5, 0.25\n0.75 0.5\n\n1e-1,2\n");
  const auto f = PointCloud::from_csv(flat);
  EXPECT_FALSE(f.is_exact());
  EXPECT_EQ(f.dim(), 2u);
  EXPECT_EQ(f.size(), 3u);
  EXPECT_DOUBLE_EQ(f.point(0)[0], 0.1);

  std::istringstream ragged("1,2\n3\n");
  EXPECT_THROW(PointCloud::from_csv(ragged), DomainError);
  std::istringstream junk("1,x\n");
  EXPECT_THROW(PointCloud::from_csv(junk), DomainError);
  std::istringstream empty("\n\n");
  EXPECT_THROW(PointCloud::from_csv(empty), DomainError);
}

TEST(MetricGaps, CantorCloudMatchesSymbolicGaps) {
  const auto approx = model::approximate(load("cantor"), 0, 10);
  const auto c = PointCloud::from_approximation(approx);
  ASSERT_TRUE(c.resolution());
  const auto m = metric_gaps(c, 0.01);
  const auto truth = qs({{1, 81}, {1, 27}, {1, 9}, {1, 3}});
  ASSERT_EQ(m.values.size(), truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) EXPECT_NEAR(m.values[i], truth[i].to_double(), 2 * std::pow(3.0, -10));
  EXPECT_TRUE(m.findings.empty());
}

TEST(MetricGaps, MixedCloudMatchesSymbolicGaps) {
  const auto g = load("mixed");
  const auto approx = model::approximate(g, 0, 12);
  const auto m = metric_gaps(PointCloud::from_approximation(approx), 0.01);
  const auto truth = symgaps::SymbolicGapSet::build(g, 0).enumerate(q(1, 100)).values;
  ASSERT_TRUE(m.match_tolerance);
  const double tol = *m.match_tolerance;
  EXPECT_LE(tol, 2 * std::pow(2.0, -12));
  for (const auto& t : truth) {
    EXPECT_TRUE(std::any_of(m.values.begin(), m.values.end(), [&](double v) { return std::fabs(v - t.to_double()) <= tol; })) << t;
  }
  for (double v : m.values) {
    EXPECT_TRUE(std::any_of(truth.begin(), truth.end(), [&](const Rational& t) { return std::fabs(v - t.to_double()) <= tol; })) << v;
  }
}

TEST(MetricGaps, DenseIntervalHasNoGapsAndLowFloorIsFlagged) {
  std::vector<double> xs;
  for (int i = 0; i <= 10000; ++i) xs.push_back(i / 10000.0);
  EXPECT_TRUE(metric_gaps(PointCloud::from_coordinates(1, xs), 0.01).values.empty());
  const auto c = PointCloud::from_coordinates(1, xs, 0.001);
  const auto m = metric_gaps(c, 0.0015);
  EXPECT_FALSE(m.findings.empty());
  EXPECT_THROW(metric_gaps(c, 0.0), DomainError);
}

TEST(MetricGaps, ExactCloudsGiveExactHeights) {
  const auto approx = model::approximate(load("mixed"), 0, 6);
  const auto c = PointCloud::from_approximation(approx, true);
  ASSERT_TRUE(c.is_exact());
  const auto p = merge_heights(c);
  ASSERT_TRUE(p.exact_heights);
  std::set<Rational> diffs;
  const auto& pts = c.exact_points();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) diffs.insert(pts[i + 1] - pts[i]);
  EXPECT_EQ(*p.exact_heights, std::vector<Rational>(diffs.begin(), diffs.end()));
}
