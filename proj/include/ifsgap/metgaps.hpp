#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "ifsgap/model.hpp"
#include "ifsgap/rational.hpp"

namespace ifsgap::metgaps {

/// Relative tolerance used to merge floating-point MST weights into one height.
inline constexpr double kHeightTolerance = 1e-12;

/// Finite point set in R^1, R^2 or R^3. Duplicates are removed on construction and
/// points are stored sorted lexicographically.
class PointCloud {
 public:
  static PointCloud from_coordinates(std::size_t dim, std::vector<double> coords,
                                     std::optional<double> resolution = std::nullopt);
  /// Exact one-dimensional cloud; distances are then compared exactly.
  static PointCloud from_exact(std::vector<Rational> points, std::optional<Rational> resolution = std::nullopt);
  /// One point per line, coordinates separated by commas or whitespace. A 1-D file whose
  /// entries are all exact rationals yields an exact cloud.
  static PointCloud from_csv(std::istream& in);
  static PointCloud load_csv(const std::string& path);
  static PointCloud from_approximation(const model::Approximation& approx, bool exact = false);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  const double* point(std::size_t i) const { return coords_.data() + i * dim_; }
  const std::vector<double>& coordinates() const noexcept { return coords_; }
  bool is_exact() const noexcept { return exact_.has_value(); }
  const std::vector<Rational>& exact_points() const { return *exact_; }
  std::optional<double> resolution() const noexcept { return resolution_; }

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
  std::optional<std::vector<Rational>> exact_;
  std::optional<double> resolution_;
};

/// Euclidean distance; |x - y| exactly in dimension 1.
double distance(const PointCloud& c, std::size_t i, std::size_t j);

/// Step function kappa(delta): counts[0] = #points for delta below heights[0], and
/// counts[k] holds on [heights[k-1], heights[k]).
struct KappaProfile {
  std::size_t points = 0;
  std::vector<double> heights;
  std::vector<std::size_t> counts;
  std::optional<std::vector<Rational>> exact_heights;
  double tolerance = kHeightTolerance;

  std::size_t at(double delta) const;
};

/// Number of delta-equivalence classes (chains with steps <= delta), by union-find over a
/// uniform grid of cell size delta.
std::size_t kappa(const PointCloud& c, double delta);
std::size_t kappa_exact(const PointCloud& c, const Rational& delta);

/// Sorted MST edge weights. Borůvka rounds over a kd-tree whose nodes carry a component
/// label, so whole same-component subtrees are skipped; nearest-foreign-neighbour queries
/// run in parallel. Output does not depend on the thread count.
std::vector<double> mst_weights(const PointCloud& c);
/// Serial O(n^2) Prim over the complete graph. Reference for testing.
std::vector<double> mst_weights_reference(const PointCloud& c);

KappaProfile profile_from_weights(std::size_t points, std::vector<double> weights,
                                  double tolerance = kHeightTolerance);
KappaProfile merge_heights(const PointCloud& c);
KappaProfile merge_heights_reference(const PointCloud& c);

struct MetricGaps {
  double noise_floor = 0.0;
  std::vector<double> values;
  /// Present when the cloud carries a resolution eps: heights within eps of each other
  /// are reported once (smallest member), and values match true gaps within 2 eps.
  std::optional<double> match_tolerance;
  std::vector<std::string> findings;
};

MetricGaps metric_gaps(const PointCloud& c, double noise_floor);

}  // namespace ifsgap::metgaps
