#include "ifsgap/metgaps.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "ifsgap/errors.hpp"
#include "union_find.hpp"

namespace ifsgap::metgaps {

// ---------------------------------------------------------------------------
// PointCloud

PointCloud PointCloud::from_coordinates(std::size_t dim, std::vector<double> coords,
                                        std::optional<double> resolution) {
  if (dim < 1 || dim > 3) throw DomainError("point clouds must have dimension 1, 2 or 3");
  if (coords.empty() || coords.size() % dim != 0) throw DomainError("empty or ragged point cloud");
  for (double x : coords) {
    if (!std::isfinite(x)) throw DomainError("point coordinates must be finite");
  }
  const std::size_t n = coords.size() / dim;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(&coords[a * dim], &coords[a * dim] + dim, &coords[b * dim],
                                        &coords[b * dim] + dim);
  };
  auto same = [&](std::size_t a, std::size_t b) {
    return std::equal(&coords[a * dim], &coords[a * dim] + dim, &coords[b * dim]);
  };
  std::sort(idx.begin(), idx.end(), less);
  idx.erase(std::unique(idx.begin(), idx.end(), same), idx.end());

  PointCloud c;
  c.dim_ = dim;
  c.coords_.reserve(idx.size() * dim);
  for (auto i : idx) c.coords_.insert(c.coords_.end(), &coords[i * dim], &coords[i * dim] + dim);
  c.resolution_ = resolution;
  return c;
}

PointCloud PointCloud::from_exact(std::vector<Rational> points, std::optional<Rational> resolution) {
  if (points.empty()) throw DomainError("empty point cloud");
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  PointCloud c;
  c.dim_ = 1;
  c.coords_.reserve(points.size());
  for (const auto& p : points) c.coords_.push_back(p.to_double());
  c.exact_ = std::move(points);
  if (resolution) c.resolution_ = resolution->to_double();
  return c;
}

PointCloud PointCloud::from_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    for (std::string tok; ls >> tok;) tokens.push_back(tok);
    if (!tokens.empty()) rows.push_back(std::move(tokens));
  }
  if (rows.empty()) throw DomainError("point cloud file has no points");
  const std::size_t dim = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != dim) throw DomainError("point cloud rows have differing dimensions");
  }

  if (dim == 1) {
    std::vector<Rational> exact;
    exact.reserve(rows.size());
    try {
      for (const auto& r : rows) exact.push_back(Rational::parse(r[0]));
      return from_exact(std::move(exact));
    } catch (const DomainError&) {
      // Not all exact; fall through to floating point.
    }
  }
  std::vector<double> coords;
  coords.reserve(rows.size() * dim);
  for (const auto& r : rows) {
    for (const auto& tok : r) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) throw DomainError("bad coordinate '" + tok + "'");
      coords.push_back(x);
    }
  }
  return from_coordinates(dim, std::move(coords));
}

PointCloud PointCloud::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open point cloud file '" + path + "'");
  return from_csv(in);
}

PointCloud PointCloud::from_approximation(const model::Approximation& approx, bool exact) {
  if (exact) return from_exact(approx.points, approx.resolution);
  std::vector<double> coords;
  coords.reserve(approx.points.size());
  for (const auto& p : approx.points) coords.push_back(p.to_double());
  return from_coordinates(1, std::move(coords), approx.resolution.to_double());
}

double distance(const PointCloud& c, std::size_t i, std::size_t j) {
  const double* a = c.point(i);
  const double* b = c.point(j);
  if (c.dim() == 1) return std::fabs(a[0] - b[0]);
  double s = 0.0;
  for (std::size_t k = 0; k < c.dim(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// KappaProfile

std::size_t KappaProfile::at(double delta) const {
  const auto k = static_cast<std::size_t>(std::upper_bound(heights.begin(), heights.end(), delta) - heights.begin());
  return counts[k];
}

KappaProfile profile_from_weights(std::size_t points, std::vector<double> weights, double tolerance) {
  std::sort(weights.begin(), weights.end());
  KappaProfile p;
  p.points = points;
  p.tolerance = tolerance;
  p.counts.push_back(points);
  std::size_t merged = 0;
  for (std::size_t i = 0; i < weights.size();) {
    const double h = weights[i];
    std::size_t j = i;
    while (j < weights.size() && weights[j] - h <= tolerance * h) ++j;
    merged += j - i;
    p.heights.push_back(h);
    p.counts.push_back(points - merged);
    i = j;
  }
  return p;
}

// ---------------------------------------------------------------------------
// kappa by grid union-find

namespace {

using CellKey = std::array<std::int64_t, 3>;

struct CellHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto v : k) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
    return h;
  }
};

std::int64_t cell_index(double x, double cell) {
  const double q = std::floor(x / cell);
  constexpr double lim = 4.0e18;
  if (q > lim) return static_cast<std::int64_t>(lim);
  if (q < -lim) return static_cast<std::int64_t>(-lim);
  return static_cast<std::int64_t>(q);
}

}  // namespace

std::size_t kappa(const PointCloud& c, double delta) {
  if (c.size() == 0) throw DomainError("kappa of an empty cloud");
  if (!(delta > 0.0)) throw DomainError("kappa needs delta > 0");
  const std::size_t n = c.size();
  const std::size_t dim = c.dim();
  // Slightly enlarged cells keep every delta-close pair within adjacent cells.
  const double cell = delta * (1.0 + 1e-9);

  std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> grid;
  grid.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    CellKey key{0, 0, 0};
    for (std::size_t k = 0; k < dim; ++k) key[k] = cell_index(c.point(i)[k], cell);
    grid[key].push_back(i);
  }

  detail::UnionFind uf(n);
  for (const auto& [key, members] : grid) {
    const int reach1 = dim > 1 ? 1 : 0;
    const int reach2 = dim > 2 ? 1 : 0;
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -reach1; dy <= reach1; ++dy) {
        for (int dz = -reach2; dz <= reach2; ++dz) {
          const CellKey nk{key[0] + dx, key[1] + dy, key[2] + dz};
          if (nk < key) continue;  // each cell pair once
          const auto it = grid.find(nk);
          if (it == grid.end()) continue;
          for (auto i : members) {
            for (auto j : it->second) {
              if (i < j || nk != key) {
                if (distance(c, i, j) <= delta) uf.unite(i, j);
              }
            }
          }
        }
      }
    }
  }
  return uf.components();
}

std::size_t kappa_exact(const PointCloud& c, const Rational& delta) {
  if (!c.is_exact()) throw DomainError("kappa_exact needs an exact one-dimensional cloud");
  if (!delta.is_positive()) throw DomainError("kappa needs delta > 0");
  const auto& pts = c.exact_points();
  std::size_t classes = 1;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] - pts[i] > delta) ++classes;
  }
  return classes;
}

// ---------------------------------------------------------------------------
// merge heights

KappaProfile merge_heights(const PointCloud& c) {
  if (c.size() == 0) throw DomainError("merge heights of an empty cloud");
  if (c.is_exact()) {
    const auto& pts = c.exact_points();
    std::vector<Rational> diffs;
    diffs.reserve(pts.size());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) diffs.push_back(pts[i + 1] - pts[i]);
    std::sort(diffs.begin(), diffs.end());

    KappaProfile p;
    p.points = pts.size();
    p.tolerance = 0.0;
    p.counts.push_back(pts.size());
    std::vector<Rational> heights;
    std::size_t merged = 0;
    for (std::size_t i = 0; i < diffs.size();) {
      std::size_t j = i;
      while (j < diffs.size() && diffs[j] == diffs[i]) ++j;
      merged += j - i;
      heights.push_back(diffs[i]);
      p.heights.push_back(diffs[i].to_double());
      p.counts.push_back(pts.size() - merged);
      i = j;
    }
    p.exact_heights = std::move(heights);
    return p;
  }
  return profile_from_weights(c.size(), mst_weights(c));
}

KappaProfile merge_heights_reference(const PointCloud& c) {
  if (c.size() == 0) throw DomainError("merge heights of an empty cloud");
  return profile_from_weights(c.size(), mst_weights_reference(c));
}

MetricGaps metric_gaps(const PointCloud& c, double noise_floor) {
  if (!(noise_floor > 0.0)) throw DomainError("noise floor must be positive");
  MetricGaps out;
  out.noise_floor = noise_floor;
  const auto profile = merge_heights(c);
  std::vector<double> above;
  for (double h : profile.heights) {
    if (h > noise_floor) above.push_back(h);
  }
  if (const auto eps = c.resolution()) {
    out.match_tolerance = 2.0 * *eps;
    if (noise_floor <= 2.0 * *eps) {
      out.findings.push_back("noise floor " + std::to_string(noise_floor) +
                             " is not above twice the sampling resolution " + std::to_string(*eps));
    }
    for (std::size_t i = 0; i < above.size();) {
      std::size_t j = i + 1;
      while (j < above.size() && above[j] - above[j - 1] <= *eps) ++j;
      out.values.push_back(above[i]);
      i = j;
    }
  } else {
    out.values = std::move(above);
  }
  return out;
}

}  // namespace ifsgap::metgaps
