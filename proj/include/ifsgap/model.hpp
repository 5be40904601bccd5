#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ifsgap/rational.hpp"

namespace ifsgap::model {

/// Closed interval [lo, hi] with exact endpoints.
struct Interval {
  Rational lo;
  Rational hi;

  Rational length() const { return hi - lo; }
  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
  bool intersects(const Interval& other) const { return !(hi < other.lo || other.hi < lo); }

  friend bool operator==(const Interval&, const Interval&) = default;
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// x -> sign * ratio * x + offset.
struct Similarity1D {
  Rational ratio;
  int sign = 1;
  Rational offset;

  Rational apply(const Rational& x) const;
  Interval image(const Interval& iv) const;
  /// this o inner
  Similarity1D compose(const Similarity1D& inner) const;
  Rational fixed_point() const;

  static Similarity1D identity() { return {Rational(1), 1, Rational(0)}; }

  friend bool operator==(const Similarity1D&, const Similarity1D&) = default;
};

std::string describe(const Similarity1D& map);

struct Edge {
  std::string id;
  std::size_t from = 0;
  std::size_t to = 0;
  Similarity1D map;
};

/// Directed multigraph with one contracting similarity per edge. An IFS is the
/// one-vertex case.
class GDInstance {
 public:
  GDInstance() = default;
  GDInstance(std::vector<std::string> vertices, std::vector<Edge> edges);

  /// One-vertex system; the vertex is named "u" and the maps "S1", "S2", ...
  static GDInstance ifs(const std::vector<Similarity1D>& maps);

  /// Instance schema: {"vertices": [...], "edges": [{"id","from","to","ratio","sign","offset"}]}
  /// or the shorthand {"ifs": [{"ratio","sign","offset"}]}. Throws DomainError on malformed input.
  static GDInstance from_json(const nlohmann::json& doc);
  static GDInstance load(const std::string& path);
  nlohmann::json to_json() const;

  const std::vector<std::string>& vertices() const noexcept { return vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<std::size_t>& out_edges(std::size_t u) const { return out_[u]; }
  std::optional<std::size_t> vertex_index(const std::string& name) const;
  bool is_ifs() const noexcept { return vertices_.size() == 1; }

  /// Distinct contraction ratios.
  std::vector<Rational> ratio_set() const;
  Rational max_ratio() const;
  std::vector<bool> reachable_from(std::size_t u) const;

  /// Copy without the listed edges (indices into edges()).
  GDInstance without_edges(const std::set<std::size_t>& removed) const;

 private:
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> out_;
};

/// Empty iff the instance is valid.
std::vector<std::string> validate(const GDInstance& g);

/// Throws ValidationError when validate() reports findings.
void require_valid(const GDInstance& g);

/// Convex hulls [min F_u, max F_u] of the attractors, one per vertex.
using HullList = std::vector<Interval>;

HullList hulls(const GDInstance& g);

struct ChildHull {
  std::size_t edge = 0;
  Interval interval;
};

/// Images S_e(hull(to(e))) over the edges leaving u, sorted by left endpoint.
std::vector<ChildHull> child_hulls(const GDInstance& g, const HullList& h, std::size_t u);

enum class Separation { hull_disjoint, ssc_certified, overlap, unknown };
std::string to_string(Separation s);

struct SeparationOptions {
  int depth_limit = 12;
  std::size_t pair_budget = 200'000;
};

struct SeparationReport {
  Separation verdict = Separation::unknown;
  /// Vertex and the two edges involved in the decisive (or unresolved) pair.
  std::optional<std::size_t> vertex;
  std::optional<std::size_t> edge_a;
  std::optional<std::size_t> edge_b;
  /// Exact common point of two child pieces (overlap by contact).
  std::optional<Rational> witness_point;
  /// Nesting: S_nested = S_container o S_path, so S_nested(F) is inside S_container(F).
  std::optional<std::size_t> nested_edge;
  std::optional<std::size_t> container_edge;
  std::vector<std::size_t> nesting_path;
  int depth_reached = 0;
  std::string detail;
};

SeparationReport separation_check(const GDInstance& g, const SeparationOptions& opts = {});

/// Searches a path p (edges from `container`'s target to `nested`'s target) with
/// S_nested == S_container o S_p. Both edges must leave the same vertex.
std::optional<std::vector<std::size_t>> nesting_certificate(const GDInstance& g,
                                                            std::size_t container,
                                                            std::size_t nested,
                                                            std::size_t budget = 100'000);

enum class PointMode { midpoints, endpoints };

struct ApproximateOptions {
  std::size_t interval_budget = 1'000'000;
  PointMode points = PointMode::midpoints;
};

struct Approximation {
  std::size_t vertex = 0;
  int depth = 0;
  /// Images of the hulls under every length-`depth` path from the vertex, sorted.
  std::vector<Interval> intervals;
  std::vector<Rational> points;
  /// max_ratio^depth * max hull diameter; bounds every interval length.
  Rational resolution;
};

/// Works on any valid instance; intervals are pairwise disjoint when the instance is
/// hull-disjoint. Throws ResourceError above the interval budget.
Approximation approximate(const GDInstance& g, std::size_t u, int depth,
                          const ApproximateOptions& opts = {});

/// Distinct products r_p >= floor over nonempty directed paths p from u to v.
std::set<Rational> path_products(const GDInstance& g, std::size_t u, std::size_t v,
                                 const Rational& floor);

/// Exact Hausdorff distance between two finite unions of closed intervals.
Rational hausdorff_distance(const std::vector<Interval>& a, const std::vector<Interval>& b);

}  // namespace ifsgap::model
