#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ifsgap/model.hpp"
#include "ifsgap/rational.hpp"

namespace ifsgap::symgaps {

inline constexpr std::size_t kDefaultEnumerationBudget = 1'000'000;

/// GL(F_root) ∩ [cutoff, ∞), as a duplicate-free ascending list.
struct GapEnumeration {
  Rational cutoff;
  std::vector<Rational> values;
};

/// Gap length set of a hull-disjoint attractor on the line, held as level-0 gaps
/// per vertex plus the ratio-labelled graph:
///   GL(F_u) = G0(u) ∪ ⋃_{paths p: u -> v} r_p · G0(v).
class SymbolicGapSet {
 public:
  /// Throws UnsupportedError unless separation_check reports hull_disjoint.
  static SymbolicGapSet build(const model::GDInstance& g, std::size_t root);

  const model::GDInstance& graph() const noexcept { return graph_; }
  std::size_t root() const noexcept { return root_; }
  const model::HullList& hulls() const noexcept { return hulls_; }
  /// Ascending distinct level-0 gaps; empty for vertices unreachable from the root.
  const std::vector<Rational>& level0(std::size_t v) const { return level0_[v]; }
  bool reachable(std::size_t v) const { return reachable_[v]; }
  Rational diameter() const { return hulls_[root_].length(); }
  /// Smallest distance between a child piece and the rest of its parent, over the
  /// vertices reachable from the root: the minimum level-0 gap.
  Rational natural_delta() const;

  GapEnumeration enumerate(const Rational& cutoff, std::size_t budget = kDefaultEnumerationBudget) const;
  /// Enumeration of GL(F_v) for a reachable vertex v.
  GapEnumeration enumerate_at(std::size_t v, const Rational& cutoff,
                              std::size_t budget = kDefaultEnumerationBudget) const;

  bool contains(const Rational& x) const;

  /// Pairs (v, g) with g in G0(v) and x / g a path product from the root to v
  /// (or x == g when v is the root).
  std::vector<std::pair<std::size_t, Rational>> representations(const Rational& x) const;

 private:
  model::GDInstance graph_;
  std::size_t root_ = 0;
  model::HullList hulls_;
  std::vector<std::vector<Rational>> level0_;
  std::vector<bool> reachable_;
  std::vector<Rational> reach_max_;  // max level-0 gap reachable from each vertex
  std::vector<Rational> ratios_;     // ratio set, used by the one-vertex membership test
};

/// Γ_v = GL(F_v) ∩ [δ, ∞) per vertex, and Λ_u = ⋃_{e: u->v} r_e (Γ_v ∩ [δ, δ/r_e)).
struct ResidualSplit {
  Rational delta;
  std::vector<Rational> gamma;  // at the root
  std::vector<std::vector<Rational>> gamma_by_vertex;
  std::vector<std::vector<Rational>> lambda_by_vertex;
};

ResidualSplit residual_split(const SymbolicGapSet& s, const Rational& delta);

}  // namespace ifsgap::symgaps
