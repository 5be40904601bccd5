#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ifsgap/exactnum.hpp"
#include "ifsgap/model.hpp"
#include "ifsgap/rational.hpp"
#include "ifsgap/symgaps.hpp"

namespace ifsgap::analysis {

/// Finite set A of positive rationals, the generators of A^{Z+} and A^{Q+*}.
class MonomialCone {
 public:
  /// Sorts and removes duplicates; DomainError on a nonpositive generator.
  explicit MonomialCone(std::vector<Rational> generators);
  static MonomialCone of(const model::GDInstance& g) { return MonomialCone(g.ratio_set()); }

  const std::vector<Rational>& generators() const noexcept { return generators_; }
  std::size_t size() const noexcept { return generators_.size(); }
  std::string str() const;

 private:
  std::vector<Rational> generators_;
};

enum class Membership { yes, no, unknown };
std::string to_string(Membership m);

struct ZMembership {
  Membership verdict = Membership::unknown;
  std::vector<std::int64_t> exponents;  // one per generator when verdict == yes
};

/// x in A^{Z+}? "no" is definitive when the exact search exhausts; "unknown" when the
/// search budget runs out first.
ZMembership cone_contains_z(const MonomialCone& a, const Rational& x, std::size_t budget = 1'000'000);

struct QMembership {
  bool member = false;
  std::vector<Rational> coefficients;  // not all zero
};

/// x in A^{Q+*}: nonnegative rational exponents, not all zero.
QMembership cone_contains_q(const MonomialCone& a, const Rational& x);

/// All elements of A^{Z+*} (nonempty products of generators in (0,1)) that are >= floor,
/// ascending.
std::vector<Rational> truncated_products(const MonomialCone& a, const Rational& floor);

struct RatioOptions {
  std::size_t min_witnesses = 4;
  int verify_depth = 12;
};

struct EmpiricalRatio {
  Rational ratio;
  /// Largest term theta' of the run through theta found in the set.
  Rational start;
  std::size_t witnesses = 0;
  /// Terms below the floor confirmed by symbolic membership; 0 without a symbolic set.
  int verified_depth = 0;
  bool verified = false;
};

struct RatioReport {
  Rational theta;
  Rational floor;
  RatioOptions options;
  bool symbolic = false;
  /// Ratios r for which {theta r^k} lies in the gap set for all k, by a path-product
  /// certificate. Ascending.
  std::vector<Rational> certified;
  /// Ratios found in the truncated set, ascending by ratio.
  std::vector<EmpiricalRatio> empirical;

  /// Empirical ratios that passed symbolic verification (all of them when no symbolic
  /// set was supplied).
  std::vector<Rational> accepted_empirical() const;
  /// certified ∪ accepted_empirical, ascending.
  std::vector<Rational> combined() const;
};

/// Truncated ratio analysis at theta over a finite set whose elements are all >= floor.
/// Throws DomainError when theta is absent or below the floor.
RatioReport ratios_of(std::span<const Rational> theta_set, const Rational& theta, const Rational& floor,
                      const RatioOptions& opts = {}, const symgaps::SymbolicGapSet* symbolic = nullptr);
RatioReport ratios_of(const symgaps::GapEnumeration& e, const Rational& theta, const RatioOptions& opts = {},
                      const symgaps::SymbolicGapSet* symbolic = nullptr);

struct AlgdepReport {
  std::size_t independence_number = 0;
  std::int64_t dependence_number = -1;
  exactnum::QSpan basis;
  std::vector<Rational> ratios;
  /// Dimensions of the two tiers when computed from gap data.
  std::optional<std::size_t> certified_dimension;
  std::optional<std::size_t> empirical_dimension;
  std::vector<std::string> warnings;
};

AlgdepReport algdep_of_ratios(std::span<const Rational> ratios);
AlgdepReport algdep_of_ifs(const model::GDInstance& g);
AlgdepReport algdep_from_gaps(const RatioReport& r);

/// Vacuous bound 0 for an empty report.
std::size_t lower_bound(const AlgdepReport& r);

enum class Verdict { pass, fail, inconclusive };
std::string to_string(Verdict v);

struct InclusionCheck {
  Rational element;
  bool member = false;
  std::vector<Rational> coefficients;
};

struct CommensurabilityReport {
  Verdict verdict = Verdict::fail;
  std::vector<InclusionCheck> x_in_a;  // elements of X against A^{Q+*}
  std::vector<InclusionCheck> a_in_x;  // elements of A against X^{Q+*}
  std::optional<Rational> counterexample;
};

CommensurabilityReport verify_commensurability(const MonomialCone& a, const MonomialCone& x);

/// Smallest element of the residual Γ at the natural threshold, or nullopt when Γ is empty.
std::optional<Rational> residual_threshold(const symgaps::SymbolicGapSet& s);

struct SandwichReport {
  Verdict verdict = Verdict::inconclusive;
  Rational theta;
  Rational floor;
  std::optional<Rational> threshold;
  /// Lower inclusion: X^{Z+*} ∩ [floor, 1) computed directly; one-vertex systems only.
  std::vector<Rational> lower_expected;
  std::vector<Rational> lower_missing;
  /// Upper inclusion: accepted empirical ratios outside X^{Q+*}.
  std::vector<Rational> upper_checked;
  std::vector<Rational> upper_violations;
  RatioReport ratios;
  std::string reason;
};

SandwichReport verify_sandwich(const symgaps::SymbolicGapSet& s, const Rational& theta, const Rational& floor,
                               const RatioOptions& opts = {});

struct ThetaChoice {
  Rational theta;
  Rational floor;
};

/// The largest gap length strictly below the residual threshold (the largest gap when
/// there is none), with a floor leaving min_witnesses terms for the smallest ratio.
std::optional<ThetaChoice> choose_theta(const symgaps::SymbolicGapSet& s, const RatioOptions& opts = {});

struct YzxReport {
  Verdict verdict = Verdict::fail;
  bool one_vertex = true;
  Rational theta;
  Rational floor;
  AlgdepReport from_ifs;
  AlgdepReport from_gaps;
  std::string summary;
};

/// Compares the gap-side dimension at choose_theta() with the ratio-side one: equality
/// for one vertex, <= for a graph-directed system.
YzxReport verify_yzx(const model::GDInstance& g, std::size_t root = 0, const RatioOptions& opts = {});

struct Removal {
  std::string removed_edge;
  model::Similarity1D removed_map;
  std::string container_edge;
  std::vector<std::string> path;  // S_removed = S_container o S_path
};

struct PruneReport {
  model::GDInstance pruned;
  std::vector<Removal> removals;
  model::Separation final_separation = model::Separation::unknown;
  int depth = 0;
  Rational hausdorff;
  Rational tolerance;
  bool attractor_reproduced = false;
};

/// Removes nested maps until the system is hull-disjoint or SSC-certified. Requires the
/// caller's assertion that the attractor is full-measure (DomainError otherwise); throws
/// VerdictError when an overlap has no nesting certificate at this depth.
PruneReport prune_to_ssc(const model::GDInstance& g, bool full_measure_asserted, int depth = 12);

}  // namespace ifsgap::analysis
