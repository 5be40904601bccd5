#include "ifsgap/analysis.hpp"

#include <algorithm>
#include <set>

#include "ifsgap/errors.hpp"

namespace ifsgap::analysis {

// ---------------------------------------------------------------------------
// cones

MonomialCone::MonomialCone(std::vector<Rational> generators) : generators_(std::move(generators)) {
  for (const auto& a : generators_) {
    if (!a.is_positive()) throw DomainError("cone generators must be positive, got " + a.str());
  }
  std::sort(generators_.begin(), generators_.end());
  generators_.erase(std::unique(generators_.begin(), generators_.end()), generators_.end());
}

std::string MonomialCone::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (i) out += ", ";
    out += generators_[i].str();
  }
  return out + "}";
}

std::string to_string(Membership m) {
  switch (m) {
    case Membership::yes: return "yes";
    case Membership::no: return "no";
    case Membership::unknown: return "unknown";
  }
  return "unknown";
}

ZMembership cone_contains_z(const MonomialCone& a, const Rational& x, std::size_t budget) {
  if (!x.is_positive()) throw DomainError("cone membership requires x > 0");
  const auto res = exactnum::nonneg_integer_solve(x, a.generators(), budget);
  ZMembership out;
  switch (res.outcome) {
    case exactnum::SearchOutcome::found:
      out.verdict = Membership::yes;
      out.exponents = res.exponents;
      break;
    case exactnum::SearchOutcome::exhausted: out.verdict = Membership::no; break;
    case exactnum::SearchOutcome::budget_exceeded: out.verdict = Membership::unknown; break;
  }
  return out;
}

QMembership cone_contains_q(const MonomialCone& a, const Rational& x) {
  if (!x.is_positive()) throw DomainError("cone membership requires x > 0");
  QMembership out;
  if (a.size() == 0) return out;
  std::vector<exactnum::ExponentVector> gens;
  gens.reserve(a.size());
  for (const auto& g : a.generators()) gens.push_back(exactnum::factor(g));
  if (auto sol = exactnum::nonneg_solve(exactnum::factor(x), gens)) {
    out.member = true;
    out.coefficients = std::move(*sol);
  }
  return out;
}

std::vector<Rational> truncated_products(const MonomialCone& a, const Rational& floor) {
  if (!floor.is_positive()) throw DomainError("product floor must be positive");
  std::vector<Rational> gens;
  for (const auto& g : a.generators()) {
    if (g < Rational(1)) gens.push_back(g);
  }
  std::set<Rational> out;
  std::vector<Rational> frontier;
  for (const auto& g : gens) {
    if (g >= floor && out.insert(g).second) frontier.push_back(g);
  }
  while (!frontier.empty()) {
    const Rational p = std::move(frontier.back());
    frontier.pop_back();
    for (const auto& g : gens) {
      Rational q = p * g;
      if (q >= floor && out.insert(q).second) frontier.push_back(std::move(q));
    }
  }
  return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// ratio analysis

std::vector<Rational> RatioReport::accepted_empirical() const {
  std::vector<Rational> out;
  for (const auto& e : empirical) {
    if (!symbolic || e.verified) out.push_back(e.ratio);
  }
  return out;
}

std::vector<Rational> RatioReport::combined() const {
  std::set<Rational> all(certified.begin(), certified.end());
  for (const auto& r : accepted_empirical()) all.insert(r);
  return {all.begin(), all.end()};
}

RatioReport ratios_of(std::span<const Rational> theta_set, const Rational& theta, const Rational& floor,
                      const RatioOptions& opts, const symgaps::SymbolicGapSet* symbolic) {
  if (opts.min_witnesses < 3) throw DomainError("min_witnesses must be at least 3");
  if (opts.verify_depth < 0) throw DomainError("verify_depth must be nonnegative");
  if (!floor.is_positive()) throw DomainError("ratio floor must be positive");
  if (theta < floor) throw DomainError("theta " + theta.str() + " is below the floor " + floor.str());

  std::set<Rational> set;
  for (const auto& t : theta_set) {
    if (t >= floor) set.insert(t);
  }
  if (!set.count(theta)) throw DomainError("theta " + theta.str() + " is not in the gap set");

  RatioReport report;
  report.theta = theta;
  report.floor = floor;
  report.options = opts;
  report.symbolic = symbolic != nullptr;

  for (auto it = set.begin(); it != set.end() && *it < theta; ++it) {
    const Rational r = *it / theta;
    std::size_t down = 0;
    Rational t = *it;
    bool complete = true;
    while (t >= floor) {
      if (!set.count(t)) {
        complete = false;
        break;
      }
      ++down;
      t *= r;
    }
    if (!complete) continue;

    std::size_t up = 0;
    Rational start = theta;
    for (Rational s = theta / r; set.count(s); s /= r) {
      ++up;
      start = s;
    }
    const std::size_t witnesses = 1 + down + up;
    if (witnesses < opts.min_witnesses) continue;

    EmpiricalRatio e{r, start, witnesses, 0, false};
    if (symbolic) {
      e.verified = true;
      for (int k = 0; k < opts.verify_depth; ++k, t *= r) {
        if (!symbolic->contains(t)) {
          e.verified = false;
          break;
        }
        e.verified_depth = k + 1;
      }
    }
    report.empirical.push_back(std::move(e));
  }

  if (symbolic) {
    const Rational ratio_floor = min(floor, floor / theta);
    std::set<Rational> certified;
    for (const auto& [v, g0] : symbolic->representations(theta)) {
      for (const auto& r : model::path_products(symbolic->graph(), v, v, ratio_floor)) certified.insert(r);
    }
    report.certified.assign(certified.begin(), certified.end());
  }
  return report;
}

RatioReport ratios_of(const symgaps::GapEnumeration& e, const Rational& theta, const RatioOptions& opts,
                      const symgaps::SymbolicGapSet* symbolic) {
  return ratios_of(e.values, theta, e.cutoff, opts, symbolic);
}

// ---------------------------------------------------------------------------
// algebraic (in)dependence numbers

namespace {

std::size_t dimension_of(std::span<const Rational> ratios) {
  std::vector<exactnum::ExponentVector> vecs;
  for (const auto& r : ratios) vecs.push_back(exactnum::factor(r));
  return exactnum::qrank(vecs).dimension;
}

}  // namespace

AlgdepReport algdep_of_ratios(std::span<const Rational> ratios) {
  AlgdepReport out;
  std::set<Rational> distinct(ratios.begin(), ratios.end());
  out.ratios.assign(distinct.begin(), distinct.end());
  std::vector<exactnum::ExponentVector> vecs;
  for (const auto& r : out.ratios) {
    if (!r.is_positive()) throw DomainError("ratios must be positive");
    vecs.push_back(exactnum::factor(r));
  }
  out.basis = exactnum::qrank(vecs);
  out.independence_number = out.basis.dimension;
  out.dependence_number = static_cast<std::int64_t>(out.independence_number) - 1;
  return out;
}

AlgdepReport algdep_of_ifs(const model::GDInstance& g) {
  model::require_valid(g);
  return algdep_of_ratios(g.ratio_set());
}

AlgdepReport algdep_from_gaps(const RatioReport& r) {
  const auto combined = r.combined();
  AlgdepReport out = algdep_of_ratios(combined);
  if (combined.empty()) {
    out.warnings.push_back("no ratios found at theta " + r.theta.str() + "; dimension 0 is degenerate");
    return out;
  }
  const auto accepted = r.accepted_empirical();
  if (!r.certified.empty()) out.certified_dimension = dimension_of(r.certified);
  if (!accepted.empty()) out.empirical_dimension = dimension_of(accepted);
  if (out.certified_dimension && out.empirical_dimension && *out.certified_dimension != *out.empirical_dimension) {
    out.warnings.push_back("tier mismatch: certified ratios span dimension " +
                           std::to_string(*out.certified_dimension) + ", empirical ratios span " +
                           std::to_string(*out.empirical_dimension));
  }
  return out;
}

std::size_t lower_bound(const AlgdepReport& r) { return r.independence_number; }

// ---------------------------------------------------------------------------
// verifiers

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

CommensurabilityReport verify_commensurability(const MonomialCone& a, const MonomialCone& x) {
  CommensurabilityReport out;
  auto check = [&](const MonomialCone& cone, const MonomialCone& elems, std::vector<InclusionCheck>& dst) {
    for (const auto& e : elems.generators()) {
      auto m = cone_contains_q(cone, e);
      if (!m.member && !out.counterexample) out.counterexample = e;
      dst.push_back({e, m.member, std::move(m.coefficients)});
    }
  };
  check(a, x, out.x_in_a);
  check(x, a, out.a_in_x);
  out.verdict = out.counterexample ? Verdict::fail : Verdict::pass;
  return out;
}

std::optional<Rational> residual_threshold(const symgaps::SymbolicGapSet& s) {
  const Rational delta = s.natural_delta();
  if (!delta.is_positive()) return std::nullopt;
  const auto split = symgaps::residual_split(s, delta);
  if (split.gamma.empty()) return std::nullopt;
  return split.gamma.front();
}

SandwichReport verify_sandwich(const symgaps::SymbolicGapSet& s, const Rational& theta, const Rational& floor,
                               const RatioOptions& opts) {
  SandwichReport out;
  out.theta = theta;
  out.floor = floor;
  out.threshold = residual_threshold(s);
  if (!floor.is_positive()) throw DomainError("ratio floor must be positive");
  if (!theta.is_positive() || theta < floor) {
    out.reason = "theta must lie at or above the floor";
    return out;
  }
  if (!s.contains(theta)) {
    out.reason = "theta " + theta.str() + " is not a gap length";
    return out;
  }
  if (out.threshold && theta >= *out.threshold) {
    out.reason = "theta " + theta.str() + " is not below the residual threshold " + out.threshold->str();
    return out;
  }

  const auto gaps = s.enumerate(floor);
  out.ratios = ratios_of(gaps, theta, opts, &s);
  const MonomialCone cone = MonomialCone::of(s.graph());

  if (s.graph().is_ifs()) {
    out.lower_expected = truncated_products(cone, min(floor, floor / theta));
    for (const auto& r : out.lower_expected) {
      const bool listed = std::binary_search(out.ratios.certified.begin(), out.ratios.certified.end(), r);
      if (!listed || !s.contains(theta * r) || !s.contains(theta * r * r)) out.lower_missing.push_back(r);
    }
  }
  out.upper_checked = out.ratios.combined();
  for (const auto& r : out.upper_checked) {
    if (!cone_contains_q(cone, r).member) out.upper_violations.push_back(r);
  }

  out.verdict = out.lower_missing.empty() && out.upper_violations.empty() ? Verdict::pass : Verdict::fail;
  if (out.verdict == Verdict::fail) {
    out.reason = std::to_string(out.lower_missing.size()) + " lower-inclusion misses, " +
                 std::to_string(out.upper_violations.size()) + " ratios outside the rational cone";
  }
  return out;
}

std::optional<ThetaChoice> choose_theta(const symgaps::SymbolicGapSet& s, const RatioOptions& opts) {
  const Rational r_min = s.graph().ratio_set().front();
  const auto threshold = residual_threshold(s);
  std::optional<Rational> theta;
  if (threshold) {
    Rational cutoff = *threshold * r_min;
    for (int tries = 0; tries < 64 && !theta; ++tries, cutoff *= r_min) {
      const auto e = s.enumerate(cutoff);
      for (auto it = e.values.rbegin(); it != e.values.rend(); ++it) {
        if (*it < *threshold) {
          theta = *it;
          break;
        }
      }
    }
  } else if (s.natural_delta().is_positive()) {
    const auto e = s.enumerate(s.natural_delta() * r_min);
    if (!e.values.empty()) theta = e.values.back();
  }
  if (!theta) return std::nullopt;
  return ThetaChoice{*theta, *theta * r_min.pow(static_cast<long>(opts.min_witnesses) - 1)};
}

YzxReport verify_yzx(const model::GDInstance& g, std::size_t root, const RatioOptions& opts) {
  const auto s = symgaps::SymbolicGapSet::build(g, root);
  YzxReport out;
  out.one_vertex = g.is_ifs();
  out.from_ifs = algdep_of_ifs(g);

  const auto choice = choose_theta(s, opts);
  if (!choice) {
    out.verdict = Verdict::inconclusive;
    out.summary = "no gap length below the residual threshold";
    return out;
  }
  out.theta = choice->theta;
  out.floor = choice->floor;

  const auto gaps = s.enumerate(out.floor);
  const auto report = ratios_of(gaps, out.theta, opts, &s);
  out.from_gaps = algdep_from_gaps(report);

  if (out.one_vertex) {
    const bool equal = out.from_gaps.dependence_number == out.from_ifs.dependence_number;
    out.verdict = equal ? Verdict::pass : Verdict::fail;
    out.summary = "dependence " + std::to_string(out.from_gaps.dependence_number) + (equal ? " = " : " != ") +
                  std::to_string(out.from_ifs.dependence_number);
  } else {
    const bool ok = out.from_gaps.independence_number <= out.from_ifs.independence_number;
    out.verdict = ok ? Verdict::pass : Verdict::fail;
    out.summary = "gap dimension " + std::to_string(out.from_gaps.independence_number) + (ok ? " <= " : " > ") +
                  "independence " + std::to_string(out.from_ifs.independence_number);
  }
  return out;
}

// ---------------------------------------------------------------------------
// pruning

PruneReport prune_to_ssc(const model::GDInstance& g, bool full_measure_asserted, int depth) {
  if (!full_measure_asserted) {
    throw DomainError("refusing to prune: the full-measure hypothesis must be asserted by the caller");
  }
  if (!g.is_ifs()) throw UnsupportedError("pruning applies to one-vertex systems only");
  if (depth < 1) throw DomainError("pruning depth must be positive");
  model::require_valid(g);

  PruneReport out;
  out.depth = depth;
  model::GDInstance cur = g;
  model::SeparationOptions sep_opts;
  sep_opts.depth_limit = depth;
  while (true) {
    const auto rep = model::separation_check(cur, sep_opts);
    out.final_separation = rep.verdict;
    if (rep.verdict == model::Separation::hull_disjoint || rep.verdict == model::Separation::ssc_certified) break;
    if (!rep.nested_edge) {
      throw VerdictError("full-measure hypothesis not confirmed at this depth: " + rep.detail);
    }
    Removal rm;
    rm.removed_edge = cur.edges()[*rep.nested_edge].id;
    rm.removed_map = cur.edges()[*rep.nested_edge].map;
    rm.container_edge = cur.edges()[*rep.container_edge].id;
    for (auto ei : rep.nesting_path) rm.path.push_back(cur.edges()[ei].id);
    out.removals.push_back(std::move(rm));
    cur = cur.without_edges({*rep.nested_edge});
  }
  out.pruned = cur;

  const auto before = model::approximate(g, 0, depth);
  const auto after = model::approximate(cur, 0, depth);
  out.hausdorff = model::hausdorff_distance(before.intervals, after.intervals);
  out.tolerance = Rational(2) * g.max_ratio().pow(depth) * model::hulls(g)[0].length();
  out.attractor_reproduced = out.hausdorff <= out.tolerance;
  return out;
}

}  // namespace ifsgap::analysis
