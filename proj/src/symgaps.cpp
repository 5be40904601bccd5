#include "ifsgap/symgaps.hpp"

#include <algorithm>
#include <set>

#include "ifsgap/errors.hpp"
#include "ifsgap/exactnum.hpp"

namespace ifsgap::symgaps {

SymbolicGapSet SymbolicGapSet::build(const model::GDInstance& g, std::size_t root) {
  if (root >= g.vertex_count()) throw DomainError("unknown root vertex");
  const auto sep = model::separation_check(g);
  if (sep.verdict != model::Separation::hull_disjoint) {
    throw UnsupportedError("exact gap pipeline needs hull-disjoint child images (separation: " +
                           model::to_string(sep.verdict) + "); use the metric pipeline");
  }

  SymbolicGapSet s;
  s.graph_ = g;
  s.root_ = root;
  s.hulls_ = model::hulls(g);
  s.reachable_ = g.reachable_from(root);
  s.level0_.resize(g.vertex_count());
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (!s.reachable_[v]) continue;
    const auto children = model::child_hulls(g, s.hulls_, v);
    std::set<Rational> gaps;
    for (std::size_t i = 0; i + 1 < children.size(); ++i) {
      gaps.insert(children[i + 1].interval.lo - children[i].interval.hi);
    }
    s.level0_[v].assign(gaps.begin(), gaps.end());
  }

  s.reach_max_.assign(g.vertex_count(), Rational(0));
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (!s.reachable_[v]) continue;
    const auto from_v = g.reachable_from(v);
    for (std::size_t w = 0; w < g.vertex_count(); ++w) {
      if (from_v[w] && !s.level0_[w].empty()) s.reach_max_[v] = max(s.reach_max_[v], s.level0_[w].back());
    }
  }
  s.ratios_ = g.ratio_set();
  return s;
}

Rational SymbolicGapSet::natural_delta() const {
  std::optional<Rational> best;
  for (std::size_t v = 0; v < level0_.size(); ++v) {
    if (!reachable_[v] || level0_[v].empty()) continue;
    if (!best || level0_[v].front() < *best) best = level0_[v].front();
  }
  return best.value_or(Rational(0));
}

GapEnumeration SymbolicGapSet::enumerate(const Rational& cutoff, std::size_t budget) const {
  return enumerate_at(root_, cutoff, budget);
}

GapEnumeration SymbolicGapSet::enumerate_at(std::size_t v, const Rational& cutoff, std::size_t budget) const {
  if (!cutoff.is_positive()) throw DomainError("enumeration cutoff must be positive");
  if (v >= level0_.size() || !reachable_[v]) throw DomainError("vertex not reachable from the root");

  std::set<Rational> values;
  std::set<std::pair<std::size_t, Rational>> seen;
  std::vector<std::pair<std::size_t, Rational>> stack{{v, Rational(1)}};
  seen.emplace(v, Rational(1));
  const std::size_t state_budget = budget * 16;
  while (!stack.empty()) {
    auto [w, p] = std::move(stack.back());
    stack.pop_back();
    for (const auto& gap : level0_[w]) {
      Rational x = p * gap;
      if (x >= cutoff) values.insert(std::move(x));
    }
    if (values.size() > budget || seen.size() > state_budget) {
      throw ResourceError("gap enumeration above cutoff " + cutoff.str() + " exceeds budget of " +
                          std::to_string(budget) + " values");
    }
    for (auto ei : graph_.out_edges(w)) {
      const auto& e = graph_.edges()[ei];
      Rational q = p * e.map.ratio;
      // Products only shrink along a path.
      if (q * reach_max_[e.to] < cutoff) continue;
      if (seen.emplace(e.to, q).second) stack.emplace_back(e.to, std::move(q));
    }
  }
  return {cutoff, {values.begin(), values.end()}};
}

std::vector<std::pair<std::size_t, Rational>> SymbolicGapSet::representations(const Rational& x) const {
  if (!x.is_positive()) throw DomainError("gap membership requires a positive value");
  std::vector<std::pair<std::size_t, Rational>> out;
  if (x >= diameter()) return out;

  if (graph_.is_ifs()) {
    for (const auto& g : level0_[root_]) {
      const Rational y = x / g;
      if (y > Rational(1)) continue;
      const auto res = exactnum::nonneg_integer_solve(y, ratios_);
      if (res.outcome == exactnum::SearchOutcome::found) out.emplace_back(root_, g);
    }
    return out;
  }

  std::set<std::pair<std::size_t, Rational>> found;
  std::set<std::pair<std::size_t, Rational>> seen;
  std::vector<std::pair<std::size_t, Rational>> stack{{root_, Rational(1)}};
  seen.emplace(root_, Rational(1));
  while (!stack.empty()) {
    auto [w, p] = std::move(stack.back());
    stack.pop_back();
    const Rational g = x / p;
    if (std::binary_search(level0_[w].begin(), level0_[w].end(), g)) found.emplace(w, g);
    for (auto ei : graph_.out_edges(w)) {
      const auto& e = graph_.edges()[ei];
      Rational q = p * e.map.ratio;
      if (q * reach_max_[e.to] < x) continue;
      if (seen.emplace(e.to, q).second) stack.emplace_back(e.to, std::move(q));
    }
  }
  return {found.begin(), found.end()};
}

bool SymbolicGapSet::contains(const Rational& x) const { return !representations(x).empty(); }

ResidualSplit residual_split(const SymbolicGapSet& s, const Rational& delta) {
  if (!delta.is_positive()) throw DomainError("residual threshold must be positive");
  const auto& g = s.graph();
  ResidualSplit out;
  out.delta = delta;
  out.gamma_by_vertex.resize(g.vertex_count());
  out.lambda_by_vertex.resize(g.vertex_count());
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (s.reachable(v)) out.gamma_by_vertex[v] = s.enumerate_at(v, delta).values;
  }
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    if (!s.reachable(u)) continue;
    std::set<Rational> lambda;
    for (auto ei : g.out_edges(u)) {
      const auto& e = g.edges()[ei];
      const Rational upper = delta / e.map.ratio;
      for (const auto& gamma : out.gamma_by_vertex[e.to]) {
        if (gamma < upper) lambda.insert(e.map.ratio * gamma);
      }
    }
    out.lambda_by_vertex[u].assign(lambda.begin(), lambda.end());
  }
  out.gamma = out.gamma_by_vertex[s.root()];
  return out;
}

}  // namespace ifsgap::symgaps
