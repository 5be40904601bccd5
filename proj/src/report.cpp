#include "ifsgap/report.hpp"

namespace ifsgap::report {

json rationals(std::span<const Rational> values) {
  json out = json::array();
  for (const auto& v : values) out.push_back(v.str());
  return out;
}

json to_json(const model::Interval& iv) { return {{"lo", iv.lo.str()}, {"hi", iv.hi.str()}}; }

json to_json(const model::Similarity1D& map) {
  return {{"ratio", map.ratio.str()}, {"sign", map.sign}, {"offset", map.offset.str()}};
}

json to_json(const model::GDInstance& g, const model::SeparationReport& r) {
  json out{{"verdict", model::to_string(r.verdict)}, {"detail", r.detail}, {"depth_reached", r.depth_reached}};
  if (r.vertex) out["vertex"] = g.vertices()[*r.vertex];
  if (r.edge_a) out["edges"] = {g.edges()[*r.edge_a].id, g.edges()[*r.edge_b].id};
  if (r.witness_point) out["witness_point"] = r.witness_point->str();
  if (r.nested_edge) {
    json path = json::array();
    for (auto e : r.nesting_path) path.push_back(g.edges()[e].id);
    out["nesting"] = {{"nested", g.edges()[*r.nested_edge].id},
                      {"container", g.edges()[*r.container_edge].id},
                      {"path", path}};
  }
  return out;
}

json to_json(const symgaps::GapEnumeration& e) {
  std::vector<Rational> desc(e.values.rbegin(), e.values.rend());
  return {{"cutoff", e.cutoff.str()}, {"count", e.values.size()}, {"gaps", rationals(desc)}};
}

json to_json(const metgaps::KappaProfile& p) {
  json out{{"points", p.points}, {"heights", p.heights}, {"counts", p.counts}};
  if (p.exact_heights) {
    out["exact_heights"] = rationals(*p.exact_heights);
    out["arithmetic"] = "exact";
  } else {
    out["arithmetic"] = "floating";
    out["height_tolerance"] = p.tolerance;
  }
  return out;
}

json to_json(const metgaps::MetricGaps& m) {
  std::vector<double> desc(m.values.rbegin(), m.values.rend());
  json out{{"noise_floor", m.noise_floor}, {"count", m.values.size()}, {"gaps", desc}};
  out["match_tolerance"] = m.match_tolerance ? json(*m.match_tolerance) : json(nullptr);
  return out;
}

json to_json(const analysis::RatioReport& r) {
  json empirical = json::array();
  for (const auto& e : r.empirical) {
    empirical.push_back({{"ratio", e.ratio.str()},
                         {"start", e.start.str()},
                         {"witnesses", e.witnesses},
                         {"verified_depth", e.verified_depth},
                         {"verified", r.symbolic ? json(e.verified) : json(nullptr)}});
  }
  return {{"theta", r.theta.str()},
          {"floor", r.floor.str()},
          {"min_witnesses", r.options.min_witnesses},
          {"verify_depth", r.options.verify_depth},
          {"certified", rationals(r.certified)},
          {"empirical", empirical},
          {"combined", rationals(r.combined())}};
}

json to_json(const analysis::AlgdepReport& r) {
  json basis = json::array();
  for (const auto& b : r.basis.basis) basis.push_back(b.str());
  json out{{"independence_number", r.independence_number},
           {"dependence_number", r.dependence_number},
           {"ratios", rationals(r.ratios)},
           {"basis", basis},
           {"warnings", r.warnings}};
  if (r.certified_dimension) out["certified_dimension"] = *r.certified_dimension;
  if (r.empirical_dimension) out["empirical_dimension"] = *r.empirical_dimension;
  return out;
}

namespace {

json inclusions(const std::vector<analysis::InclusionCheck>& checks) {
  json out = json::array();
  for (const auto& c : checks) {
    out.push_back({{"element", c.element.str()}, {"member", c.member}, {"coefficients", rationals(c.coefficients)}});
  }
  return out;
}

}  // namespace

json to_json(const analysis::CommensurabilityReport& r) {
  json out{{"verdict", analysis::to_string(r.verdict)},
           {"x_in_a", inclusions(r.x_in_a)},
           {"a_in_x", inclusions(r.a_in_x)}};
  out["counterexample"] = r.counterexample ? json(r.counterexample->str()) : json(nullptr);
  return out;
}

json to_json(const analysis::SandwichReport& r) {
  json out{{"verdict", analysis::to_string(r.verdict)},
           {"theta", r.theta.str()},
           {"floor", r.floor.str()},
           {"reason", r.reason},
           {"lower_expected", rationals(r.lower_expected)},
           {"lower_missing", rationals(r.lower_missing)},
           {"upper_checked", rationals(r.upper_checked)},
           {"upper_violations", rationals(r.upper_violations)}};
  out["threshold"] = r.threshold ? json(r.threshold->str()) : json(nullptr);
  if (r.verdict != analysis::Verdict::inconclusive) out["ratios"] = to_json(r.ratios);
  return out;
}

json to_json(const analysis::YzxReport& r) {
  return {{"verdict", analysis::to_string(r.verdict)},
          {"one_vertex", r.one_vertex},
          {"theta", r.theta.str()},
          {"floor", r.floor.str()},
          {"summary", r.summary},
          {"from_ifs", to_json(r.from_ifs)},
          {"from_gaps", to_json(r.from_gaps)}};
}

json to_json(const analysis::PruneReport& r) {
  json removals = json::array();
  for (const auto& rm : r.removals) {
    removals.push_back({{"removed", rm.removed_edge},
                        {"map", to_json(rm.removed_map)},
                        {"container", rm.container_edge},
                        {"path", rm.path}});
  }
  return {{"maps_before", r.pruned.edge_count() + r.removals.size()},
          {"maps_after", r.pruned.edge_count()},
          {"removals", removals},
          {"separation", model::to_string(r.final_separation)},
          {"depth", r.depth},
          {"hausdorff", r.hausdorff.str()},
          {"tolerance", r.tolerance.str()},
          {"attractor_reproduced", r.attractor_reproduced},
          {"pruned", r.pruned.to_json()}};
}

}  // namespace ifsgap::report
