#include "ifsgap/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "ifsgap/analysis.hpp"
#include "ifsgap/errors.hpp"
#include "ifsgap/metgaps.hpp"
#include "ifsgap/model.hpp"
#include "ifsgap/report.hpp"
#include "ifsgap/symgaps.hpp"

namespace ifsgap::cli {

namespace {

using report::json;

constexpr int kMaxDepth = 64;

struct Config {
  std::string format = "json";
  std::string output;
  std::string instance;
  std::string vertex;

  bool exact = false;
  bool metric = false;
  std::string cutoff;
  int depth = -1;
  std::string noise_floor;
  std::string points = "midpoints";

  std::string cloud;
  std::string delta;
  bool profile = false;

  std::string theta;
  std::string floor;
  std::size_t min_witnesses = 4;
  int verify_depth = 12;

  bool from_ifs = false;
  bool from_gaps = false;

  bool commensurability = false;
  bool yzx = false;
  bool sandwich = false;
  std::string against;

  bool full_measure = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Outcome {
  std::string theorem;
  json parameters = json::object();
  json result = json::object();
  json findings = json::array();
  std::string status = "ok";
  int code = kOk;
  std::string csv;
};

json finding(const std::string& severity, const std::string& code, const std::string& message) {
  return {{"severity", severity}, {"code", code}, {"message", message}};
}

std::size_t env_budget(const char* name, std::size_t fallback) {
  const char* raw = std::getenv(name);
  if (!raw || !*raw) return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (*end != '\0' || v == 0) throw UsageError(std::string(name) + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

Rational rational_param(const std::string& text, const char* name, Outcome& o) {
  if (text.empty()) throw UsageError(std::string("--") + name + " is required");
  Rational r;
  try {
    r = Rational::parse(text);
  } catch (const DomainError& e) {
    throw UsageError(std::string("--") + name + ": " + e.what());
  }
  o.parameters[name] = r.str();
  return r;
}

Rational positive_param(const std::string& text, const char* name, Outcome& o) {
  Rational r = rational_param(text, name, o);
  if (!r.is_positive()) throw UsageError(std::string("--") + name + " must be positive");
  return r;
}

int depth_param(const Config& c, Outcome& o) {
  if (c.depth < 0) throw UsageError("--depth is required");
  if (c.depth > kMaxDepth) throw UsageError("--depth exceeds the ceiling of " + std::to_string(kMaxDepth));
  o.parameters["depth"] = c.depth;
  return c.depth;
}

model::GDInstance load_valid(const Config& c, Outcome& o) {
  if (c.instance.empty()) throw UsageError("an instance file is required");
  o.parameters["instance"] = c.instance;
  auto g = model::GDInstance::load(c.instance);
  model::require_valid(g);
  return g;
}

std::size_t vertex_param(const Config& c, const model::GDInstance& g, Outcome& o) {
  if (c.vertex.empty()) {
    o.parameters["vertex"] = g.vertices().front();
    return 0;
  }
  const auto v = g.vertex_index(c.vertex);
  if (!v) throw UsageError("unknown vertex '" + c.vertex + "'");
  o.parameters["vertex"] = c.vertex;
  return *v;
}

analysis::RatioOptions ratio_options(const Config& c, Outcome& o) {
  if (c.min_witnesses < 3) throw UsageError("--min-witnesses must be at least 3");
  if (c.verify_depth < 0) throw UsageError("--verify-depth must be nonnegative");
  o.parameters["min_witnesses"] = c.min_witnesses;
  o.parameters["verify_depth"] = c.verify_depth;
  return {c.min_witnesses, c.verify_depth};
}

std::string double_str(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void apply_verdict(Outcome& o, analysis::Verdict v) {
  o.status = analysis::to_string(v);
  o.code = v == analysis::Verdict::fail ? kVerdictFailed : kOk;
}

// ---------------------------------------------------------------------------
// commands

void cmd_validate(const Config& c, Outcome& o) {
  if (c.instance.empty()) throw UsageError("an instance file is required");
  o.parameters["instance"] = c.instance;
  const auto g = model::GDInstance::load(c.instance);
  const auto problems = model::validate(g);
  o.result["vertices"] = g.vertex_count();
  o.result["edges"] = g.edge_count();
  o.result["valid"] = problems.empty();
  for (const auto& p : problems) o.findings.push_back(finding("error", "validation", p));
  if (problems.empty()) {
    o.result["separation"] = report::to_json(g, model::separation_check(g));
    o.status = "valid";
    o.csv = "valid\n";
  } else {
    o.status = "invalid";
    o.code = kUsage;
    for (const auto& p : problems) o.csv += p + "\n";
  }
}

void cmd_hull(const Config& c, Outcome& o) {
  const auto g = load_valid(c, o);
  const auto h = model::hulls(g);
  json hulls = json::array();
  o.csv = "vertex,lo,hi\n";
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    json children = json::array();
    for (const auto& ch : model::child_hulls(g, h, v)) {
      children.push_back({{"edge", g.edges()[ch.edge].id}, {"interval", report::to_json(ch.interval)}});
    }
    hulls.push_back({{"vertex", g.vertices()[v]}, {"hull", report::to_json(h[v])}, {"children", children}});
    o.csv += g.vertices()[v] + "," + h[v].lo.str() + "," + h[v].hi.str() + "\n";
  }
  o.result["hulls"] = hulls;
}

void cmd_gaps(const Config& c, Outcome& o) {
  if (c.exact == c.metric) throw UsageError("gaps needs exactly one of --exact or --metric");
  const auto g = load_valid(c, o);
  const auto root = vertex_param(c, g, o);
  if (c.exact) {
    o.theorem = "gap-length structure of hull-disjoint graph-directed attractors";
    o.parameters["mode"] = "exact";
    const Rational cutoff = positive_param(c.cutoff, "cutoff", o);
    const auto s = symgaps::SymbolicGapSet::build(g, root);
    const auto e = s.enumerate(cutoff, env_budget("IFSGAP_MAX_GAPS", symgaps::kDefaultEnumerationBudget));
    o.result = report::to_json(e);
    o.result["natural_delta"] = s.natural_delta().str();
    for (auto it = e.values.rbegin(); it != e.values.rend(); ++it) o.csv += it->str() + "\n";
    return;
  }

  o.theorem = "gap lengths as discontinuities of the delta-component count";
  o.parameters["mode"] = "metric";
  const int depth = depth_param(c, o);
  const Rational floor = positive_param(c.noise_floor, "noise_floor", o);
  model::ApproximateOptions opts;
  opts.interval_budget = env_budget("IFSGAP_MAX_INTERVALS", opts.interval_budget);
  if (c.points == "midpoints") opts.points = model::PointMode::midpoints;
  else if (c.points == "endpoints") opts.points = model::PointMode::endpoints;
  else throw UsageError("--points must be midpoints or endpoints");
  o.parameters["points"] = c.points;
  const auto approx = model::approximate(g, root, depth, opts);
  const auto cloud = metgaps::PointCloud::from_approximation(approx, true);
  const auto m = metgaps::metric_gaps(cloud, floor.to_double());
  o.result = report::to_json(m);
  o.result["resolution"] = approx.resolution.str();
  o.result["points"] = cloud.size();
  for (const auto& f : m.findings) o.findings.push_back(finding("warning", "resolution", f));
  for (auto it = m.values.rbegin(); it != m.values.rend(); ++it) o.csv += double_str(*it) + "\n";
}

void cmd_kappa(const Config& c, Outcome& o) {
  o.theorem = "gap lengths as discontinuities of the delta-component count";
  std::optional<metgaps::PointCloud> cloud;
  if (!c.cloud.empty()) {
    if (!c.instance.empty()) throw UsageError("give either an instance or --cloud, not both");
    o.parameters["cloud"] = c.cloud;
    cloud = metgaps::PointCloud::load_csv(c.cloud);
  } else {
    const auto g = load_valid(c, o);
    const auto root = vertex_param(c, g, o);
    const int depth = depth_param(c, o);
    model::ApproximateOptions opts;
    opts.interval_budget = env_budget("IFSGAP_MAX_INTERVALS", opts.interval_budget);
    cloud = metgaps::PointCloud::from_approximation(model::approximate(g, root, depth, opts), true);
  }
  o.result["points"] = cloud->size();
  o.result["dimension"] = cloud->dim();

  if (!c.delta.empty()) {
    if (c.profile) throw UsageError("give either --delta or --profile");
    const Rational delta = positive_param(c.delta, "delta", o);
    const std::size_t k = cloud->is_exact() ? metgaps::kappa_exact(*cloud, delta)
                                            : metgaps::kappa(*cloud, delta.to_double());
    o.result["delta"] = delta.str();
    o.result["kappa"] = k;
    o.csv = "delta,kappa\n" + delta.str() + "," + std::to_string(k) + "\n";
    return;
  }
  o.parameters["profile"] = true;
  const auto p = metgaps::merge_heights(*cloud);
  o.result["profile"] = report::to_json(p);
  o.csv = "from_delta,kappa\n0," + std::to_string(p.counts.front()) + "\n";
  for (std::size_t i = 0; i < p.heights.size(); ++i) {
    const std::string h = p.exact_heights ? (*p.exact_heights)[i].str() : double_str(p.heights[i]);
    o.csv += h + "," + std::to_string(p.counts[i + 1]) + "\n";
  }
}

void cmd_ratios(const Config& c, Outcome& o) {
  o.theorem = "ratio analysis of gap sets";
  const auto g = load_valid(c, o);
  const auto root = vertex_param(c, g, o);
  const Rational theta = positive_param(c.theta, "theta", o);
  const Rational floor = positive_param(c.floor, "floor", o);
  const auto opts = ratio_options(c, o);
  const auto s = symgaps::SymbolicGapSet::build(g, root);
  const auto e = s.enumerate(floor, env_budget("IFSGAP_MAX_GAPS", symgaps::kDefaultEnumerationBudget));
  const auto r = analysis::ratios_of(e, theta, opts, &s);
  o.result = report::to_json(r);
  o.csv = "ratio,tier,start,witnesses,verified_depth\n";
  for (const auto& x : r.certified) o.csv += x.str() + ",certified,,,\n";
  for (const auto& x : r.empirical) {
    o.csv += x.ratio.str() + "," + (x.verified ? "verified" : "rejected") + "," + x.start.str() + "," +
             std::to_string(x.witnesses) + "," + std::to_string(x.verified_depth) + "\n";
  }
}

// Ratio report at the given or automatically chosen theta.
analysis::RatioReport gap_ratios(const Config& c, const symgaps::SymbolicGapSet& s, Outcome& o) {
  const auto opts = ratio_options(c, o);
  Rational theta;
  Rational floor;
  if (!c.theta.empty() || !c.floor.empty()) {
    theta = positive_param(c.theta, "theta", o);
    floor = positive_param(c.floor, "floor", o);
  } else {
    const auto choice = analysis::choose_theta(s, opts);
    if (!choice) throw DomainError("no gap length below the residual threshold");
    theta = choice->theta;
    floor = choice->floor;
    o.parameters["theta"] = theta.str();
    o.parameters["floor"] = floor.str();
    o.parameters["theta_chosen"] = "auto";
  }
  const auto e = s.enumerate(floor, env_budget("IFSGAP_MAX_GAPS", symgaps::kDefaultEnumerationBudget));
  return analysis::ratios_of(e, theta, opts, &s);
}

void cmd_algdep(const Config& c, Outcome& o) {
  if (c.from_ifs == c.from_gaps) throw UsageError("algdep needs exactly one of --from-ifs or --from-gaps");
  const auto g = load_valid(c, o);
  analysis::AlgdepReport rep;
  if (c.from_ifs) {
    o.theorem = "algebraic dependence number of the contraction ratios";
    o.parameters["source"] = "ifs";
    rep = analysis::algdep_of_ifs(g);
  } else {
    o.theorem = "intrinsic characterisation of the algebraic dependence number";
    o.parameters["source"] = "gaps";
    const auto root = vertex_param(c, g, o);
    const auto s = symgaps::SymbolicGapSet::build(g, root);
    rep = analysis::algdep_from_gaps(gap_ratios(c, s, o));
  }
  o.result = report::to_json(rep);
  for (const auto& w : rep.warnings) o.findings.push_back(finding("warning", "ratios", w));
  o.csv = "independence_number,dependence_number\n" + std::to_string(rep.independence_number) + "," +
          std::to_string(rep.dependence_number) + "\n";
}

void cmd_verify(const Config& c, Outcome& o) {
  const int modes = int{c.commensurability} + int{c.yzx} + int{c.sandwich};
  if (modes != 1) throw UsageError("verify needs exactly one of --commensurability, --yzx or --sandwich");
  const auto g = load_valid(c, o);

  if (c.commensurability) {
    o.theorem = "logarithmic commensurability of SSC generating systems";
    if (c.against.empty()) throw UsageError("--commensurability needs --against <instance>");
    o.parameters["against"] = c.against;
    const auto other = model::GDInstance::load(c.against);
    model::require_valid(other);
    const auto rep = analysis::verify_commensurability(analysis::MonomialCone::of(g),
                                                       analysis::MonomialCone::of(other));
    o.result = report::to_json(rep);
    if (rep.counterexample) {
      o.findings.push_back(finding("error", "verdict", "ratio " + rep.counterexample->str() +
                                                           " is outside the other system's rational cone"));
    }
    apply_verdict(o, rep.verdict);
    o.csv = "verdict,counterexample\n" + o.status + "," + (rep.counterexample ? rep.counterexample->str() : "") + "\n";
    return;
  }

  const auto root = vertex_param(c, g, o);
  if (c.yzx) {
    o.theorem = "intrinsic characterisation of the algebraic dependence number";
    const auto rep = analysis::verify_yzx(g, root, ratio_options(c, o));
    o.result = report::to_json(rep);
    for (const auto& w : rep.from_gaps.warnings) o.findings.push_back(finding("warning", "ratios", w));
    apply_verdict(o, rep.verdict);
    o.csv = "verdict,summary\n" + o.status + "," + rep.summary + "\n";
    return;
  }

  o.theorem = "ratio sandwich between integer and rational monomial cones";
  const Rational theta = positive_param(c.theta, "theta", o);
  const Rational floor = positive_param(c.floor, "floor", o);
  const auto opts = ratio_options(c, o);
  const auto s = symgaps::SymbolicGapSet::build(g, root);
  const auto rep = analysis::verify_sandwich(s, theta, floor, opts);
  o.result = report::to_json(rep);
  if (rep.verdict == analysis::Verdict::inconclusive) o.findings.push_back(finding("info", "precondition", rep.reason));
  if (rep.verdict == analysis::Verdict::fail) o.findings.push_back(finding("error", "verdict", rep.reason));
  apply_verdict(o, rep.verdict);
  o.csv = "verdict,reason\n" + o.status + "," + rep.reason + "\n";
}

void cmd_bound(const Config& c, Outcome& o) {
  o.theorem = "cardinality lower bound for SSC generating systems";
  const auto g = load_valid(c, o);
  const auto from_ifs = analysis::algdep_of_ifs(g);
  std::size_t bound = analysis::lower_bound(from_ifs);
  std::string source = "ratios";
  if (model::separation_check(g).verdict == model::Separation::hull_disjoint) {
    const auto root = vertex_param(c, g, o);
    const auto s = symgaps::SymbolicGapSet::build(g, root);
    const auto from_gaps = analysis::algdep_from_gaps(gap_ratios(c, s, o));
    o.result["from_gaps"] = report::to_json(from_gaps);
    bound = analysis::lower_bound(from_gaps);
    source = "gaps";
  }
  o.result["bound"] = bound;
  o.result["source"] = source;
  o.result["from_ifs"] = report::to_json(from_ifs);
  o.result["cardinality"] = g.edge_count();
  o.result["consistent"] = bound <= g.edge_count();
  if (bound > g.edge_count()) {
    o.findings.push_back(finding("error", "verdict", "bound exceeds the number of maps"));
    o.status = "fail";
    o.code = kVerdictFailed;
  }
  o.csv = "bound,cardinality\n" + std::to_string(bound) + "," + std::to_string(g.edge_count()) + "\n";
}

void cmd_prune(const Config& c, Outcome& o) {
  o.theorem = "SSC pruning of full-measure self-similar sets";
  const auto g = load_valid(c, o);
  o.parameters["full_measure"] = c.full_measure;
  const int depth = c.depth < 0 ? 12 : depth_param(c, o);
  o.parameters["depth"] = depth;
  const auto rep = analysis::prune_to_ssc(g, c.full_measure, depth);
  o.result = report::to_json(rep);
  if (!rep.attractor_reproduced) {
    o.findings.push_back(finding("error", "verdict", "pruned cover differs by more than the tolerance"));
    o.status = "fail";
    o.code = kVerdictFailed;
  }
  o.csv = "removed,container\n";
  for (const auto& rm : rep.removals) o.csv += rm.removed_edge + "," + rm.container_edge + "\n";
}

std::string render(const std::string& command, const Config& c, const Outcome& o) {
  if (c.format == "csv") return o.csv;
  json doc{{"tool", kToolName},
           {"version", kVersion},
           {"command", command},
           {"theorem", o.theorem.empty() ? json(nullptr) : json(o.theorem)},
           {"parameters", o.parameters},
           {"result", o.result},
           {"findings", o.findings},
           {"status", o.status}};
  return doc.dump(2) + "\n";
}

void emit(const std::string& text, const Config& c, std::ostream& out) {
  if (c.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.output, std::ios::binary);
  if (!file) throw DomainError("cannot write output file '" + c.output + "'");
  file << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Gap-length analysis of self-similar and graph-directed sets on the line", kToolName};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", kVersion);

  auto common = [&](CLI::App* sub, bool needs_instance = true) {
    auto* opt = sub->add_option("instance", c.instance, "Instance JSON file");
    if (needs_instance) opt->required();
    sub->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output,-o", c.output, "Write the report to this file");
  };
  auto with_vertex = [&](CLI::App* sub) { sub->add_option("--vertex", c.vertex, "Root vertex name"); };
  auto with_ratio_opts = [&](CLI::App* sub) {
    sub->add_option("--min-witnesses", c.min_witnesses, "Terms required per ratio");
    sub->add_option("--verify-depth", c.verify_depth, "Symbolic checks below the floor");
  };

  auto* validate = app.add_subcommand("validate", "Check an instance file");
  common(validate);

  auto* hull = app.add_subcommand("hull", "Convex hulls and child hulls per vertex");
  common(hull);

  auto* gaps = app.add_subcommand("gaps", "Gap lengths, exact or from a point cloud");
  common(gaps);
  with_vertex(gaps);
  gaps->add_flag("--exact", c.exact, "Symbolic enumeration (hull-disjoint instances)");
  gaps->add_flag("--metric", c.metric, "MST merge heights of a depth-k cover sample");
  gaps->add_option("--cutoff", c.cutoff, "Smallest gap to list (exact mode)");
  gaps->add_option("--depth", c.depth, "Cover depth (metric mode)");
  gaps->add_option("--noise-floor", c.noise_floor, "Ignore merge heights at or below this (metric mode)");
  gaps->add_option("--points", c.points, "Sample points: midpoints or endpoints");

  auto* kappa = app.add_subcommand("kappa", "Component count kappa(delta) or its full step profile");
  common(kappa, false);
  with_vertex(kappa);
  kappa->add_option("--cloud", c.cloud, "Point cloud CSV instead of an instance");
  kappa->add_option("--depth", c.depth, "Cover depth when sampling an instance");
  kappa->add_option("--delta", c.delta, "Evaluate kappa at this delta");
  kappa->add_flag("--profile", c.profile, "Emit the full step function");

  auto* ratios = app.add_subcommand("ratios", "Ratio analysis at theta");
  common(ratios);
  with_vertex(ratios);
  with_ratio_opts(ratios);
  ratios->add_option("--theta", c.theta, "Gap length to analyse")->required();
  ratios->add_option("--floor", c.floor, "Truncation floor")->required();

  auto* algdep = app.add_subcommand("algdep", "Algebraic independence and dependence numbers");
  common(algdep);
  with_vertex(algdep);
  with_ratio_opts(algdep);
  algdep->add_flag("--from-ifs", c.from_ifs, "From the contraction ratios");
  algdep->add_flag("--from-gaps", c.from_gaps, "From gap-length data only");
  algdep->add_option("--theta", c.theta, "Gap length for --from-gaps (default: automatic)");
  algdep->add_option("--floor", c.floor, "Truncation floor for --from-gaps");

  auto* verify = app.add_subcommand("verify", "Run a verifier");
  common(verify);
  with_vertex(verify);
  with_ratio_opts(verify);
  verify->add_flag("--commensurability", c.commensurability, "Ratio sets lie in each other's rational cones");
  verify->add_option("--against", c.against, "Second instance for --commensurability");
  verify->add_flag("--yzx", c.yzx, "Dependence number from gaps versus from ratios");
  verify->add_flag("--sandwich", c.sandwich, "Integer cone inside ratios inside rational cone");
  verify->add_option("--theta", c.theta, "Gap length for --sandwich");
  verify->add_option("--floor", c.floor, "Truncation floor for --sandwich");

  auto* bound = app.add_subcommand("bound", "Lower bound on the number of maps");
  common(bound);
  with_vertex(bound);
  with_ratio_opts(bound);

  auto* prune = app.add_subcommand("prune", "Drop nested maps until the SSC holds");
  common(prune);
  prune->add_flag("--full-measure", c.full_measure, "Assert that the attractor is full-measure");
  prune->add_option("--depth", c.depth, "Refinement and comparison depth (default 12)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  Outcome o;
  try {
    if (command == "validate") cmd_validate(c, o);
    else if (command == "hull") cmd_hull(c, o);
    else if (command == "gaps") cmd_gaps(c, o);
    else if (command == "kappa") cmd_kappa(c, o);
    else if (command == "ratios") cmd_ratios(c, o);
    else if (command == "algdep") cmd_algdep(c, o);
    else if (command == "verify") cmd_verify(c, o);
    else if (command == "bound") cmd_bound(c, o);
    else cmd_prune(c, o);
  } catch (const std::exception& e) {
    o.result = json::object();
    o.findings = json::array();
    std::string code = "error";
    o.code = kUsage;
    if (const auto* v = dynamic_cast<const ValidationError*>(&e)) {
      code = "validation";
      for (const auto& f : v->findings()) o.findings.push_back(finding("error", code, f));
    } else if (dynamic_cast<const ResourceError*>(&e)) {
      code = "resource";
      o.code = kResource;
    } else if (dynamic_cast<const VerdictError*>(&e)) {
      code = "verdict";
      o.code = kVerdictFailed;
    } else if (dynamic_cast<const UnsupportedError*>(&e)) {
      code = "unsupported";
    } else if (dynamic_cast<const UsageError*>(&e)) {
      code = "usage";
    } else if (dynamic_cast<const DomainError*>(&e)) {
      code = "domain";
    } else {
      code = "internal";
    }
    if (o.findings.empty()) o.findings.push_back(finding("error", code, e.what()));
    o.status = "error";
    err << kToolName << " " << command << ": " << e.what() << "\n";
    if (c.format == "csv") return o.code;
  }
  try {
    emit(render(command, c, o), c, out);
  } catch (const std::exception& e) {
    err << kToolName << ": " << e.what() << "\n";
    return kUsage;
  }
  return o.code;
}

}  // namespace ifsgap::cli
