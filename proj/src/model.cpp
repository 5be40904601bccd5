#include "ifsgap/model.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <numeric>
#include <tuple>

#include <omp.h>

#include "ifsgap/errors.hpp"

namespace ifsgap::model {

// ---------------------------------------------------------------------------
// Similarity1D

Rational Similarity1D::apply(const Rational& x) const {
  Rational y = ratio * x;
  return sign < 0 ? offset - y : offset + y;
}

Interval Similarity1D::image(const Interval& iv) const {
  Rational a = apply(iv.lo);
  Rational b = apply(iv.hi);
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

Similarity1D Similarity1D::compose(const Similarity1D& inner) const {
  // s r (s' r' x + o') + o
  Similarity1D out;
  out.ratio = ratio * inner.ratio;
  out.sign = sign * inner.sign;
  const Rational shifted = ratio * inner.offset;
  out.offset = sign < 0 ? offset - shifted : offset + shifted;
  return out;
}

Rational Similarity1D::fixed_point() const {
  // x = s r x + o
  const Rational slope = sign < 0 ? -ratio : ratio;
  return offset / (Rational(1) - slope);
}

std::string describe(const Similarity1D& map) {
  std::string s = (map.sign < 0 ? "-" : "") + map.ratio.str() + "*x";
  if (map.offset.is_positive()) s += "+" + map.offset.str();
  if (map.offset.sign() < 0) s += map.offset.str();
  return s;
}

// ---------------------------------------------------------------------------
// GDInstance

GDInstance::GDInstance(std::vector<std::string> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), out_(vertices_.size()) {
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    if (e.from >= vertices_.size() || e.to >= vertices_.size()) {
      throw DomainError("edge " + e.id + " references an unknown vertex");
    }
    out_[e.from].push_back(i);
  }
}

GDInstance GDInstance::ifs(const std::vector<Similarity1D>& maps) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    edges.push_back({"S" + std::to_string(i + 1), 0, 0, maps[i]});
  }
  return GDInstance({"u"}, std::move(edges));
}

namespace {

Rational json_rational(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw DomainError(std::string("missing field '") + key + "'");
  const auto& v = j.at(key);
  if (v.is_string()) return Rational::parse(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  throw DomainError(std::string("field '") + key + "' must be an exact rational string");
}

int json_sign(const nlohmann::json& j) {
  if (!j.contains("sign")) return 1;
  const auto& v = j.at("sign");
  if (!v.is_number_integer()) throw DomainError("field 'sign' must be 1 or -1");
  return v.get<int>();
}

Similarity1D json_map(const nlohmann::json& j) {
  return {json_rational(j, "ratio"), json_sign(j), json_rational(j, "offset")};
}

std::string json_name(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long>());
  throw DomainError("vertex identifiers must be strings or integers");
}

}  // namespace

GDInstance GDInstance::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw DomainError("instance must be a JSON object");
  if (doc.contains("ifs")) {
    std::vector<Similarity1D> maps;
    for (const auto& m : doc.at("ifs")) maps.push_back(json_map(m));
    return ifs(maps);
  }
  if (!doc.contains("vertices") || !doc.contains("edges")) {
    throw DomainError("instance needs either 'ifs' or both 'vertices' and 'edges'");
  }
  std::vector<std::string> vertices;
  std::map<std::string, std::size_t> index;
  for (const auto& v : doc.at("vertices")) {
    auto name = json_name(v);
    if (index.contains(name)) throw DomainError("duplicate vertex '" + name + "'");
    index.emplace(name, vertices.size());
    vertices.push_back(std::move(name));
  }
  std::vector<Edge> edges;
  for (const auto& e : doc.at("edges")) {
    Edge edge;
    edge.id = e.contains("id") ? json_name(e.at("id")) : "e" + std::to_string(edges.size() + 1);
    for (const char* key : {"from", "to"}) {
      if (!e.contains(key)) throw DomainError("edge " + edge.id + " missing '" + key + "'");
      const auto name = json_name(e.at(key));
      const auto it = index.find(name);
      if (it == index.end()) throw DomainError("edge " + edge.id + " references unknown vertex '" + name + "'");
      (std::string(key) == "from" ? edge.from : edge.to) = it->second;
    }
    edge.map = json_map(e);
    edges.push_back(std::move(edge));
  }
  return GDInstance(std::move(vertices), std::move(edges));
}

GDInstance GDInstance::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open instance file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& err) {
    throw DomainError("instance file '" + path + "' is not valid JSON: " + err.what());
  }
  return from_json(doc);
}

nlohmann::json GDInstance::to_json() const {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : edges_) {
    edges.push_back({{"id", e.id},
                     {"from", vertices_[e.from]},
                     {"to", vertices_[e.to]},
                     {"ratio", e.map.ratio.str()},
                     {"sign", e.map.sign},
                     {"offset", e.map.offset.str()}});
  }
  return {{"vertices", vertices_}, {"edges", edges}};
}

std::optional<std::size_t> GDInstance::vertex_index(const std::string& name) const {
  const auto it = std::find(vertices_.begin(), vertices_.end(), name);
  if (it == vertices_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - vertices_.begin());
}

std::vector<Rational> GDInstance::ratio_set() const {
  std::set<Rational> ratios;
  for (const auto& e : edges_) ratios.insert(e.map.ratio);
  return {ratios.begin(), ratios.end()};
}

Rational GDInstance::max_ratio() const {
  Rational best(0);
  for (const auto& e : edges_) best = max(best, e.map.ratio);
  return best;
}

std::vector<bool> GDInstance::reachable_from(std::size_t u) const {
  std::vector<bool> seen(vertices_.size(), false);
  std::vector<std::size_t> stack{u};
  seen[u] = true;
  while (!stack.empty()) {
    const auto w = stack.back();
    stack.pop_back();
    for (auto ei : out_[w]) {
      const auto t = edges_[ei].to;
      if (!seen[t]) {
        seen[t] = true;
        stack.push_back(t);
      }
    }
  }
  return seen;
}

GDInstance GDInstance::without_edges(const std::set<std::size_t>& removed) const {
  std::vector<Edge> kept;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (!removed.contains(i)) kept.push_back(edges_[i]);
  }
  return GDInstance(vertices_, std::move(kept));
}

// ---------------------------------------------------------------------------
// validate

std::vector<std::string> validate(const GDInstance& g) {
  std::vector<std::string> findings;
  if (g.vertex_count() == 0) findings.emplace_back("no vertices");
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    const auto d = g.out_edges(u).size();
    if (d < 2) findings.push_back("d_" + g.vertices()[u] + " = " + std::to_string(d) + " < 2");
  }
  std::set<std::string> ids;
  for (const auto& e : g.edges()) {
    if (!ids.insert(e.id).second) findings.push_back("duplicate edge id " + e.id);
    if (!(e.map.ratio.is_positive() && e.map.ratio < Rational(1))) {
      findings.push_back("edge " + e.id + ": not contracting (ratio " + e.map.ratio.str() + ")");
    }
    if (e.map.sign != 1 && e.map.sign != -1) {
      findings.push_back("edge " + e.id + ": sign must be 1 or -1");
    }
  }
  const auto& edges = g.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      if (edges[i].from == edges[j].from && edges[i].to == edges[j].to && edges[i].map == edges[j].map) {
        findings.push_back("edges " + edges[i].id + " and " + edges[j].id +
                           ": identical similarities (maps must be distinct)");
      }
    }
  }
  return findings;
}

void require_valid(const GDInstance& g) {
  auto findings = validate(g);
  if (!findings.empty()) throw ValidationError(std::move(findings));
}

// ---------------------------------------------------------------------------
// hulls
//
// State 2u carries a_u = min F_u, state 2u+1 carries c_u = -max F_u. Every edge
// e: u -> v gives each state an affine candidate r_e * x_next + k, so both families
// are minimised together: a deterministic discounted shortest-path problem, solved
// exactly by policy iteration.

namespace {

struct Transition {
  std::size_t next;
  Rational coef;
  Rational constant;
};

std::vector<std::vector<Transition>> hull_transitions(const GDInstance& g) {
  std::vector<std::vector<Transition>> out(2 * g.vertex_count());
  for (const auto& e : g.edges()) {
    const auto u = e.from;
    const auto v = e.to;
    const auto& m = e.map;
    if (m.sign > 0) {
      out[2 * u].push_back({2 * v, m.ratio, m.offset});
      out[2 * u + 1].push_back({2 * v + 1, m.ratio, -m.offset});
    } else {
      out[2 * u].push_back({2 * v + 1, m.ratio, m.offset});
      out[2 * u + 1].push_back({2 * v, m.ratio, -m.offset});
    }
  }
  return out;
}

// Solves x_i = coef_i * x_{next_i} + constant_i exactly.
std::vector<Rational> evaluate_policy(const std::vector<const Transition*>& policy) {
  const std::size_t n = policy.size();
  std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    a[i][i] += 1;
    a[i][policy[i]->next] -= policy[i]->coef.value();
    a[i][n] = policy[i]->constant.value();
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (a[piv][col] == 0) ++piv;  // nonsingular: I - P with spectral radius < 1
    std::swap(a[piv], a[col]);
    const mpq_class lead = a[col][col];
    for (auto& x : a[col]) x /= lead;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a[i][col] == 0) continue;
      const mpq_class f = a[i][col];
      for (std::size_t j = col; j <= n; ++j) a[i][j] -= f * a[col][j];
    }
  }
  std::vector<Rational> x;
  x.reserve(n);
  for (std::size_t i = 0; i < n; ++i) x.emplace_back(a[i][n]);
  return x;
}

}  // namespace

HullList hulls(const GDInstance& g) {
  require_valid(g);
  const auto transitions = hull_transitions(g);
  std::vector<const Transition*> policy(transitions.size());
  for (std::size_t i = 0; i < transitions.size(); ++i) policy[i] = &transitions[i].front();

  std::vector<Rational> x;
  for (;;) {
    x = evaluate_policy(policy);
    bool changed = false;
    for (std::size_t i = 0; i < transitions.size(); ++i) {
      Rational current = x[i];
      for (const auto& t : transitions[i]) {
        Rational candidate = t.coef * x[t.next] + t.constant;
        if (candidate < current) {
          current = candidate;
          policy[i] = &t;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }

  HullList out;
  out.reserve(g.vertex_count());
  for (std::size_t u = 0; u < g.vertex_count(); ++u) out.push_back({x[2 * u], -x[2 * u + 1]});
  return out;
}

std::vector<ChildHull> child_hulls(const GDInstance& g, const HullList& h, std::size_t u) {
  std::vector<ChildHull> out;
  for (auto ei : g.out_edges(u)) {
    const auto& e = g.edges()[ei];
    out.push_back({ei, e.map.image(h[e.to])});
  }
  std::sort(out.begin(), out.end(), [](const ChildHull& a, const ChildHull& b) {
    return std::tie(a.interval, a.edge) < std::tie(b.interval, b.edge);
  });
  return out;
}

// ---------------------------------------------------------------------------
// separation

std::string to_string(Separation s) {
  switch (s) {
    case Separation::hull_disjoint: return "hull_disjoint";
    case Separation::ssc_certified: return "ssc_certified";
    case Separation::overlap: return "overlap";
    case Separation::unknown: return "unknown";
  }
  return "unknown";
}

namespace {

// Orders maps so they can key visited-state sets.
auto map_key(const Similarity1D& m) { return std::tie(m.ratio, m.sign, m.offset); }

struct StateLess {
  bool operator()(const std::pair<std::size_t, Similarity1D>& a,
                  const std::pair<std::size_t, Similarity1D>& b) const {
    if (a.first != b.first) return a.first < b.first;
    return map_key(a.second) < map_key(b.second);
  }
};

}  // namespace

std::optional<std::vector<std::size_t>> nesting_certificate(const GDInstance& g, std::size_t container,
                                                            std::size_t nested, std::size_t budget) {
  const auto& ec = g.edges()[container];
  const auto& en = g.edges()[nested];
  if (ec.from != en.from || container == nested) return std::nullopt;
  // S_n = S_c o T  =>  T = S_c^{-1} o S_n.
  Similarity1D target;
  target.ratio = en.map.ratio / ec.map.ratio;
  target.sign = ec.map.sign * en.map.sign;
  target.offset = (en.map.offset - ec.map.offset) / (ec.map.sign < 0 ? -ec.map.ratio : ec.map.ratio);
  if (target.ratio > Rational(1)) return std::nullopt;

  struct Node {
    std::size_t vertex;
    Similarity1D map;
    std::vector<std::size_t> path;
  };
  std::deque<Node> queue{{ec.to, Similarity1D::identity(), {}}};
  std::set<std::pair<std::size_t, Similarity1D>, StateLess> seen;
  seen.insert({ec.to, Similarity1D::identity()});
  std::size_t visited = 0;
  while (!queue.empty() && visited++ < budget) {
    Node node = std::move(queue.front());
    queue.pop_front();
    if (node.vertex == en.to && node.map == target) return node.path;
    for (auto ei : g.out_edges(node.vertex)) {
      const auto& e = g.edges()[ei];
      Similarity1D next = node.map.compose(e.map);
      if (next.ratio < target.ratio) continue;
      if (!seen.insert({e.to, next}).second) continue;
      auto path = node.path;
      path.push_back(ei);
      queue.push_back({e.to, std::move(next), std::move(path)});
    }
  }
  return std::nullopt;
}

namespace {

struct Piece {
  std::size_t vertex;
  Similarity1D map;
};

std::optional<Rational> shared_endpoint(const Interval& a, const Interval& b) {
  for (const auto* x : {&a.lo, &a.hi}) {
    if (*x == b.lo || *x == b.hi) return *x;
  }
  return std::nullopt;
}

enum class PairOutcome { disjoint, contact, unresolved };

struct PairResult {
  PairOutcome outcome = PairOutcome::disjoint;
  std::optional<Rational> point;
  int depth = 0;
};

PairResult refine_pair(const GDInstance& g, const HullList& h, const Piece& a, const Piece& b,
                       const SeparationOptions& opts, std::size_t& pairs_left) {
  struct Job {
    Piece a;
    Piece b;
    int depth;
  };
  std::deque<Job> queue{{a, b, 0}};
  PairResult result;
  while (!queue.empty()) {
    Job job = std::move(queue.front());
    queue.pop_front();
    result.depth = std::max(result.depth, job.depth);
    if (pairs_left == 0) {
      result.outcome = PairOutcome::unresolved;
      return result;
    }
    --pairs_left;
    const Interval ia = job.a.map.image(h[job.a.vertex]);
    const Interval ib = job.b.map.image(h[job.b.vertex]);
    if (!ia.intersects(ib)) continue;
    if (auto p = shared_endpoint(ia, ib)) {
      result.outcome = PairOutcome::contact;
      result.point = *p;
      return result;
    }
    if (job.depth >= opts.depth_limit) {
      result.outcome = PairOutcome::unresolved;
      continue;
    }
    for (auto ea : g.out_edges(job.a.vertex)) {
      const auto& edge_a = g.edges()[ea];
      Piece ca{edge_a.to, job.a.map.compose(edge_a.map)};
      for (auto eb : g.out_edges(job.b.vertex)) {
        const auto& edge_b = g.edges()[eb];
        queue.push_back({ca, Piece{edge_b.to, job.b.map.compose(edge_b.map)}, job.depth + 1});
      }
    }
  }
  return result;
}

}  // namespace

SeparationReport separation_check(const GDInstance& g, const SeparationOptions& opts) {
  const HullList h = hulls(g);
  SeparationReport report;

  struct OverlappingPair {
    std::size_t vertex;
    std::size_t first;
    std::size_t second;
  };
  std::vector<OverlappingPair> overlapping;
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    const auto children = child_hulls(g, h, u);
    for (std::size_t i = 0; i < children.size(); ++i) {
      for (std::size_t j = i + 1; j < children.size(); ++j) {
        if (children[i].interval.intersects(children[j].interval)) {
          overlapping.push_back({u, children[i].edge, children[j].edge});
        }
      }
    }
  }
  if (overlapping.empty()) {
    report.verdict = Separation::hull_disjoint;
    report.detail = "all child hulls pairwise disjoint";
    return report;
  }

  for (const auto& pair : overlapping) {
    for (auto [container, nested] : {std::pair{pair.first, pair.second}, std::pair{pair.second, pair.first}}) {
      if (auto path = nesting_certificate(g, container, nested)) {
        report.verdict = Separation::overlap;
        report.vertex = pair.vertex;
        report.edge_a = pair.first;
        report.edge_b = pair.second;
        report.container_edge = container;
        report.nested_edge = nested;
        report.nesting_path = *path;
        report.detail = "S_" + g.edges()[nested].id + " = S_" + g.edges()[container].id +
                        " o (path of length " + std::to_string(path->size()) + ")";
        return report;
      }
    }
  }

  std::size_t pairs_left = opts.pair_budget;
  bool unresolved = false;
  for (const auto& pair : overlapping) {
    const auto& e1 = g.edges()[pair.first];
    const auto& e2 = g.edges()[pair.second];
    const auto res = refine_pair(g, h, {e1.to, e1.map}, {e2.to, e2.map}, opts, pairs_left);
    report.depth_reached = std::max(report.depth_reached, res.depth);
    if (res.outcome == PairOutcome::contact) {
      report.verdict = Separation::overlap;
      report.vertex = pair.vertex;
      report.edge_a = pair.first;
      report.edge_b = pair.second;
      report.witness_point = res.point;
      report.detail = "pieces " + e1.id + " and " + e2.id + " share the attractor point " + res.point->str();
      return report;
    }
    if (res.outcome == PairOutcome::unresolved && !unresolved) {
      unresolved = true;
      report.vertex = pair.vertex;
      report.edge_a = pair.first;
      report.edge_b = pair.second;
    }
  }
  if (unresolved) {
    report.verdict = Separation::unknown;
    report.detail = "overlapping child hulls not separated within depth " + std::to_string(opts.depth_limit);
  } else {
    report.verdict = Separation::ssc_certified;
    report.vertex.reset();
    report.detail = "refined covers of every overlapping child pair are disjoint";
  }
  return report;
}

// ---------------------------------------------------------------------------
// approximate

Approximation approximate(const GDInstance& g, std::size_t u, int depth, const ApproximateOptions& opts) {
  if (depth < 0) throw DomainError("approximation depth must be nonnegative");
  if (u >= g.vertex_count()) throw DomainError("unknown vertex index");
  const HullList h = hulls(g);

  // Path counts, saturating at the budget.
  const std::size_t cap = opts.interval_budget + 1;
  std::vector<std::size_t> count(g.vertex_count(), 1);
  for (int k = 0; k < depth; ++k) {
    std::vector<std::size_t> next(g.vertex_count(), 0);
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      for (auto ei : g.out_edges(v)) next[v] = std::min(cap, next[v] + count[g.edges()[ei].to]);
    }
    count = std::move(next);
  }
  if (count[u] > opts.interval_budget) {
    throw ResourceError("depth " + std::to_string(depth) + " needs more than " +
                        std::to_string(opts.interval_budget) + " intervals");
  }

  std::vector<Piece> level{{u, Similarity1D::identity()}};
  for (int k = 0; k < depth; ++k) {
    std::vector<std::size_t> offset(level.size() + 1, 0);
    for (std::size_t i = 0; i < level.size(); ++i) offset[i + 1] = offset[i] + g.out_edges(level[i].vertex).size();
    std::vector<Piece> next(offset.back(), Piece{0, Similarity1D::identity()});
    const auto n = static_cast<std::ptrdiff_t>(level.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto& piece = level[static_cast<std::size_t>(i)];
      std::size_t slot = offset[static_cast<std::size_t>(i)];
      for (auto ei : g.out_edges(piece.vertex)) {
        const auto& e = g.edges()[ei];
        next[slot++] = Piece{e.to, piece.map.compose(e.map)};
      }
    }
    level = std::move(next);
  }

  Approximation out;
  out.vertex = u;
  out.depth = depth;
  out.intervals.resize(level.size());
  const auto n = static_cast<std::ptrdiff_t>(level.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& piece = level[static_cast<std::size_t>(i)];
    out.intervals[static_cast<std::size_t>(i)] = piece.map.image(h[piece.vertex]);
  }
  std::sort(out.intervals.begin(), out.intervals.end());

  out.points.reserve(opts.points == PointMode::endpoints ? 2 * level.size() : level.size());
  for (const auto& iv : out.intervals) {
    if (opts.points == PointMode::midpoints) {
      out.points.push_back((iv.lo + iv.hi) / Rational(2));
    } else {
      out.points.push_back(iv.lo);
      out.points.push_back(iv.hi);
    }
  }

  const auto reach = g.reachable_from(u);
  Rational diam(0);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (reach[v]) diam = max(diam, h[v].length());
  }
  out.resolution = g.max_ratio().pow(depth) * diam;
  return out;
}

// ---------------------------------------------------------------------------
// path products

std::set<Rational> path_products(const GDInstance& g, std::size_t u, std::size_t v, const Rational& floor) {
  if (!floor.is_positive()) throw DomainError("path product floor must be positive");
  std::set<Rational> result;
  std::set<std::pair<std::size_t, Rational>> seen;
  std::vector<std::pair<std::size_t, Rational>> stack{{u, Rational(1)}};
  while (!stack.empty()) {
    auto [w, p] = std::move(stack.back());
    stack.pop_back();
    for (auto ei : g.out_edges(w)) {
      const auto& e = g.edges()[ei];
      Rational q = p * e.map.ratio;
      if (q < floor) continue;
      if (e.to == v) result.insert(q);
      if (seen.emplace(e.to, q).second) stack.emplace_back(e.to, std::move(q));
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Hausdorff distance between unions of intervals

namespace {

std::vector<Interval> merged(std::vector<Interval> ivs) {
  std::sort(ivs.begin(), ivs.end());
  std::vector<Interval> out;
  for (auto& iv : ivs) {
    if (!out.empty() && iv.lo <= out.back().hi) {
      out.back().hi = max(out.back().hi, iv.hi);
    } else {
      out.push_back(std::move(iv));
    }
  }
  return out;
}

Rational distance_to(const Rational& x, const std::vector<Interval>& b) {
  auto it = std::lower_bound(b.begin(), b.end(), x, [](const Interval& iv, const Rational& v) { return iv.hi < v; });
  std::optional<Rational> best;
  if (it != b.end()) {
    if (it->lo <= x) return Rational(0);
    best = it->lo - x;
  }
  if (it != b.begin()) {
    Rational d = x - std::prev(it)->hi;
    if (!best || d < *best) best = d;
  }
  return *best;
}

// sup over x in union(a) of dist(x, union(b)); both inputs merged and sorted.
Rational directed_hausdorff(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  Rational worst(0);
  for (const auto& iv : a) {
    worst = max(worst, distance_to(iv.lo, b));
    worst = max(worst, distance_to(iv.hi, b));
    // Interior maxima sit at midpoints of bounded gaps of b that meet iv.
    auto it = std::lower_bound(b.begin(), b.end(), iv.lo, [](const Interval& x, const Rational& v) { return x.hi < v; });
    if (it != b.begin()) --it;
    for (; it != b.end() && std::next(it) != b.end() && it->hi <= iv.hi; ++it) {
      const Rational& g1 = it->hi;
      const Rational& g2 = std::next(it)->lo;
      const Rational c1 = max(iv.lo, g1);
      const Rational c2 = min(iv.hi, g2);
      if (c2 < c1) continue;
      Rational m = (g1 + g2) / Rational(2);
      m = max(c1, min(c2, m));
      worst = max(worst, min(m - g1, g2 - m));
    }
  }
  return worst;
}

}  // namespace

Rational hausdorff_distance(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  if (a.empty() || b.empty()) throw DomainError("Hausdorff distance of an empty set");
  const auto ma = merged(a);
  const auto mb = merged(b);
  return max(directed_hausdorff(ma, mb), directed_hausdorff(mb, ma));
}

}  // namespace ifsgap::model
