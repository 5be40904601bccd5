#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "ifsgap/errors.hpp"
#include "ifsgap/metgaps.hpp"
#include "union_find.hpp"

namespace ifsgap::metgaps {

namespace {

constexpr std::size_t kLeafSize = 16;
constexpr std::int64_t kMixed = -1;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Node {
  std::array<double, 3> lo{};
  std::array<double, 3> hi{};
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
  std::int32_t left = -1;
  std::int32_t right = -1;
};

// Points are renumbered into kd order so that every subtree is a contiguous range.
class KdTree {
 public:
  KdTree(const PointCloud& c) : dim_(c.dim()), n_(c.size()) {
    std::vector<std::uint32_t> perm(n_);
    std::iota(perm.begin(), perm.end(), 0u);
    nodes_.reserve(2 * (n_ / kLeafSize + 1));
    build(c, perm, 0, static_cast<std::uint32_t>(n_));
    pts_.resize(n_ * dim_);
    for (std::size_t k = 0; k < n_; ++k) {
      for (std::size_t d = 0; d < dim_; ++d) pts_[k * dim_ + d] = c.point(perm[k])[d];
    }
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return n_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const double* point(std::size_t k) const { return pts_.data() + k * dim_; }

  double dist(std::size_t a, std::size_t b) const {
    const double* p = point(a);
    const double* q = point(b);
    if (dim_ == 1) return std::fabs(p[0] - q[0]);
    double s = 0.0;
    for (std::size_t d = 0; d < dim_; ++d) {
      const double t = p[d] - q[d];
      s += t * t;
    }
    return std::sqrt(s);
  }

  double box_dist(const double* p, const Node& nd) const {
    if (dim_ == 1) {
      if (p[0] < nd.lo[0]) return nd.lo[0] - p[0];
      if (p[0] > nd.hi[0]) return p[0] - nd.hi[0];
      return 0.0;
    }
    double s = 0.0;
    for (std::size_t d = 0; d < dim_; ++d) {
      double t = 0.0;
      if (p[d] < nd.lo[d]) t = nd.lo[d] - p[d];
      else if (p[d] > nd.hi[d]) t = p[d] - nd.hi[d];
      s += t * t;
    }
    return std::sqrt(s);
  }

 private:
  std::int32_t build(const PointCloud& c, std::vector<std::uint32_t>& perm, std::uint32_t b, std::uint32_t e) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    Node nd;
    nd.begin = b;
    nd.end = e;
    for (std::size_t d = 0; d < dim_; ++d) {
      nd.lo[d] = kInf;
      nd.hi[d] = -kInf;
    }
    for (auto k = b; k < e; ++k) {
      for (std::size_t d = 0; d < dim_; ++d) {
        nd.lo[d] = std::min(nd.lo[d], c.point(perm[k])[d]);
        nd.hi[d] = std::max(nd.hi[d], c.point(perm[k])[d]);
      }
    }
    if (e - b > kLeafSize) {
      std::size_t axis = 0;
      for (std::size_t d = 1; d < dim_; ++d) {
        if (nd.hi[d] - nd.lo[d] > nd.hi[axis] - nd.lo[axis]) axis = d;
      }
      const auto mid = b + (e - b) / 2;
      std::nth_element(perm.begin() + b, perm.begin() + mid, perm.begin() + e,
                       [&](std::uint32_t x, std::uint32_t y) { return c.point(x)[axis] < c.point(y)[axis]; });
      nd.left = build(c, perm, b, mid);
      nd.right = build(c, perm, mid, e);
    }
    nodes_[id] = nd;
    return id;
  }

  std::size_t dim_;
  std::size_t n_;
  std::vector<Node> nodes_;
  std::vector<double> pts_;
};

void atomic_min(std::atomic<double>& a, double v) {
  double cur = a.load(std::memory_order_relaxed);
  while (v < cur && !a.compare_exchange_weak(cur, v, std::memory_order_relaxed)) {
  }
}

struct Candidate {
  double w = kInf;
  std::int64_t lo = -1;
  std::int64_t hi = -1;

  bool better_than(const Candidate& o) const {
    if (w != o.w) return w < o.w;
    if (lo != o.lo) return lo < o.lo;
    return hi < o.hi;
  }
};

}  // namespace

std::vector<double> mst_weights(const PointCloud& c) {
  const std::size_t n = c.size();
  if (n == 0) throw DomainError("MST of an empty cloud");
  if (n > std::numeric_limits<std::uint32_t>::max()) throw ResourceError("point cloud too large");
  std::vector<double> weights;
  if (n == 1) return weights;
  weights.reserve(n - 1);

  const KdTree tree(c);
  const auto& nodes = tree.nodes();
  detail::UnionFind uf(n);
  std::vector<std::int64_t> comp(n);
  std::vector<std::int64_t> node_comp(nodes.size());
  std::vector<std::atomic<double>> bound(n);
  std::vector<double> near_w(n);
  std::vector<std::int64_t> near_j(n);
  std::vector<Candidate> best(n);

  while (uf.components() > 1) {
    for (std::size_t k = 0; k < n; ++k) comp[k] = static_cast<std::int64_t>(uf.find(k));
    // Children follow their parent in the node array, so a reverse sweep is bottom-up.
    for (std::size_t t = nodes.size(); t-- > 0;) {
      const Node& nd = nodes[t];
      if (nd.left < 0) {
        std::int64_t label = comp[nd.begin];
        for (auto k = nd.begin + 1; k < nd.end && label != kMixed; ++k) {
          if (comp[k] != label) label = kMixed;
        }
        node_comp[t] = label;
      } else {
        const auto l = node_comp[nd.left];
        node_comp[t] = (l != kMixed && l == node_comp[nd.right]) ? l : kMixed;
      }
    }
    for (std::size_t k = 0; k < n; ++k) bound[k].store(kInf, std::memory_order_relaxed);

#pragma omp parallel for schedule(dynamic, 1024)
    for (std::int64_t si = 0; si < static_cast<std::int64_t>(n); ++si) {
      const auto i = static_cast<std::size_t>(si);
      const std::int64_t ci = comp[i];
      const double* p = tree.point(i);
      double bw = kInf;
      std::int64_t bj = -1;
      std::array<std::int32_t, 128> stack{};
      std::size_t top = 0;
      stack[top++] = 0;
      while (top > 0) {
        const Node& nd = nodes[stack[--top]];
        const auto idx = static_cast<std::size_t>(&nd - nodes.data());
        if (node_comp[idx] == ci) continue;
        const double limit = std::min(bw, bound[ci].load(std::memory_order_relaxed));
        if (tree.box_dist(p, nd) > limit) continue;
        if (nd.left < 0) {
          for (auto k = nd.begin; k < nd.end; ++k) {
            if (comp[k] == ci) continue;
            const double d = tree.dist(i, k);
            if (d < bw || (d == bw && static_cast<std::int64_t>(k) < bj)) {
              bw = d;
              bj = k;
            }
          }
          if (bj >= 0) atomic_min(bound[ci], bw);
        } else {
          const double dl = tree.box_dist(p, nodes[nd.left]);
          const double dr = tree.box_dist(p, nodes[nd.right]);
          if (dl <= dr) {
            stack[top++] = nd.right;
            stack[top++] = nd.left;
          } else {
            stack[top++] = nd.left;
            stack[top++] = nd.right;
          }
        }
      }
      near_w[i] = bw;
      near_j[i] = bj;
    }

    for (std::size_t k = 0; k < n; ++k) best[k] = Candidate{};
    for (std::size_t i = 0; i < n; ++i) {
      if (near_j[i] < 0) continue;
      const auto a = static_cast<std::int64_t>(i);
      const Candidate cand{near_w[i], std::min(a, near_j[i]), std::max(a, near_j[i])};
      auto& slot = best[static_cast<std::size_t>(comp[i])];
      if (cand.better_than(slot)) slot = cand;
    }
    std::size_t merged = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const Candidate& cand = best[k];
      if (cand.lo < 0) continue;
      if (uf.unite(static_cast<std::size_t>(cand.lo), static_cast<std::size_t>(cand.hi))) {
        weights.push_back(cand.w);
        ++merged;
      }
    }
    if (merged == 0) throw ResourceError("Boruvka round made no progress");
  }
  std::sort(weights.begin(), weights.end());
  return weights;
}

}  // namespace ifsgap::metgaps
