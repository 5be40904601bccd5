#include <algorithm>
#include <limits>
#include <vector>

#include "ifsgap/errors.hpp"
#include "ifsgap/metgaps.hpp"

namespace ifsgap::metgaps {

std::vector<double> mst_weights_reference(const PointCloud& c) {
  const std::size_t n = c.size();
  if (n == 0) throw DomainError("MST of an empty cloud");
  std::vector<double> weights;
  weights.reserve(n - 1);
  std::vector<double> key(n, std::numeric_limits<double>::infinity());
  std::vector<char> done(n, 0);
  std::size_t cur = 0;
  done[0] = 1;
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t next = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (done[j]) continue;
      key[j] = std::min(key[j], distance(c, cur, j));
      if (next == n || key[j] < key[next]) next = j;
    }
    weights.push_back(key[next]);
    done[next] = 1;
    cur = next;
  }
  std::sort(weights.begin(), weights.end());
  return weights;
}

}  // namespace ifsgap::metgaps
