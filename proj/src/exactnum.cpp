#include "ifsgap/exactnum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "ifsgap/errors.hpp"

namespace ifsgap::exactnum {

// ---------------------------------------------------------------------------
// ExponentVector

ExponentVector::ExponentVector(Entries entries) : entries_(std::move(entries)) {
  std::erase_if(entries_, [](const auto& kv) { return kv.second == 0; });
}

std::int64_t ExponentVector::operator[](std::uint64_t prime) const {
  const auto it = entries_.find(prime);
  return it == entries_.end() ? 0 : it->second;
}

void ExponentVector::set(std::uint64_t prime, std::int64_t exponent) {
  if (exponent == 0) {
    entries_.erase(prime);
  } else {
    entries_[prime] = exponent;
  }
}

ExponentVector& ExponentVector::operator+=(const ExponentVector& other) {
  for (const auto& [p, e] : other.entries_) set(p, (*this)[p] + e);
  return *this;
}

ExponentVector& ExponentVector::operator-=(const ExponentVector& other) {
  for (const auto& [p, e] : other.entries_) set(p, (*this)[p] - e);
  return *this;
}

ExponentVector ExponentVector::scaled(std::int64_t factor) const {
  if (factor == 0) return {};
  ExponentVector out = *this;
  for (auto& [p, e] : out.entries_) e *= factor;
  return out;
}

std::string ExponentVector::str() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [p, e] : entries_) {
    if (!first) os << ", ";
    first = false;
    os << p << ':' << e;
  }
  os << '}';
  return os.str();
}

// ---------------------------------------------------------------------------
// factor / compose

namespace {

std::vector<std::uint32_t> sieve(std::uint64_t bound) {
  std::vector<bool> composite(bound + 1, false);
  std::vector<std::uint32_t> primes;
  for (std::uint64_t i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return primes;
}

const std::vector<std::uint32_t>& default_primes() {
  static const std::vector<std::uint32_t> primes = sieve(kDefaultPrimeBound);
  return primes;
}

// Adds sign * (exponents of n) into out.
void factor_integer(mpz_class n, int sign, std::uint64_t prime_bound,
                    const std::vector<std::uint32_t>& primes, ExponentVector::Entries& out) {
  for (std::uint32_t p : primes) {
    if (n == 1) return;
    if (static_cast<std::uint64_t>(p) > prime_bound) break;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) {
      std::int64_t e = 0;
      while (mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) {
        mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        ++e;
      }
      out[p] += sign * e;
    }
    // No factor <= p remains, so a cofactor below p^2 is prime.
    mpz_class p2 = mpz_class(p) * p;
    if (n < p2) break;
  }
  if (n == 1) return;
  const mpz_class b = mpz_class(static_cast<unsigned long>(prime_bound));
  if (n >= b * b || !n.fits_ulong_p()) {
    throw UnsupportedError("cannot factor " + n.get_str() + " by trial division up to " +
                           std::to_string(prime_bound));
  }
  out[n.get_ui()] += sign;
}

}  // namespace

ExponentVector factor(const Rational& x, std::uint64_t prime_bound) {
  if (!x.is_positive()) throw DomainError("factor requires a positive rational, got " + x.str());
  std::vector<std::uint32_t> custom;
  if (prime_bound != kDefaultPrimeBound) custom = sieve(prime_bound);
  const auto& primes = prime_bound == kDefaultPrimeBound ? default_primes() : custom;
  ExponentVector::Entries entries;
  factor_integer(x.numerator(), +1, prime_bound, primes, entries);
  factor_integer(x.denominator(), -1, prime_bound, primes, entries);
  return ExponentVector(std::move(entries));
}

Rational compose(const ExponentVector& v) {
  mpz_class num = 1;
  mpz_class den = 1;
  for (const auto& [p, e] : v.entries()) {
    mpz_class power;
    mpz_ui_pow_ui(power.get_mpz_t(), p, static_cast<unsigned long>(e > 0 ? e : -e));
    (e > 0 ? num : den) *= power;
  }
  return Rational(num, den);
}

// ---------------------------------------------------------------------------
// qrank / in_span

namespace {

using IntRow = std::vector<mpz_class>;

std::vector<std::uint64_t> support(std::span<const ExponentVector> vectors) {
  std::set<std::uint64_t> primes;
  for (const auto& v : vectors) {
    for (const auto& [p, e] : v.entries()) primes.insert(p);
  }
  return {primes.begin(), primes.end()};
}

IntRow to_row(const ExponentVector& v, const std::vector<std::uint64_t>& cols) {
  IntRow row(cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) row[j] = static_cast<long>(v[cols[j]]);
  return row;
}

void make_primitive(IntRow& row) {
  mpz_class g = 0;
  for (const auto& x : row) g = gcd(g, x);
  if (g > 1) {
    for (auto& x : row) x /= g;
  }
}

}  // namespace

QSpan qrank(std::span<const ExponentVector> vectors) {
  const auto cols = support(vectors);
  std::vector<IntRow> rows;
  rows.reserve(vectors.size());
  for (const auto& v : vectors) rows.push_back(to_row(v, cols));

  // Fraction-free elimination; rows are kept primitive to bound growth.
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols.size() && rank < rows.size(); ++col) {
    std::size_t pivot = rows.size();
    for (std::size_t i = rank; i < rows.size(); ++i) {
      if (rows[i][col] != 0 &&
          (pivot == rows.size() || abs(rows[i][col]) < abs(rows[pivot][col]))) {
        pivot = i;
      }
    }
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    if (rows[rank][col] < 0) {
      for (auto& x : rows[rank]) x = -x;
    }
    make_primitive(rows[rank]);
    const mpz_class lead = rows[rank][col];
    for (std::size_t i = rank + 1; i < rows.size(); ++i) {
      if (rows[i][col] == 0) continue;
      const mpz_class factor_i = rows[i][col];
      for (std::size_t j = col; j < cols.size(); ++j) {
        rows[i][j] = lead * rows[i][j] - factor_i * rows[rank][j];
      }
      make_primitive(rows[i]);
    }
    ++rank;
  }

  QSpan out;
  out.dimension = rank;
  for (std::size_t i = 0; i < rank; ++i) {
    ExponentVector::Entries entries;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (rows[i][j] == 0) continue;
      if (!rows[i][j].fits_slong_p()) throw UnsupportedError("exponent overflow in qrank basis");
      entries[cols[j]] = rows[i][j].get_si();
    }
    out.basis.emplace_back(std::move(entries));
  }
  return out;
}

bool in_span(const ExponentVector& v, const QSpan& span) {
  std::map<std::uint64_t, mpz_class> rest;
  for (const auto& [p, e] : v.entries()) rest[p] = static_cast<long>(e);
  for (const auto& row : span.basis) {
    const auto& [pivot, lead_e] = *row.entries().begin();
    const auto it = rest.find(pivot);
    if (it == rest.end() || it->second == 0) continue;
    const mpz_class coef = it->second;
    const mpz_class lead = static_cast<long>(lead_e);
    for (auto& [p, x] : rest) x *= lead;
    for (const auto& [p, e] : row.entries()) rest[p] -= coef * static_cast<long>(e);
  }
  return std::all_of(rest.begin(), rest.end(), [](const auto& kv) { return kv.second == 0; });
}

// ---------------------------------------------------------------------------
// nonneg_solve: phase-one simplex over Q

std::optional<std::vector<Rational>> nonneg_solve(const ExponentVector& target,
                                                  std::span<const ExponentVector> gens) {
  if (gens.empty()) throw DomainError("nonneg_solve requires at least one generator");
  std::vector<ExponentVector> all(gens.begin(), gens.end());
  all.push_back(target);
  const auto primes = support(all);
  const bool homogeneous = target.empty();

  const std::size_t n = gens.size();
  const std::size_t m = primes.size() + (homogeneous ? 1 : 0);
  // Tableau: n structural columns, m artificial columns, rhs last.
  const std::size_t width = n + m + 1;
  std::vector<std::vector<mpq_class>> t(m, std::vector<mpq_class>(width));
  for (std::size_t i = 0; i < primes.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = static_cast<long>(gens[j][primes[i]]);
    t[i][width - 1] = static_cast<long>(target[primes[i]]);
  }
  if (homogeneous) {
    for (std::size_t j = 0; j < n; ++j) t[m - 1][j] = 1;
    t[m - 1][width - 1] = 1;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (t[i][width - 1] < 0) {
      for (auto& x : t[i]) x = -x;
    }
    t[i][n + i] = 1;
  }
  std::vector<std::size_t> basis(m);
  std::iota(basis.begin(), basis.end(), n);

  // Objective row: maximize -(sum of artificials), expressed in nonbasic terms.
  std::vector<mpq_class> obj(width);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) obj[j] += t[i][j];
    obj[width - 1] += t[i][width - 1];
  }

  while (obj[width - 1] > 0) {
    std::size_t enter = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (obj[j] > 0) {
        enter = j;
        break;
      }
    }
    if (enter == n) break;
    std::size_t leave = m;
    mpq_class best;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      mpq_class ratio = t[i][width - 1] / t[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) break;  // unbounded direction; cannot happen in phase one
    const mpq_class piv = t[leave][enter];
    for (auto& x : t[leave]) x /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      const mpq_class f = t[i][enter];
      for (std::size_t j = 0; j < width; ++j) t[i][j] -= f * t[leave][j];
    }
    const mpq_class f = obj[enter];
    for (std::size_t j = 0; j < width; ++j) obj[j] -= f * t[leave][j];
    basis[leave] = enter;
  }
  if (obj[width - 1] != 0) return std::nullopt;

  std::vector<mpq_class> x(n);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) x[basis[i]] = t[i][width - 1];
  }
  if (homogeneous) {
    // Any positive multiple solves the homogeneous system; report the primitive integer one.
    mpz_class l = 1;
    for (const auto& xi : x) l = lcm(l, xi.get_den());
    mpz_class g = 0;
    for (auto& xi : x) {
      xi *= l;
      g = gcd(g, xi.get_num());
    }
    for (auto& xi : x) xi /= g;
  }
  std::vector<Rational> out;
  out.reserve(n);
  for (auto& xi : x) out.emplace_back(xi);
  return out;
}

// ---------------------------------------------------------------------------
// nonneg_integer_solve

namespace {

struct DenseProblem {
  std::vector<std::uint64_t> primes;
  std::vector<std::vector<std::int64_t>> gens;  // dense over primes
  std::vector<double> log_size;                 // -log(gen)
  std::vector<std::size_t> original_index;
  std::vector<std::int64_t> target;
  double target_log = 0.0;  // -log(target)
};

std::vector<std::int64_t> dense(const ExponentVector& v, const std::vector<std::uint64_t>& primes) {
  std::vector<std::int64_t> out(primes.size());
  for (std::size_t j = 0; j < primes.size(); ++j) out[j] = v[primes[j]];
  return out;
}

bool is_zero(const std::vector<std::int64_t>& v) {
  return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
}

// Exponent m with rest == m * gen, m >= 0, or -1.
std::int64_t exact_multiple(const std::vector<std::int64_t>& rest,
                            const std::vector<std::int64_t>& gen) {
  std::int64_t m = -1;
  for (std::size_t j = 0; j < gen.size(); ++j) {
    if (gen[j] == 0) {
      if (rest[j] != 0) return -1;
      continue;
    }
    if (rest[j] % gen[j] != 0) return -1;
    const std::int64_t q = rest[j] / gen[j];
    if (q < 0 || (m >= 0 && q != m)) return -1;
    m = q;
  }
  return m < 0 ? 0 : m;
}

class DecreasingSearch {
 public:
  DecreasingSearch(const DenseProblem& prob, std::size_t budget) : prob_(prob), budget_(budget) {
    const std::size_t k = prob.gens.size();
    // suffix_support[i][j]: some generator at index >= i touches prime j.
    suffix_support_.assign(k + 1, std::vector<bool>(prob.primes.size(), false));
    for (std::size_t i = k; i-- > 0;) {
      suffix_support_[i] = suffix_support_[i + 1];
      for (std::size_t j = 0; j < prob.primes.size(); ++j) {
        if (prob.gens[i][j] != 0) suffix_support_[i][j] = true;
      }
    }
    exps_.assign(k, 0);
  }

  SearchOutcome run() {
    if (prob_.gens.empty()) return is_zero(prob_.target) ? SearchOutcome::found : SearchOutcome::exhausted;
    auto rest = prob_.target;
    const bool ok = dfs(0, rest, prob_.target_log);
    if (ok) return SearchOutcome::found;
    return over_budget_ ? SearchOutcome::budget_exceeded : SearchOutcome::exhausted;
  }

  const std::vector<std::int64_t>& exponents() const { return exps_; }

 private:
  bool dfs(std::size_t i, std::vector<std::int64_t>& rest, double remaining) {
    if (++nodes_ > budget_) {
      over_budget_ = true;
      return false;
    }
    for (std::size_t j = 0; j < rest.size(); ++j) {
      if (rest[j] != 0 && !suffix_support_[i][j]) return false;
    }
    const std::size_t k = prob_.gens.size();
    if (i + 1 == k) {
      const std::int64_t m = exact_multiple(rest, prob_.gens[i]);
      if (m < 0) return false;
      exps_[i] = m;
      return true;
    }
    const auto& gen = prob_.gens[i];
    std::int64_t m = 0;
    while (remaining > -1e-9) {
      exps_[i] = m;
      if (dfs(i + 1, rest, remaining)) return true;
      if (over_budget_) return false;
      for (std::size_t j = 0; j < rest.size(); ++j) rest[j] -= gen[j];
      remaining -= prob_.log_size[i];
      ++m;
    }
    for (std::size_t j = 0; j < rest.size(); ++j) rest[j] += m * gen[j];
    exps_[i] = 0;
    return false;
  }

  const DenseProblem& prob_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  bool over_budget_ = false;
  std::vector<std::vector<bool>> suffix_support_;
  std::vector<std::int64_t> exps_;
};

// Degree-by-degree search for mixed generators (some > 1); never definitive.
class BoundedSearch {
 public:
  BoundedSearch(const DenseProblem& prob, std::size_t budget) : prob_(prob), budget_(budget) {
    exps_.assign(prob.gens.size(), 0);
  }

  SearchOutcome run() {
    for (std::int64_t degree = 0;; ++degree) {
      auto rest = prob_.target;
      if (dfs(0, degree, rest)) return SearchOutcome::found;
      if (over_budget_) return SearchOutcome::budget_exceeded;
    }
  }

  const std::vector<std::int64_t>& exponents() const { return exps_; }

 private:
  bool dfs(std::size_t i, std::int64_t left, std::vector<std::int64_t>& rest) {
    if (++nodes_ > budget_) {
      over_budget_ = true;
      return false;
    }
    if (i + 1 == prob_.gens.size()) {
      for (std::size_t j = 0; j < rest.size(); ++j) {
        if (rest[j] != left * prob_.gens[i][j]) return false;
      }
      exps_[i] = left;
      return true;
    }
    for (std::int64_t m = 0; m <= left; ++m) {
      exps_[i] = m;
      if (dfs(i + 1, left - m, rest)) return true;
      if (over_budget_) return false;
      for (std::size_t j = 0; j < rest.size(); ++j) rest[j] -= prob_.gens[i][j];
    }
    for (std::size_t j = 0; j < rest.size(); ++j) rest[j] += (left + 1) * prob_.gens[i][j];
    exps_[i] = 0;
    return false;
  }

  const DenseProblem& prob_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  bool over_budget_ = false;
  std::vector<std::int64_t> exps_;
};

}  // namespace

IntegerSolveResult nonneg_integer_solve(const Rational& target, std::span<const Rational> gens,
                                        std::size_t budget) {
  if (!target.is_positive()) throw DomainError("integer cone search requires a positive target");
  IntegerSolveResult result;
  result.exponents.assign(gens.size(), 0);
  if (target == Rational(1)) {
    result.outcome = SearchOutcome::found;
    return result;
  }

  std::vector<ExponentVector> vecs;
  for (const auto& g : gens) vecs.push_back(factor(g));
  const ExponentVector tv = factor(target);
  std::vector<ExponentVector> all = vecs;
  all.push_back(tv);

  DenseProblem prob;
  prob.primes = support(all);
  prob.target = dense(tv, prob.primes);
  prob.target_log = -std::log(target.to_double());
  bool all_below_one = true;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (gens[i] == Rational(1)) continue;  // contributes nothing
    if (gens[i] > Rational(1)) all_below_one = false;
    prob.original_index.push_back(i);
    prob.gens.push_back(dense(vecs[i], prob.primes));
    prob.log_size.push_back(-std::log(gens[i].to_double()));
  }

  if (prob.gens.empty()) {
    result.outcome = SearchOutcome::exhausted;
    return result;
  }

  auto finish = [&](SearchOutcome outcome, const std::vector<std::int64_t>& exps) {
    result.outcome = outcome;
    if (outcome == SearchOutcome::found) {
      for (std::size_t i = 0; i < exps.size(); ++i) result.exponents[prob.original_index[i]] = exps[i];
    }
    return result;
  };

  const bool all_above_one =
      std::all_of(prob.log_size.begin(), prob.log_size.end(), [](double l) { return l < 0; });
  if (all_below_one) {
    if (target > Rational(1)) return finish(SearchOutcome::exhausted, {});
    // Put the smallest step last: it is solved in closed form.
    std::vector<std::size_t> order(prob.gens.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return prob.log_size[a] > prob.log_size[b]; });
    DenseProblem sorted = prob;
    for (std::size_t i = 0; i < order.size(); ++i) {
      sorted.gens[i] = prob.gens[order[i]];
      sorted.log_size[i] = prob.log_size[order[i]];
      sorted.original_index[i] = prob.original_index[order[i]];
    }
    DecreasingSearch search(sorted, budget);
    const auto outcome = search.run();
    prob.original_index = sorted.original_index;
    return finish(outcome, search.exponents());
  }
  if (all_above_one) {
    if (target < Rational(1)) return finish(SearchOutcome::exhausted, {});
    DenseProblem flipped = prob;
    for (auto& g : flipped.gens) {
      for (auto& e : g) e = -e;
    }
    for (auto& l : flipped.log_size) l = -l;
    for (auto& e : flipped.target) e = -e;
    flipped.target_log = -flipped.target_log;
    DecreasingSearch search(flipped, budget);
    return finish(search.run(), search.exponents());
  }
  BoundedSearch search(prob, budget);
  return finish(search.run(), search.exponents());
}

}  // namespace ifsgap::exactnum
