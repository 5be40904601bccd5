#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ifsgap/rational.hpp"

namespace ifsgap::exactnum {

inline constexpr std::uint64_t kDefaultPrimeBound = 1'000'000;

/// Signed prime-exponent vector: the positive rational prod p^e_p.
/// Zero exponents are never stored, so the empty vector encodes 1.
class ExponentVector {
 public:
  using Entries = std::map<std::uint64_t, std::int64_t>;

  ExponentVector() = default;
  explicit ExponentVector(Entries entries);

  const Entries& entries() const noexcept { return entries_; }
  std::int64_t operator[](std::uint64_t prime) const;
  bool empty() const noexcept { return entries_.empty(); }

  ExponentVector& operator+=(const ExponentVector& other);
  ExponentVector& operator-=(const ExponentVector& other);
  friend ExponentVector operator+(ExponentVector a, const ExponentVector& b) { return a += b; }
  friend ExponentVector operator-(ExponentVector a, const ExponentVector& b) { return a -= b; }
  ExponentVector scaled(std::int64_t factor) const;

  friend bool operator==(const ExponentVector&, const ExponentVector&) = default;
  friend auto operator<=>(const ExponentVector&, const ExponentVector&) = default;

  std::string str() const;

 private:
  void set(std::uint64_t prime, std::int64_t exponent);

  Entries entries_;
};

/// Factors x > 0 by trial division with primes up to prime_bound. A cofactor with no
/// prime factor <= prime_bound is accepted when it is below prime_bound^2 (hence prime);
/// otherwise UnsupportedError. Nonpositive x throws DomainError.
ExponentVector factor(const Rational& x, std::uint64_t prime_bound = kDefaultPrimeBound);

Rational compose(const ExponentVector& v);

/// Row space over Q of a set of exponent vectors.
struct QSpan {
  /// Echelon form: primitive integer rows, strictly increasing pivot primes,
  /// positive pivot entries.
  std::vector<ExponentVector> basis;
  std::size_t dimension = 0;
};

QSpan qrank(std::span<const ExponentVector> vectors);
bool in_span(const ExponentVector& v, const QSpan& span);

/// Finds coefficients m_i >= 0, not all zero, with sum m_i * gens_i == target.
/// Exact two-phase simplex (Bland's rule) over Q. For target == 0 the solution is
/// scaled to the smallest integer vector. Returns nullopt when infeasible.
std::optional<std::vector<Rational>> nonneg_solve(const ExponentVector& target,
                                                  std::span<const ExponentVector> gens);

/// Outcome of a bounded search for a nonnegative *integer* solution.
enum class SearchOutcome { found, exhausted, budget_exceeded };

struct IntegerSolveResult {
  SearchOutcome outcome = SearchOutcome::exhausted;
  std::vector<std::int64_t> exponents;  // valid when outcome == found
};

/// Searches m in Z_{>=0}^n with prod gens_i^m_i == target. Exhaustive (hence a
/// definitive "exhausted") when every generator is < 1 and target <= 1; otherwise the
/// search is bounded by `budget` visited nodes.
IntegerSolveResult nonneg_integer_solve(const Rational& target, std::span<const Rational> gens,
                                        std::size_t budget = 1'000'000);

}  // namespace ifsgap::exactnum
