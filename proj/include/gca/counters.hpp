#pragma once

// Concrete counter instantiations:
//   integer    (Z, positive integer generators, negatives)
//   real-sqrt  (R over integer combinations of square roots of distinct primes, negatives)
//   matrix     (GL(m) over exact rationals, Frobenius norm < 1)

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gca/arith.hpp"
#include "gca/common.hpp"

namespace gca {

/// Integer coefficient vector over a √prime basis.
using Coeffs = std::vector<BigInt>;

enum class Sign { negative, zero, positive };

inline Sign negate(Sign s) {
  switch (s) {
    case Sign::negative: return Sign::positive;
    case Sign::positive: return Sign::negative;
    default: return Sign::zero;
  }
}

inline const char* to_string(Sign s) {
  switch (s) {
    case Sign::negative: return "negative";
    case Sign::zero: return "zero";
    default: return "positive";
  }
}

/// Trial division; basis sizes are tiny.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d <= n / d; d += 2)
    if (n % d == 0) return false;
  return true;
}

/// Largest s with s*s <= n, found by bisection on the square.
inline BigInt sqrt_floor(const BigInt& n) {
  if (n < 0) throw SpecError("square root of a negative number");
  if (n < 2) return n;
  BigInt lo = 0;
  BigInt hi = BigInt(1) << (boost::multiprecision::msb(n) / 2 + 1);  // hi*hi > n
  while (hi - lo > 1) {
    BigInt mid = (lo + hi) >> 1;
    if (mid * mid <= n)
      lo = std::move(mid);
    else
      hi = std::move(mid);
  }
  return lo;
}

namespace detail {

inline constexpr unsigned kInitialSignBits = 64;

/// floor(√p · 2^bits) for every p, so each √p lies in [e, e+1] / 2^bits.
inline std::vector<BigInt> sqrt_enclosures(std::span<const std::uint64_t> primes, unsigned bits) {
  std::vector<BigInt> out;
  out.reserve(primes.size());
  for (auto p : primes) out.push_back(sqrt_floor(BigInt(p) << (2 * bits)));
  return out;
}

// Interval bound on 2^bits · Σ c_i √p_i from the enclosures.
inline Sign sign_at(std::span<const BigInt> coeffs, const std::vector<BigInt>& enclosures) {
  BigInt lower = 0;
  BigInt upper = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const BigInt& c = coeffs[i];
    if (c == 0) continue;
    BigInt at_floor = c * enclosures[i];
    if (c > 0) {
      upper += at_floor + c;
      lower += at_floor;
    } else {
      lower += at_floor + c;
      upper += at_floor;
    }
  }
  if (lower > 0) return Sign::positive;
  if (upper < 0) return Sign::negative;
  return Sign::zero;  // undecided at this precision
}

inline bool is_valid_basis(std::span<const std::uint64_t> primes) {
  std::set<std::uint64_t> seen;
  for (auto p : primes)
    if (!is_prime(p) || !seen.insert(p).second) return false;
  return true;
}

inline Sign real_sign_impl(std::span<const std::uint64_t> primes, std::span<const BigInt> coeffs,
                           const std::vector<BigInt>* initial_enclosures, bool basis_ok) {
  if (primes.size() != coeffs.size()) throw SpecError("coefficient vector length does not match basis size");
  bool any_pos = false;
  bool any_neg = false;
  for (const auto& c : coeffs) {
    any_pos = any_pos || c > 0;
    any_neg = any_neg || c < 0;
  }
  if (!any_pos && !any_neg) return Sign::zero;
  if (!any_neg) return Sign::positive;
  if (!any_pos) return Sign::negative;
  if (!basis_ok) throw SpecError("sign determination needs a basis of distinct primes");
  // Mixed signs: refine until the enclosure excludes 0. Termination follows
  // from rational independence of √p over distinct primes.
  unsigned bits = kInitialSignBits;
  if (initial_enclosures != nullptr) {
    Sign s = sign_at(coeffs, *initial_enclosures);
    if (s != Sign::zero) return s;
    bits *= 2;
  }
  for (;; bits *= 2) {
    Sign s = sign_at(coeffs, sqrt_enclosures(primes, bits));
    if (s != Sign::zero) return s;
  }
}

}  // namespace detail

/// Exact sign of Σ coeffs[i]·√primes[i]. Primes must be pairwise distinct primes.
inline Sign real_sign(std::span<const std::uint64_t> primes, std::span<const BigInt> coeffs) {
  return detail::real_sign_impl(primes, coeffs, nullptr, detail::is_valid_basis(primes));
}

/// C_R(k): basis √p_1..√p_k and a list of generators, each an integer
/// coefficient vector over the basis.
class RealSqrtSpec {
 public:
  RealSqrtSpec() = default;
  RealSqrtSpec(std::vector<std::uint64_t> primes, std::vector<Coeffs> generators)
      : primes_(std::move(primes)),
        generators_(std::move(generators)),
        enclosures_(detail::sqrt_enclosures(primes_, detail::kInitialSignBits)),
        basis_ok_(detail::is_valid_basis(primes_)) {}

  const std::vector<std::uint64_t>& primes() const noexcept { return primes_; }
  const std::vector<Coeffs>& generators() const noexcept { return generators_; }
  std::size_t basis_size() const noexcept { return primes_.size(); }

  /// Same as real_sign over this basis, reusing the first-round enclosures.
  Sign sign(std::span<const BigInt> coeffs) const {
    return detail::real_sign_impl(primes_, coeffs, &enclosures_, basis_ok_);
  }

  friend bool operator==(const RealSqrtSpec& a, const RealSqrtSpec& b) {
    return a.primes_ == b.primes_ && a.generators_ == b.generators_;
  }

 private:
  std::vector<std::uint64_t> primes_;
  std::vector<Coeffs> generators_;
  std::vector<BigInt> enclosures_;
  bool basis_ok_ = true;
};

inline bool real_is_negative(const RealSqrtSpec& spec, std::span<const BigInt> value) {
  return spec.sign(value) == Sign::negative;
}

/// Conventional counter generalized to any finite set of positive integer steps.
struct IntegerSpec {
  std::vector<BigInt> generators{BigInt(1)};

  friend bool operator==(const IntegerSpec&, const IntegerSpec&) = default;
};

inline bool integer_is_negative(const BigInt& value) { return value < 0; }

inline Rational frobenius_norm_sq(const RationalMatrix& m) { return m.frobenius_norm_sq(); }

/// Throws SpecError on a singular matrix.
inline RationalMatrix matrix_inverse(const RationalMatrix& m) {
  auto inv = m.inverse();
  if (!inv) throw SpecError("matrix is singular");
  return *std::move(inv);
}

/// Matrix counter over GL(m) with exact rational entries; inverses are
/// computed once, at construction.
class MatrixSpec {
 public:
  MatrixSpec() = default;
  MatrixSpec(std::size_t dimension, std::vector<RationalMatrix> generators)
      : dimension_(dimension), generators_(std::move(generators)) {
    inverses_.reserve(generators_.size());
    for (const auto& g : generators_)
      inverses_.push_back(g.dimension() == dimension_ ? g.inverse() : std::nullopt);
  }

  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<RationalMatrix>& generators() const noexcept { return generators_; }

  /// Throws SpecError when generator `index` is singular or misshapen.
  const RationalMatrix& inverse(std::size_t index) const {
    const auto& inv = inverses_.at(index);
    if (!inv) throw SpecError("generator " + std::to_string(index) + " is not invertible");
    return *inv;
  }

  friend bool operator==(const MatrixSpec& a, const MatrixSpec& b) {
    return a.dimension_ == b.dimension_ && a.generators_ == b.generators_;
  }

 private:
  std::size_t dimension_ = 0;
  std::vector<RationalMatrix> generators_;
  std::vector<std::optional<RationalMatrix>> inverses_;
};

/// F₋ for the matrix counter: squared Frobenius norm strictly below 1.
inline bool matrix_is_negative(const MatrixSpec& spec, const RationalMatrix& value) {
  if (value.dimension() != spec.dimension()) throw SpecError("matrix value has the wrong dimension");
  return value.frobenius_norm_below_one();
}

struct ValidateOptions {
  /// Maximum word length for the matrix G⁺ / G_inv⁺ collision search; 0 disables it.
  std::size_t collision_depth = 6;
};

inline ValidationReport validate(const IntegerSpec& spec) {
  ValidationReport report;
  if (spec.generators.empty()) report.violations.push_back("generator list is empty");
  for (std::size_t i = 0; i < spec.generators.size(); ++i)
    if (spec.generators[i] <= 0)
      report.violations.push_back("generator " + std::to_string(i) + " is not a positive integer");
  return report;
}

inline ValidationReport validate(const RealSqrtSpec& spec) {
  ValidationReport report;
  const auto& primes = spec.primes();
  if (primes.empty()) report.violations.push_back("basis is empty");
  std::set<std::uint64_t> seen;
  for (auto p : primes) {
    if (!is_prime(p)) report.violations.push_back(std::to_string(p) + " is not prime");
    if (!seen.insert(p).second) report.violations.push_back("duplicate prime " + std::to_string(p));
  }
  if (spec.generators().empty()) report.violations.push_back("generator list is empty");
  if (!report.ok()) return report;  // signs are only meaningful over a valid basis
  for (std::size_t i = 0; i < spec.generators().size(); ++i) {
    const auto& g = spec.generators()[i];
    const std::string label = "generator " + std::to_string(i);
    if (g.size() != primes.size()) {
      report.violations.push_back(label + " has " + std::to_string(g.size()) + " coefficients, expected " +
                                  std::to_string(primes.size()));
      continue;
    }
    Sign s = spec.sign(g);
    if (s == Sign::zero)
      report.violations.push_back(label + " is the zero vector");
    else if (s == Sign::negative)
      report.violations.push_back(label + " denotes a negative real");
  }
  return report;
}

namespace detail {

inline std::string matrix_key(const RationalMatrix& m) {
  std::string key = m.denominator().str();
  for (std::size_t i = 0; i < m.dimension(); ++i)
    for (std::size_t j = 0; j < m.dimension(); ++j) {
      key += ',';
      key += m.scaled_entry(i, j).str();
    }
  return key;
}

// All products of 1..depth factors drawn from `letters`, keyed canonically.
inline std::set<std::string> bounded_words(const std::vector<RationalMatrix>& letters, std::size_t depth) {
  std::set<std::string> keys;
  std::vector<RationalMatrix> frontier(letters.begin(), letters.end());
  for (std::size_t len = 1; len <= depth && !frontier.empty(); ++len) {
    std::vector<RationalMatrix> next;
    for (const auto& w : frontier) {
      keys.insert(matrix_key(w));
      if (len < depth)
        for (const auto& l : letters) next.push_back(l * w);
    }
    frontier = std::move(next);
  }
  return keys;
}

}  // namespace detail

/// Checks shape and invertibility, then searches nonempty words up to
/// `collision_depth` for an element of G⁺ that is also in G_inv⁺. The search
/// is a diagnostic: finding nothing does not prove disjointness.
inline ValidationReport validate(const MatrixSpec& spec, const ValidateOptions& options = {}) {
  ValidationReport report;
  if (spec.dimension() == 0) report.violations.push_back("dimension must be positive");
  if (spec.generators().empty()) report.violations.push_back("generator list is empty");
  std::vector<RationalMatrix> inverses;
  for (std::size_t i = 0; i < spec.generators().size(); ++i) {
    const auto& g = spec.generators()[i];
    const std::string label = "generator " + std::to_string(i);
    if (g.dimension() != spec.dimension()) {
      report.violations.push_back(label + " is " + std::to_string(g.dimension()) + "x" +
                                  std::to_string(g.dimension()) + ", expected dimension " +
                                  std::to_string(spec.dimension()));
      continue;
    }
    if (g.determinant() == 0) {
      report.violations.push_back(label + " is singular");
      continue;
    }
    inverses.push_back(spec.inverse(i));
  }
  if (!report.ok() || options.collision_depth == 0) return report;

  auto positive = detail::bounded_words(spec.generators(), options.collision_depth);
  auto negative = detail::bounded_words(inverses, options.collision_depth);
  std::size_t collisions = 0;
  for (const auto& key : positive) collisions += negative.count(key);
  if (collisions > 0)
    report.violations.push_back(std::to_string(collisions) +
                                " element(s) lie in both the generated semigroup and its inverse semigroup "
                                "(words up to length " +
                                std::to_string(options.collision_depth) + ")");
  return report;
}

}  // namespace gca
