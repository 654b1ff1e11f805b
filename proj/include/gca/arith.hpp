#pragma once

// Exact arithmetic shared by every counter kind. Integers and rationals have
// arbitrary precision; square rational matrices keep one common denominator.

#include <algorithm>
#include <numeric>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gca/common.hpp"

namespace gca {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

/// "p/q" with q > 0 and gcd(p, q) = 1, or plain "p" when q = 1.
inline std::string format_rational(const Rational& q) {
  BigInt den = denominator_of(q);
  std::string out = numerator_of(q).str();
  if (den != 1) {
    out += '/';
    out += den.str();
  }
  return out;
}

namespace detail {

inline bool is_decimal(std::string_view s, bool allow_sign) {
  if (allow_sign && !s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace detail

/// Parses a decimal integer with an optional sign.
inline BigInt parse_integer(std::string_view text) {
  if (!detail::is_decimal(text, true)) throw ParseError(0, "not an integer: '" + std::string(text) + "'");
  if (text.front() == '+') text.remove_prefix(1);
  return BigInt(std::string(text));
}

/// Parses a signed integer or a fraction p/q with q nonzero. The result is normalized.
inline Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  std::string_view num = text.substr(0, slash);
  std::string_view den = text.substr(slash + 1);
  if (!detail::is_decimal(den, false)) throw ParseError(0, "bad denominator in '" + std::string(text) + "'");
  BigInt d(std::string{den});
  if (d == 0) throw ParseError(0, "zero denominator in '" + std::string(text) + "'");
  return Rational(parse_integer(num), d);
}

/// Square matrix of exact rationals, stored as integer numerators over one
/// positive common denominator. The representation is canonical: the gcd of
/// the denominator and all numerators is 1, so defaulted equality is value
/// equality.
class RationalMatrix {
 public:
  RationalMatrix() = default;

  static RationalMatrix zero(std::size_t n) {
    RationalMatrix m;
    m.n_ = n;
    m.num_.assign(n * n, BigInt(0));
    return m;
  }

  static RationalMatrix identity(std::size_t n) {
    RationalMatrix m = zero(n);
    for (std::size_t i = 0; i < n; ++i) m.num_[i * n + i] = 1;
    return m;
  }

  static RationalMatrix scalar(const Rational& value) {
    return from_rows({{value}});
  }

  /// Throws SpecError unless `rows` is square and non-empty.
  static RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows) {
    const std::size_t n = rows.size();
    if (n == 0) throw SpecError("matrix must have at least one row");
    for (const auto& row : rows)
      if (row.size() != n) throw SpecError("matrix must be square");
    BigInt den = 1;
    for (const auto& row : rows)
      for (const auto& q : row) den = boost::multiprecision::lcm(den, denominator_of(q));
    RationalMatrix m = zero(n);
    m.den_ = den;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        m.num_[i * n + j] = numerator_of(rows[i][j]) * (den / denominator_of(rows[i][j]));
    m.normalize();
    return m;
  }

  /// Integer numerators scaled by 1/denominator. Throws SpecError on a bad shape or zero denominator.
  static RationalMatrix from_scaled(std::size_t n, std::vector<BigInt> numerators, BigInt denominator) {
    if (numerators.size() != n * n) throw SpecError("matrix entry count does not match dimension");
    if (denominator == 0) throw SpecError("zero denominator");
    RationalMatrix m;
    m.n_ = n;
    m.num_ = std::move(numerators);
    m.den_ = std::move(denominator);
    if (m.den_ < 0) {
      m.den_ = -m.den_;
      for (auto& x : m.num_) x = -x;
    }
    m.normalize();
    return m;
  }

  std::size_t dimension() const noexcept { return n_; }
  const BigInt& scaled_entry(std::size_t i, std::size_t j) const { return num_[i * n_ + j]; }
  const BigInt& denominator() const noexcept { return den_; }

  Rational at(std::size_t i, std::size_t j) const { return Rational(num_[i * n_ + j], den_); }

  std::vector<std::vector<Rational>> rows() const {
    std::vector<std::vector<Rational>> out(n_, std::vector<Rational>(n_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) out[i][j] = at(i, j);
    return out;
  }

  bool is_identity() const {
    if (den_ != 1) return false;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (num_[i * n_ + j] != (i == j ? 1 : 0)) return false;
    return true;
  }

  /// Sum of squared entries, exact.
  Rational frobenius_norm_sq() const {
    BigInt sum = 0;
    for (const auto& x : num_) sum += x * x;
    return Rational(sum, den_ * den_);
  }

  /// Compares the squared Frobenius norm against 1 without building a rational.
  bool frobenius_norm_below_one() const {
    BigInt sum = 0;
    for (const auto& x : num_) sum += x * x;
    return sum < den_ * den_;
  }

  Rational determinant() const {
    if (n_ == 0) return Rational(1);
    // Fraction-free Bareiss elimination on the numerators.
    std::vector<BigInt> a = num_;
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n_; ++k) {
      if (a[k * n_ + k] == 0) {
        std::size_t p = k + 1;
        while (p < n_ && a[p * n_ + k] == 0) ++p;
        if (p == n_) return Rational(0);
        for (std::size_t j = 0; j < n_; ++j) std::swap(a[k * n_ + j], a[p * n_ + j]);
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n_; ++i) {
        for (std::size_t j = k + 1; j < n_; ++j)
          a[i * n_ + j] = (a[i * n_ + j] * a[k * n_ + k] - a[i * n_ + k] * a[k * n_ + j]) / prev;
      }
      prev = a[k * n_ + k];
    }
    BigInt den_pow = boost::multiprecision::pow(den_, static_cast<unsigned>(n_));
    return Rational(sign * a[n_ * n_ - 1], den_pow);
  }

  /// Exact inverse by Gauss-Jordan elimination; nullopt when singular.
  std::optional<RationalMatrix> inverse() const {
    std::vector<std::vector<Rational>> a = rows();
    std::vector<std::vector<Rational>> inv = identity(n_).rows();
    for (std::size_t col = 0; col < n_; ++col) {
      std::size_t pivot = col;
      while (pivot < n_ && a[pivot][col] == 0) ++pivot;
      if (pivot == n_) return std::nullopt;
      std::swap(a[pivot], a[col]);
      std::swap(inv[pivot], inv[col]);
      const Rational scale = a[col][col];
      for (std::size_t j = 0; j < n_; ++j) {
        a[col][j] /= scale;
        inv[col][j] /= scale;
      }
      for (std::size_t i = 0; i < n_; ++i) {
        if (i == col || a[i][col] == 0) continue;
        const Rational factor = a[i][col];
        for (std::size_t j = 0; j < n_; ++j) {
          a[i][j] -= factor * a[col][j];
          inv[i][j] -= factor * inv[col][j];
        }
      }
    }
    return from_rows(inv);
  }

  friend RationalMatrix operator*(const RationalMatrix& lhs, const RationalMatrix& rhs) {
    if (lhs.n_ != rhs.n_) throw SpecError("matrix dimension mismatch");
    const std::size_t n = lhs.n_;
    RationalMatrix out;
    out.n_ = n;
    out.num_.resize(n * n);
    if (small_product(lhs, rhs, out)) return out;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        BigInt sum = 0;
        for (std::size_t k = 0; k < n; ++k) sum += lhs.num_[i * n + k] * rhs.num_[k * n + j];
        out.num_[i * n + j] = std::move(sum);
      }
    }
    out.den_ = lhs.den_ * rhs.den_;
    out.normalize();
    return out;
  }

  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  static constexpr unsigned kSmallBits = 30;
  static constexpr std::size_t kSmallDimension = 4;

  static bool fits_small(const BigInt& x) {
    return x == 0 || boost::multiprecision::msb(boost::multiprecision::abs(x)) < kSmallBits;
  }

  // Machine-word product when every operand is below 2^30 and n <= 4, so
  // every partial sum stays below 2^63.
  static bool small_product(const RationalMatrix& lhs, const RationalMatrix& rhs, RationalMatrix& out) {
    const std::size_t n = lhs.n_;
    if (n > kSmallDimension || !fits_small(lhs.den_) || !fits_small(rhs.den_)) return false;
    std::int64_t a[kSmallDimension * kSmallDimension];
    std::int64_t b[kSmallDimension * kSmallDimension];
    for (std::size_t i = 0; i < n * n; ++i) {
      if (!fits_small(lhs.num_[i]) || !fits_small(rhs.num_[i])) return false;
      a[i] = lhs.num_[i].convert_to<std::int64_t>();
      b[i] = rhs.num_[i].convert_to<std::int64_t>();
    }
    std::int64_t den = lhs.den_.convert_to<std::int64_t>() * rhs.den_.convert_to<std::int64_t>();
    std::int64_t c[kSmallDimension * kSmallDimension];
    std::int64_t g = den;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        std::int64_t sum = 0;
        for (std::size_t k = 0; k < n; ++k) sum += a[i * n + k] * b[k * n + j];
        c[i * n + j] = sum;
        g = std::gcd(g, sum);
      }
    }
    for (std::size_t i = 0; i < n * n; ++i) out.num_[i] = c[i] / g;
    out.den_ = den / g;
    return true;
  }

  void normalize() {
    if (den_ == 1) return;
    BigInt g = den_;
    for (const auto& x : num_) {
      if (g == 1) break;
      if (x != 0) g = boost::multiprecision::gcd(g, x);
    }
    if (g == 1) return;
    for (auto& x : num_) x /= g;
    den_ /= g;
  }

  std::size_t n_ = 0;
  std::vector<BigInt> num_;
  BigInt den_ = 1;
};

}  // namespace gca
