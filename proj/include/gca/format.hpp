#pragma once

// Text renderings of counter values. Every rendering parses back to an equal
// value under the same counter spec.
//
//   integer     -3
//   real-sqrt   3√2 - 2√3      (0 for the zero vector)
//   matrix      [[4,3,0],[-3,4,0],[0,0,5]]   entries are p/q or integers

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "gca/arith.hpp"
#include "gca/common.hpp"
#include "gca/counter.hpp"

namespace gca {

inline constexpr std::string_view kSqrtSign = "√";

inline std::string render_real(const std::vector<std::uint64_t>& primes, const Coeffs& coeffs) {
  std::string out;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const BigInt& c = coeffs[i];
    if (c == 0) continue;
    if (out.empty())
      out += c < 0 ? "-" : "";
    else
      out += c < 0 ? " - " : " + ";
    BigInt mag = boost::multiprecision::abs(c);
    if (mag != 1) out += mag.str();
    out += kSqrtSign;
    out += std::to_string(primes.at(i));
  }
  return out.empty() ? "0" : out;
}

inline std::string render_matrix(const RationalMatrix& m) {
  std::string out = "[";
  for (std::size_t i = 0; i < m.dimension(); ++i) {
    if (i) out += ',';
    out += '[';
    for (std::size_t j = 0; j < m.dimension(); ++j) {
      if (j) out += ',';
      out += format_rational(m.at(i, j));
    }
    out += ']';
  }
  return out + "]";
}

inline std::string render(const CounterSpec& spec, const CounterValue& value) {
  switch (value.kind()) {
    case CounterKind::integer: return value.as<BigInt>().str();
    case CounterKind::real_sqrt: return render_real(spec.as<RealSqrtSpec>().primes(), value.as<Coeffs>());
    default: return render_matrix(value.as<RationalMatrix>());
  }
}

namespace detail {

inline std::string strip_spaces(std::string_view text) {
  std::string out;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

}  // namespace detail

/// Parses "[[a,b],[c,d]]". Throws ParseError.
inline RationalMatrix parse_matrix(std::string_view text) {
  const std::string s = detail::strip_spaces(text);
  if (s.size() < 4 || s.substr(0, 2) != "[[" || s.substr(s.size() - 2) != "]]")
    throw ParseError(0, "matrix must look like [[a,b],[c,d]]");
  std::vector<std::vector<Rational>> rows;
  std::string_view body = std::string_view(s).substr(2, s.size() - 4);
  for (;;) {
    auto close = body.find(']');
    std::string_view row = body.substr(0, close);
    std::vector<Rational> entries;
    for (;;) {
      auto comma = row.find(',');
      entries.push_back(parse_rational(row.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      row.remove_prefix(comma + 1);
    }
    rows.push_back(std::move(entries));
    if (close == std::string_view::npos) break;
    body.remove_prefix(close);
    if (body.substr(0, 3) != "],[") throw ParseError(0, "rows must be separated by '],['");
    body.remove_prefix(3);
  }
  try {
    return RationalMatrix::from_rows(rows);
  } catch (const SpecError& e) {
    throw ParseError(0, e.what());
  }
}

/// Parses "3√2 - √3" over the given basis. Repeated terms accumulate.
inline Coeffs parse_real(const std::vector<std::uint64_t>& primes, std::string_view text) {
  const std::string s = detail::strip_spaces(text);
  Coeffs out(primes.size(), BigInt(0));
  if (s == "0") return out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    bool negative = false;
    if (s[pos] == '+' || s[pos] == '-') {
      negative = s[pos] == '-';
      ++pos;
    } else if (pos != 0) {
      throw ParseError(0, "expected '+' or '-' between terms in '" + s + "'");
    }
    std::size_t digits = pos;
    while (digits < s.size() && std::isdigit(static_cast<unsigned char>(s[digits]))) ++digits;
    BigInt coeff = digits == pos ? BigInt(1) : BigInt(s.substr(pos, digits - pos));
    if (s.compare(digits, kSqrtSign.size(), kSqrtSign) != 0)
      throw ParseError(0, "expected a √p term in '" + s + "'");
    pos = digits + kSqrtSign.size();
    std::size_t end = pos;
    while (end < s.size() && std::isdigit(static_cast<unsigned char>(s[end]))) ++end;
    if (end == pos) throw ParseError(0, "missing prime after √ in '" + s + "'");
    const std::uint64_t p = std::stoull(s.substr(pos, end - pos));
    std::size_t index = 0;
    while (index < primes.size() && primes[index] != p) ++index;
    if (index == primes.size()) throw ParseError(0, "√" + std::to_string(p) + " is not in the basis");
    out[index] += negative ? BigInt(-coeff) : coeff;
    pos = end;
  }
  return out;
}

inline CounterValue parse_value(const CounterSpec& spec, std::string_view text) {
  switch (spec.kind()) {
    case CounterKind::integer: return CounterValue(parse_integer(detail::strip_spaces(text)));
    case CounterKind::real_sqrt: return CounterValue(parse_real(spec.as<RealSqrtSpec>().primes(), text));
    default: {
      RationalMatrix m = parse_matrix(text);
      if (m.dimension() != spec.dimension()) throw ParseError(0, "matrix has the wrong dimension");
      return CounterValue(std::move(m));
    }
  }
}

}  // namespace gca
