#pragma once

// Builders for the recognizers shipped with the library and the transform
// from a √prime real counter to a 1x1 rational matrix counter.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gca/automaton.hpp"
#include "gca/counter.hpp"

namespace gca {

/// a_0^n a_1^{l_1 n} ... a_{k-1}^{l_{k-1} n}. Symbols default to 'a', 'b', ...
struct LGenParams {
  std::vector<std::uint64_t> multipliers;  // l_1..l_{k-1}
  std::vector<std::uint64_t> primes;       // p_1..p_{k-1}
  std::string symbols;                     // a_0..a_{k-1}; empty selects "abc..."

  std::size_t k() const noexcept { return multipliers.size() + 1; }

  std::string symbol_string() const {
    if (!symbols.empty()) return symbols;
    std::string out;
    for (std::size_t i = 0; i < k(); ++i) out += static_cast<char>('a' + i);
    return out;
  }

  /// Default primes (the first k-1) and unit multipliers.
  static LGenParams uniform(std::size_t k) {
    LGenParams p;
    for (std::uint64_t candidate = 2; p.primes.size() + 1 < k; ++candidate)
      if (is_prime(candidate)) p.primes.push_back(candidate);
    p.multipliers.assign(k - 1, 1);
    return p;
  }
};

/// Throws SpecError describing the first problem found.
inline void check(const LGenParams& params) {
  if (params.multipliers.empty()) throw SpecError("L_gen needs k >= 2 symbol classes");
  if (params.primes.size() != params.multipliers.size())
    throw SpecError("L_gen needs exactly k-1 primes (got " + std::to_string(params.primes.size()) + " for k=" +
                    std::to_string(params.k()) + ")");
  for (auto l : params.multipliers)
    if (l == 0) throw SpecError("L_gen multipliers must be positive");
  ValidationReport basis = validate(RealSqrtSpec(params.primes, {Coeffs(params.primes.size(), BigInt(1))}));
  if (!basis.ok()) throw SpecError(basis.violations.front());
  const std::string symbols = params.symbol_string();
  if (symbols.size() != params.k()) throw SpecError("L_gen needs exactly k symbols");
  for (std::size_t i = 0; i < symbols.size(); ++i)
    for (std::size_t j = i + 1; j < symbols.size(); ++j)
      if (symbols[i] == symbols[j]) throw SpecError("L_gen symbols must be distinct");
}

/// One-way partially blind recognizer over C_R(k-1). Generator 0 is the
/// composite (l_1, ..., l_{k-1}), applied on every a_0; generator i is the
/// unit vector e_i, removed on every a_i. The finite control enforces the
/// a_0* a_1* ... a_{k-1}* shape.
inline MachineSpec build_lgen(const LGenParams& params) {
  check(params);
  const std::size_t k = params.k();
  const std::string symbols = params.symbol_string();

  std::vector<Coeffs> generators;
  Coeffs composite;
  for (auto l : params.multipliers) composite.emplace_back(l);
  generators.push_back(std::move(composite));
  for (std::size_t i = 1; i < k; ++i) {
    Coeffs unit(k - 1, BigInt(0));
    unit[i - 1] = 1;
    generators.push_back(std::move(unit));
  }

  MachineSpec m;
  m.name = "lgen";
  m.alphabet = symbols;
  m.head_mode = HeadMode::one_way;
  m.visibility = Visibility::partially_blind;
  m.counter = CounterSpec(RealSqrtSpec(params.primes, std::move(generators)));

  const std::size_t start = m.add_state("start");
  std::vector<std::size_t> phase;
  for (std::size_t i = 0; i < k; ++i) phase.push_back(m.add_state("p" + std::to_string(i)));
  const std::size_t accept = m.add_state("accept", true);
  m.start = start;

  m.on(start, kLeftEnd, std::nullopt, {phase[0], +1, CounterOp::noop()});
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      const CounterOp op = j == 0 ? CounterOp::increment(0) : CounterOp::decrement(j);
      m.on(phase[i], symbols[j], std::nullopt, {phase[j], +1, op});
    }
    m.on(phase[i], kRightEnd, std::nullopt, {accept, 0, CounterOp::noop()});
  }
  return m;
}

/// The two 3x3 integer matrices whose words separate equal-length strings.
struct AWMatrices {
  RationalMatrix a;
  RationalMatrix b;

  static AWMatrices standard() {
    auto m = [](std::vector<std::vector<long long>> rows) {
      std::vector<std::vector<Rational>> q;
      for (const auto& r : rows) q.emplace_back(r.begin(), r.end());
      return RationalMatrix::from_rows(q);
    };
    return {m({{4, 3, 0}, {-3, 4, 0}, {0, 0, 5}}), m({{4, 0, 3}, {0, 5, 0}, {-3, 0, 4}})};
  }
};

inline CounterSpec aw_counter() {
  AWMatrices aw = AWMatrices::standard();
  return CounterSpec(MatrixSpec(3, {aw.a, aw.b}));
}

/// Two-way, status-visible recognizer for x_0#x_1#...#x_k# (k >= 1) with
/// x_i = x_0 for some i >= 1. '0' applies A, '1' applies B.
///
///   first   scan x_0 left to right, incrementing
///   seek    walk right to the '#' closing the current block (no counter ops)
///   back    scan the block right to left, decrementing; at its left delimiter
///           an identity counter means a match, otherwise turn around
///   undo    scan the block left to right, incrementing, then seek the next one
///   closed  after a match, walk to $ checking that the input ends with '#'
///   open    as closed, after a '0' or '1'
///   reject  entered when seek reaches $ or the input does not end with '#'
inline MachineSpec build_lpat() {
  MachineSpec m;
  m.name = "lpat";
  m.alphabet = "01#";
  m.head_mode = HeadMode::two_way;
  m.visibility = Visibility::deterministic;
  m.counter = aw_counter();

  const std::size_t start = m.add_state("start");
  const std::size_t first = m.add_state("first");
  const std::size_t seek = m.add_state("seek");
  const std::size_t back = m.add_state("back");
  const std::size_t undo = m.add_state("undo");
  const std::size_t closed = m.add_state("closed");
  const std::size_t open = m.add_state("open");
  const std::size_t accept = m.add_state("accept", true);
  const std::size_t reject = m.add_state("reject");
  m.start = start;

  const auto both = std::nullopt;
  m.on(start, kLeftEnd, both, {first, +1, CounterOp::noop()});

  m.on(first, '0', both, {first, +1, CounterOp::increment(0)});
  m.on(first, '1', both, {first, +1, CounterOp::increment(1)});
  m.on(first, '#', both, {seek, +1, CounterOp::noop()});
  m.on(first, kRightEnd, both, {reject, 0, CounterOp::noop()});

  m.on(seek, '0', both, {seek, +1, CounterOp::noop()});
  m.on(seek, '1', both, {seek, +1, CounterOp::noop()});
  m.on(seek, '#', both, {back, -1, CounterOp::noop()});
  m.on(seek, kRightEnd, both, {reject, 0, CounterOp::noop()});

  m.on(back, '0', both, {back, -1, CounterOp::decrement(0)});
  m.on(back, '1', both, {back, -1, CounterOp::decrement(1)});
  for (char delimiter : {'#', kLeftEnd}) {
    m.on(back, delimiter, Status::zero, {closed, +1, CounterOp::noop()});
    m.on(back, delimiter, Status::nonzero, {undo, +1, CounterOp::noop()});
  }

  m.on(undo, '0', both, {undo, +1, CounterOp::increment(0)});
  m.on(undo, '1', both, {undo, +1, CounterOp::increment(1)});
  m.on(undo, '#', both, {seek, +1, CounterOp::noop()});

  for (std::size_t tail : {closed, open}) {
    m.on(tail, '0', both, {open, +1, CounterOp::noop()});
    m.on(tail, '1', both, {open, +1, CounterOp::noop()});
    m.on(tail, '#', both, {closed, +1, CounterOp::noop()});
  }
  m.on(closed, kRightEnd, both, {accept, 0, CounterOp::noop()});
  m.on(open, kRightEnd, both, {reject, 0, CounterOp::noop()});
  return m;
}

/// One-way recognizer for x#x^R over {0,1}: A/B before the '#', their
/// inverses after it. With `Visibility::deterministic` the status bit is read
/// only on $; with `Visibility::partially_blind` acceptance relies on the
/// empty-counter condition alone.
inline MachineSpec build_lpal(Visibility visibility = Visibility::deterministic) {
  if (visibility == Visibility::blind) throw SpecError("L_pal machine is built deterministic or partially blind");
  MachineSpec m;
  m.name = "lpal";
  m.alphabet = "01#";
  m.head_mode = HeadMode::one_way;
  m.visibility = visibility;
  m.counter = aw_counter();

  const std::size_t start = m.add_state("start");
  const std::size_t before = m.add_state("before");
  const std::size_t after = m.add_state("after");
  const std::size_t accept = m.add_state("accept", true);
  const std::size_t reject = m.add_state("reject");
  m.start = start;

  const auto both = std::nullopt;
  m.on(start, kLeftEnd, both, {before, +1, CounterOp::noop()});
  m.on(before, '0', both, {before, +1, CounterOp::increment(0)});
  m.on(before, '1', both, {before, +1, CounterOp::increment(1)});
  m.on(before, '#', both, {after, +1, CounterOp::noop()});
  m.on(before, kRightEnd, both, {reject, 0, CounterOp::noop()});
  m.on(after, '0', both, {after, +1, CounterOp::decrement(0)});
  m.on(after, '1', both, {after, +1, CounterOp::decrement(1)});
  m.on(after, '#', both, {reject, 0, CounterOp::noop()});
  if (visibility == Visibility::deterministic) {
    m.on(after, kRightEnd, Status::zero, {accept, 0, CounterOp::noop()});
    m.on(after, kRightEnd, Status::nonzero, {reject, 0, CounterOp::noop()});
  } else {
    m.on(after, kRightEnd, both, {accept, 0, CounterOp::noop()});
  }
  return m;
}

/// [Π p_i^{c_i}] for a coefficient vector over the given primes.
inline RationalMatrix prime_power_matrix(const std::vector<std::uint64_t>& primes, const Coeffs& coeffs) {
  if (primes.size() != coeffs.size()) throw SpecError("coefficient vector length does not match basis size");
  BigInt num = 1;
  BigInt den = 1;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const BigInt& c = coeffs[i];
    if (c == 0) continue;
    if (boost::multiprecision::abs(c) > 4096) throw SpecError("generator exponent too large for the transform");
    const auto e = static_cast<unsigned>(boost::multiprecision::abs(c).convert_to<long long>());
    BigInt power = boost::multiprecision::pow(BigInt(primes[i]), e);
    if (c > 0)
      num *= power;
    else
      den *= power;
  }
  return RationalMatrix::scalar(Rational(num, den));
}

/// Same finite control over GL(1): generator (c_1..c_k) becomes [Π p_i^{c_i}],
/// so the real counter holds 0 exactly when the matrix counter holds [1].
inline MachineSpec real_to_matrix(const MachineSpec& spec) {
  if (spec.counter.kind() != CounterKind::real_sqrt)
    throw SpecError(std::string("transform needs a real-sqrt counter, got ") + to_string(spec.counter.kind()));
  const auto& real = spec.counter.as<RealSqrtSpec>();
  std::vector<RationalMatrix> generators;
  for (const auto& g : real.generators()) generators.push_back(prime_power_matrix(real.primes(), g));
  MachineSpec out = spec;
  out.name = spec.name + "-matrix";
  out.counter = CounterSpec(MatrixSpec(1, std::move(generators)));
  return out;
}

}  // namespace gca
