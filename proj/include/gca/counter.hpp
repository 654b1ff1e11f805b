#pragma once

// The generalized counter contract (U, G, F₋). A generator or its inverse is
// applied as the left operand. The identity and F₋ tests live here too, along
// with tracking of increment/decrement mode switches.

#include <cstddef>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>

#include "gca/arith.hpp"
#include "gca/common.hpp"
#include "gca/counters.hpp"

namespace gca {

enum class CounterKind { integer, real_sqrt, matrix };

inline const char* to_string(CounterKind kind) {
  switch (kind) {
    case CounterKind::integer: return "integer";
    case CounterKind::real_sqrt: return "real-sqrt";
    default: return "matrix";
  }
}

/// One counter instantiation, holding the description of its kind.
class CounterSpec {
 public:
  using Payload = std::variant<IntegerSpec, RealSqrtSpec, MatrixSpec>;

  CounterSpec() = default;
  CounterSpec(IntegerSpec spec) : payload_(std::move(spec)) {}
  CounterSpec(RealSqrtSpec spec) : payload_(std::move(spec)) {}
  CounterSpec(MatrixSpec spec) : payload_(std::move(spec)) {}

  CounterKind kind() const noexcept { return static_cast<CounterKind>(payload_.index()); }
  const Payload& payload() const noexcept { return payload_; }

  template <typename T>
  const T& as() const {
    if (const T* p = std::get_if<T>(&payload_)) return *p;
    throw SpecError("counter is of kind " + std::string(to_string(kind())));
  }

  std::size_t generator_count() const;

  /// Matrix dimension; 0 for the scalar kinds.
  std::size_t dimension() const {
    if (const auto* m = std::get_if<MatrixSpec>(&payload_)) return m->dimension();
    return 0;
  }

  friend bool operator==(const CounterSpec&, const CounterSpec&) = default;

 private:
  Payload payload_;
};

/// An element of the counter's group.
class CounterValue {
 public:
  using Payload = std::variant<BigInt, Coeffs, RationalMatrix>;

  CounterValue() = default;
  CounterValue(BigInt value) : payload_(std::move(value)) {}
  CounterValue(Coeffs value) : payload_(std::move(value)) {}
  CounterValue(RationalMatrix value) : payload_(std::move(value)) {}

  CounterKind kind() const noexcept { return static_cast<CounterKind>(payload_.index()); }
  const Payload& payload() const noexcept { return payload_; }

  template <typename T>
  const T& as() const {
    if (const T* p = std::get_if<T>(&payload_)) return *p;
    throw SpecError("counter value is of kind " + std::string(to_string(kind())));
  }

  friend bool operator==(const CounterValue&, const CounterValue&) = default;

 private:
  Payload payload_;
};

enum class Direction { increment, decrement, noop };

/// Which generator to apply and whether to apply it or its inverse. `noop`
/// leaves the counter untouched; the generator index is then ignored.
struct CounterOp {
  std::size_t generator = 0;
  Direction direction = Direction::noop;

  static constexpr CounterOp increment(std::size_t j) { return {j, Direction::increment}; }
  static constexpr CounterOp decrement(std::size_t j) { return {j, Direction::decrement}; }
  static constexpr CounterOp noop() { return {0, Direction::noop}; }

  constexpr CounterOp inverse() const {
    switch (direction) {
      case Direction::increment: return decrement(generator);
      case Direction::decrement: return increment(generator);
      default: return noop();
    }
  }

  constexpr bool is_noop() const { return direction == Direction::noop; }

  friend constexpr bool operator==(const CounterOp& a, const CounterOp& b) {
    if (a.direction != b.direction) return false;
    return a.direction == Direction::noop || a.generator == b.generator;
  }
};

inline std::string to_string(const CounterOp& op) {
  switch (op.direction) {
    case Direction::increment: return "inc:" + std::to_string(op.generator);
    case Direction::decrement: return "dec:" + std::to_string(op.generator);
    default: return "noop";
  }
}

namespace detail {

template <typename Spec>
inline std::size_t generators_of(const Spec& spec) {
  if constexpr (std::is_same_v<Spec, IntegerSpec>)
    return spec.generators.size();
  else
    return spec.generators().size();
}

inline void check_conforms(const CounterSpec& spec, const CounterValue& value) {
  if (spec.kind() != value.kind())
    throw SpecError(std::string("counter value of kind ") + to_string(value.kind()) + " used with a " +
                    to_string(spec.kind()) + " counter");
  if (spec.kind() == CounterKind::real_sqrt &&
      value.as<Coeffs>().size() != spec.as<RealSqrtSpec>().basis_size())
    throw SpecError("coefficient vector length does not match basis size");
  if (spec.kind() == CounterKind::matrix && value.as<RationalMatrix>().dimension() != spec.dimension())
    throw SpecError("matrix value has the wrong dimension");
}

}  // namespace detail

inline std::size_t CounterSpec::generator_count() const {
  return std::visit([](const auto& s) { return detail::generators_of(s); }, payload_);
}

/// Group identity of the counter's group.
inline CounterValue identity(const CounterSpec& spec) {
  switch (spec.kind()) {
    case CounterKind::integer: return CounterValue(BigInt(0));
    case CounterKind::real_sqrt: return CounterValue(Coeffs(spec.as<RealSqrtSpec>().basis_size(), BigInt(0)));
    default: return CounterValue(RationalMatrix::identity(spec.dimension()));
  }
}

/// Returns X·value (increment) or X⁻¹·value (decrement) for X = generator op.generator.
inline CounterValue apply(const CounterSpec& spec, const CounterValue& value, const CounterOp& op) {
  detail::check_conforms(spec, value);
  if (op.is_noop()) return value;
  const bool inc = op.direction == Direction::increment;
  switch (spec.kind()) {
    case CounterKind::integer: {
      const auto& gens = spec.as<IntegerSpec>().generators;
      if (op.generator >= gens.size()) break;
      const BigInt& v = value.as<BigInt>();
      return CounterValue(inc ? BigInt(v + gens[op.generator]) : BigInt(v - gens[op.generator]));
    }
    case CounterKind::real_sqrt: {
      const auto& gens = spec.as<RealSqrtSpec>().generators();
      if (op.generator >= gens.size()) break;
      const Coeffs& g = gens[op.generator];
      Coeffs out = value.as<Coeffs>();
      if (g.size() != out.size()) throw SpecError("generator length does not match basis size");
      for (std::size_t i = 0; i < out.size(); ++i) {
        if (inc)
          out[i] += g[i];
        else
          out[i] -= g[i];
      }
      return CounterValue(std::move(out));
    }
    case CounterKind::matrix: {
      const auto& m = spec.as<MatrixSpec>();
      if (op.generator >= m.generators().size()) break;
      const RationalMatrix& x = inc ? m.generators()[op.generator] : m.inverse(op.generator);
      return CounterValue(x * value.as<RationalMatrix>());
    }
  }
  throw SpecError("generator index " + std::to_string(op.generator) + " out of range");
}

/// Exact identity test.
inline bool is_identity(const CounterSpec& spec, const CounterValue& value) {
  detail::check_conforms(spec, value);
  switch (spec.kind()) {
    case CounterKind::integer: return value.as<BigInt>() == 0;
    case CounterKind::real_sqrt: {
      for (const auto& c : value.as<Coeffs>())
        if (c != 0) return false;
      return true;
    }
    default: return value.as<RationalMatrix>().is_identity();
  }
}

/// Membership in F₋.
inline bool is_negative(const CounterSpec& spec, const CounterValue& value) {
  detail::check_conforms(spec, value);
  switch (spec.kind()) {
    case CounterKind::integer: return integer_is_negative(value.as<BigInt>());
    case CounterKind::real_sqrt: return real_is_negative(spec.as<RealSqrtSpec>(), value.as<Coeffs>());
    default: return matrix_is_negative(spec.as<MatrixSpec>(), value.as<RationalMatrix>());
  }
}

struct ReversalTracker {
  enum class Mode { none_yet, incrementing, decrementing };

  Mode mode = Mode::none_yet;
  std::size_t count = 0;

  friend bool operator==(const ReversalTracker&, const ReversalTracker&) = default;
};

/// Counts increment/decrement mode switches; the first non-noop op only sets the mode.
inline ReversalTracker record_op(ReversalTracker tracker, const CounterOp& op) {
  using Mode = ReversalTracker::Mode;
  if (op.is_noop()) return tracker;
  const Mode next = op.direction == Direction::increment ? Mode::incrementing : Mode::decrementing;
  if (tracker.mode != Mode::none_yet && tracker.mode != next) ++tracker.count;
  tracker.mode = next;
  return tracker;
}

inline ValidationReport validate_spec(const CounterSpec& spec, const ValidateOptions& options = {}) {
  switch (spec.kind()) {
    case CounterKind::integer: return validate(spec.as<IntegerSpec>());
    case CounterKind::real_sqrt: return validate(spec.as<RealSqrtSpec>());
    default: return validate(spec.as<MatrixSpec>(), options);
  }
}

}  // namespace gca
