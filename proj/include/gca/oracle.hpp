#pragma once

// Ground truth independent of the machine engine. Each language has a direct
// string predicate, and the A/B word-separation check uses its own matrices.
// The harnesses below enumerate corpora and compare machines with predicates
// or with each other.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gca/automaton.hpp"
#include "gca/format.hpp"
#include "gca/machines.hpp"

namespace gca {

// ---------------------------------------------------------------------------
// Language predicates

inline bool oracle_lgen(const LGenParams& params, std::string_view x) {
  const std::string symbols = params.symbol_string();
  std::vector<std::size_t> counts(symbols.size(), 0);
  std::size_t cls = 0;
  for (char c : x) {
    auto pos = symbols.find(c);
    if (pos == std::string::npos || pos < cls) return false;
    cls = pos;
    ++counts[pos];
  }
  const std::size_t n = counts[0];
  for (std::size_t i = 1; i < symbols.size(); ++i)
    if (counts[i] != params.multipliers[i - 1] * n) return false;
  return true;
}

/// Blocks are the pieces ending at each '#', so the input must end with '#'.
/// Accepts when there are at least two blocks and a later one equals the first.
inline bool oracle_lpat(std::string_view x) {
  if (x.empty() || x.back() != '#') return false;
  for (char c : x)
    if (c != '0' && c != '1' && c != '#') return false;
  std::vector<std::string_view> blocks;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == '#') {
      blocks.push_back(x.substr(begin, i - begin));
      begin = i + 1;
    }
  }
  if (blocks.size() < 2) return false;
  for (std::size_t i = 1; i < blocks.size(); ++i)
    if (blocks[i] == blocks[0]) return true;
  return false;
}

inline bool oracle_lpal(std::string_view x) {
  auto hash = x.find('#');
  if (hash == std::string_view::npos || x.find('#', hash + 1) != std::string_view::npos) return false;
  for (char c : x)
    if (c != '0' && c != '1' && c != '#') return false;
  std::string_view left = x.substr(0, hash);
  std::string_view right = x.substr(hash + 1);
  return left.size() == right.size() && std::equal(left.begin(), left.end(), right.rbegin());
}

// ---------------------------------------------------------------------------
// A/B word separation, computed with plain rational vectors.

namespace detail {

using Vec3 = std::array<Rational, 3>;
using Mat3 = std::array<std::array<Rational, 3>, 3>;

inline const Mat3& aw_letter(char letter, bool inverse) {
  static const Mat3 a = {{{4, 3, 0}, {-3, 4, 0}, {0, 0, 5}}};
  static const Mat3 b = {{{4, 0, 3}, {0, 5, 0}, {-3, 0, 4}}};
  static const Mat3 a_inv = {{{Rational(4, 25), Rational(-3, 25), 0},
                              {Rational(3, 25), Rational(4, 25), 0},
                              {0, 0, Rational(5, 25)}}};
  static const Mat3 b_inv = {{{Rational(4, 25), 0, Rational(-3, 25)},
                              {0, Rational(5, 25), 0},
                              {Rational(3, 25), 0, Rational(4, 25)}}};
  if (letter == 'A') return inverse ? a_inv : a;
  if (letter == 'B') return inverse ? b_inv : b;
  throw InputError(std::string("word letters must be A or B, got '") + letter + "'");
}

inline Vec3 mul(const Mat3& m, const Vec3& v) {
  Vec3 out{0, 0, 0};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) out[i] += m[i][j] * v[j];
  return out;
}

}  // namespace detail

/// u = Y_1⁻¹ ... Y_n⁻¹ X_n ... X_1 (1,0,0)ᵀ, exactly. X_1 is x[0].
inline std::array<Rational, 3> aw_vector(std::string_view x, std::string_view y) {
  if (x.size() != y.size()) throw InputError("words must have equal length");
  detail::Vec3 u{1, 0, 0};
  for (char c : x) u = detail::mul(detail::aw_letter(c, false), u);
  for (auto it = y.rbegin(); it != y.rend(); ++it) u = detail::mul(detail::aw_letter(*it, true), u);
  return u;
}

/// u[2]² + u[3]² = 0 for the vector above.
inline bool aw_product_check(std::string_view x, std::string_view y) {
  auto u = aw_vector(x, y);
  return u[1] * u[1] + u[2] * u[2] == 0;
}

// ---------------------------------------------------------------------------
// Corpora

struct RandomSample {
  std::size_t count = 0;
  std::uint64_t seed = 0;
};

/// All strings over `alphabet` up to `max_length` in length-lexicographic
/// order, or a seeded random sample when `sample` is set.
struct Corpus {
  std::string alphabet;
  std::size_t max_length = 0;
  std::optional<RandomSample> sample;

  template <typename Fn>
  void for_each(Fn&& fn) const {
    if (sample) {
      std::mt19937_64 rng(sample->seed);
      for (std::size_t i = 0; i < sample->count; ++i) {
        const std::size_t len = static_cast<std::size_t>(rng() % (max_length + 1));
        std::string s(len, ' ');
        for (auto& c : s) c = alphabet[static_cast<std::size_t>(rng() % alphabet.size())];
        fn(std::string_view(s));
      }
      return;
    }
    if (alphabet.empty()) {
      fn(std::string_view());
      return;
    }
    std::string s;
    std::vector<std::size_t> digits;
    for (std::size_t len = 0; len <= max_length; ++len) {
      digits.assign(len, 0);
      s.assign(len, alphabet[0]);
      for (;;) {
        fn(std::string_view(s));
        std::size_t i = len;
        while (i > 0 && digits[i - 1] + 1 == alphabet.size()) {
          digits[i - 1] = 0;
          s[i - 1] = alphabet[0];
          --i;
        }
        if (i == 0) break;
        ++digits[i - 1];
        s[i - 1] = alphabet[digits[i - 1]];
      }
    }
  }

  std::vector<std::string> strings() const {
    std::vector<std::string> out;
    for_each([&](std::string_view s) { out.emplace_back(s); });
    return out;
  }
};

// ---------------------------------------------------------------------------
// Differential testing

using LanguagePredicate = std::function<bool(std::string_view)>;

struct Disagreement {
  std::size_t index = 0;  // position in corpus order
  std::string input;
  Verdict machine = Verdict::reject;
  bool oracle = false;
};

struct DifferentialReport {
  std::size_t total = 0;
  std::vector<Disagreement> disagreements;
  std::map<Verdict, std::size_t> verdicts;
  std::size_t max_counter_reversals = 0;
  std::size_t max_head_reversals = 0;
  /// Largest counter reversal count seen for each input shape.
  std::map<std::size_t, std::size_t> max_counter_reversals_by_shape;

  bool ok() const noexcept { return disagreements.empty(); }
};

struct DifferentialOptions {
  RunLimits limits;
  /// Groups inputs for the reversal statistics; input length when unset.
  std::function<std::size_t(std::string_view)> shape;
  /// Called after every run, e.g. to assert per-run complexity bounds.
  std::function<void(std::string_view, const RunResult&)> observer;
};

/// Crash and step-limit verdicts count as "not accepted".
inline DifferentialReport differential_test(const MachineSpec& spec, const LanguagePredicate& oracle,
                                            const Corpus& corpus, const DifferentialOptions& options = {}) {
  DifferentialReport report;
  corpus.for_each([&](std::string_view input) {
    const RunResult r = run(spec, input, options.limits);
    const bool expected = oracle(input);
    if (r.accepted() != expected) report.disagreements.push_back({report.total, std::string(input), r.verdict, expected});
    ++report.verdicts[r.verdict];
    report.max_counter_reversals = std::max(report.max_counter_reversals, r.counter_reversals);
    report.max_head_reversals = std::max(report.max_head_reversals, r.head_reversals);
    const std::size_t shape = options.shape ? options.shape(input) : input.size();
    auto& slot = report.max_counter_reversals_by_shape[shape];
    slot = std::max(slot, r.counter_reversals);
    if (options.observer) options.observer(input, r);
    ++report.total;
  });
  return report;
}

/// Number of '#'-terminated blocks, the shape used for L_pat statistics.
inline std::size_t count_blocks(std::string_view x) {
  return static_cast<std::size_t>(std::count(x.begin(), x.end(), '#'));
}

// ---------------------------------------------------------------------------
// Lockstep comparison of two machines with the same finite control

struct LockstepReport {
  std::size_t steps_compared = 0;
  std::optional<std::size_t> first_mismatch;  // step index where is_identity disagreed
  Verdict verdict_a = Verdict::reject;
  Verdict verdict_b = Verdict::reject;
};

/// Steps both machines side by side on one input, comparing is_identity (and
/// the control position) at every configuration both reach.
inline LockstepReport lockstep_identity(const MachineSpec& a, const MachineSpec& b, std::string_view input,
                                        const RunLimits& limits = {}) {
  LockstepReport report;
  report.verdict_a = run(a, input, limits).verdict;
  report.verdict_b = run(b, input, limits).verdict;
  const Tape tape_a = Tape::load(a, input);
  const Tape tape_b = Tape::load(b, input);
  Configuration ca{a.start, 0, identity(a.counter)};
  Configuration cb{b.start, 0, identity(b.counter)};
  using Kind = StepResult::Kind;
  for (std::size_t i = 0; i <= limits.max_steps; ++i) {
    ++report.steps_compared;
    if (is_identity(a.counter, ca.counter) != is_identity(b.counter, cb.counter) || ca.state != cb.state ||
        ca.head != cb.head) {
      report.first_mismatch = i;
      break;
    }
    StepResult sa = step(a, tape_a, ca);
    StepResult sb = step(b, tape_b, cb);
    if (sa.kind == Kind::halted || sb.kind == Kind::halted) break;
    ca = std::move(sa.next);
    cb = std::move(sb.next);
    // A crashing step still produced a configuration; compare it, then stop.
    if (sa.kind == Kind::crashed || sb.kind == Kind::crashed) {
      ++report.steps_compared;
      if (is_identity(a.counter, ca.counter) != is_identity(b.counter, cb.counter)) report.first_mismatch = i + 1;
      break;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Interchange property for one-way partially blind real-counter machines

/// x split as v_1 w_1 v_2 w_2 ... v_r w_r v_{r+1}; `segments` lists each w_i as
/// (start, length) in increasing order. The v_i are whatever lies between.
struct Decomposition {
  struct Segment {
    std::size_t start = 0;
    std::size_t length = 0;
  };

  std::string input;
  std::vector<Segment> segments;

  /// Throws InputError unless every w_i is non-empty and the segments are ordered within the input.
  void check() const {
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < segments.size(); ++i) {
      const auto& s = segments[i];
      if (s.length == 0) throw InputError("segment w_" + std::to_string(i + 1) + " is empty");
      if (s.start < cursor) throw InputError("segments overlap or are out of order");
      if (s.start + s.length > input.size()) throw InputError("segment runs past the end of the input");
      cursor = s.start + s.length;
    }
  }

  /// Copy of the input with w_l and w_m (0-based) exchanged.
  std::string swapped(std::size_t l, std::size_t m) const {
    const auto& a = segments.at(l);
    const auto& b = segments.at(m);
    std::string out = input.substr(0, a.start);
    out += input.substr(b.start, b.length);
    out += input.substr(a.start + a.length, b.start - (a.start + a.length));
    out += input.substr(a.start, a.length);
    out += input.substr(b.start + b.length);
    return out;
  }
};

enum class InterchangeOutcome { pass, fail, inconclusive };

inline const char* to_string(InterchangeOutcome o) {
  switch (o) {
    case InterchangeOutcome::pass: return "pass";
    case InterchangeOutcome::fail: return "fail";
    default: return "inconclusive";
  }
}

struct InterchangeReport {
  InterchangeOutcome outcome = InterchangeOutcome::inconclusive;
  std::string reason;
  std::size_t l = 0;  // 1-based indices of the exchanged segments
  std::size_t m = 0;
  std::string swapped;
};

/// Segment count that guarantees a repeated (entry, exit) state pair.
inline std::size_t interchange_segment_count(const MachineSpec& spec) {
  return spec.states.size() * spec.states.size() + 1;
}

/// Index of the largest generator of a real-sqrt counter.
inline std::size_t largest_generator(const RealSqrtSpec& spec) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < spec.generators().size(); ++i) {
    Coeffs diff = spec.generators()[i];
    for (std::size_t j = 0; j < diff.size(); ++j) diff[j] -= spec.generators()[best][j];
    if (spec.sign(diff) == Sign::positive) best = i;
  }
  return best;
}

/// Checks that exchanging two segments entered and left in the same states
/// keeps the input accepted, provided the counter after v_1 is at least
/// (Σ_{i≥2}|v_i| + Σ|w_i|) times the largest generator. The outcome is
/// inconclusive when any precondition fails: the input must be accepted, the
/// bound must hold and some state pair must repeat.
inline InterchangeReport interchange_test(const MachineSpec& spec, const Decomposition& d,
                                          const RunLimits& limits = {}) {
  if (spec.counter.kind() != CounterKind::real_sqrt || spec.head_mode != HeadMode::one_way ||
      spec.visibility != Visibility::partially_blind)
    throw SpecError("interchange test needs a one-way partially blind real-sqrt machine");
  d.check();
  InterchangeReport report;
  if (d.segments.size() < 2) {
    report.reason = "need at least two segments";
    return report;
  }

  const RunResult original = trace(spec, d.input, limits);
  if (!original.accepted()) {
    report.reason = "input is not accepted";
    return report;
  }

  // State and counter on first arrival at each tape cell.
  const std::size_t cells = d.input.size() + 2;
  std::vector<std::optional<std::size_t>> state_at(cells);
  std::vector<const CounterValue*> counter_at(cells, nullptr);
  for (const auto& entry : *original.trace) {
    if (!state_at[entry.before.head]) {
      state_at[entry.before.head] = entry.before.state;
      counter_at[entry.before.head] = &entry.before.counter;
    }
  }
  if (!state_at[cells - 1]) {
    state_at[cells - 1] = original.final_configuration.state;
    counter_at[cells - 1] = &original.final_configuration.counter;
  }

  const auto& real = spec.counter.as<RealSqrtSpec>();
  const std::size_t v1 = d.segments.front().start;
  const std::size_t span = d.segments.back().start + d.segments.back().length - v1;
  const CounterValue* omega_v1 = counter_at[v1 + 1];
  if (omega_v1 == nullptr) {
    report.reason = "machine never reached the end of v_1";
    return report;
  }
  Coeffs slack = omega_v1->as<Coeffs>();
  const Coeffs& top = real.generators()[largest_generator(real)];
  for (std::size_t j = 0; j < slack.size(); ++j) slack[j] -= BigInt(span) * top[j];
  if (real.sign(slack) == Sign::negative) {
    report.reason = "counter after v_1 is below the required bound";
    return report;
  }

  auto pair_of = [&](const Decomposition::Segment& s) {
    return std::make_pair(state_at[s.start + 1], state_at[s.start + s.length + 1]);
  };
  for (std::size_t l = 0; l < d.segments.size() && report.l == 0; ++l) {
    for (std::size_t m = l + 1; m < d.segments.size(); ++m) {
      if (pair_of(d.segments[l]) == pair_of(d.segments[m])) {
        report.l = l + 1;
        report.m = m + 1;
        break;
      }
    }
  }
  if (report.l == 0) {
    report.reason = "no two segments share entry and exit states";
    return report;
  }
  report.swapped = d.swapped(report.l - 1, report.m - 1);
  const RunResult swapped = run(spec, report.swapped, limits);
  report.outcome = swapped.accepted() ? InterchangeOutcome::pass : InterchangeOutcome::fail;
  report.reason = swapped.accepted() ? "swapped input accepted"
                                     : std::string("swapped input ended with verdict ") + to_string(swapped.verdict);
  return report;
}

// ---------------------------------------------------------------------------
// Counter growth probe (a finite-value counter can be folded into the control)

struct GrowthProbe {
  /// Distinct counter values seen over all runs on inputs of length <= n, for n = 0..max_length.
  std::vector<std::size_t> distinct_values;
  /// Heuristic only: the count stopped growing over the last two lengths.
  bool possibly_regular = false;
};

inline GrowthProbe probe_counter_growth(const MachineSpec& spec, std::size_t max_length,
                                        const RunLimits& limits = {}) {
  GrowthProbe probe;
  std::set<std::string> seen;
  for (std::size_t n = 0; n <= max_length; ++n) {
    Corpus exact{spec.alphabet, n, std::nullopt};
    exact.for_each([&](std::string_view input) {
      if (input.size() != n) return;
      const RunResult r = trace(spec, input, limits);
      for (const auto& e : *r.trace) seen.insert(render(spec.counter, e.before.counter));
      seen.insert(render(spec.counter, r.final_configuration.counter));
    });
    probe.distinct_values.push_back(seen.size());
  }
  const auto& d = probe.distinct_values;
  probe.possibly_regular = d.size() >= 3 && d[d.size() - 1] == d[d.size() - 2] && d[d.size() - 2] == d[d.size() - 3];
  return probe;
}

}  // namespace gca
