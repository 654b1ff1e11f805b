#pragma once

// Deterministic finite control with one generalized counter and a read-only
// head over ^input$. Supports one-way and two-way heads, and every mode in
// Visibility.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gca/common.hpp"
#include "gca/counter.hpp"

namespace gca {

/// Endmarkers, reserved by the engine (¢ is written '^').
inline constexpr char kLeftEnd = '^';
inline constexpr char kRightEnd = '$';

enum class HeadMode { one_way, two_way };
enum class Visibility { deterministic, blind, partially_blind };
/// Counter status bit seen by the finite control: zero means "is the identity".
enum class Status { zero, nonzero };

inline const char* to_string(HeadMode m) { return m == HeadMode::one_way ? "one-way" : "two-way"; }

inline const char* to_string(Visibility v) {
  switch (v) {
    case Visibility::deterministic: return "deterministic";
    case Visibility::blind: return "blind";
    default: return "partially-blind";
  }
}

inline bool is_blind(Visibility v) { return v != Visibility::deterministic; }

struct TransitionKey {
  std::size_t state = 0;
  char symbol = kLeftEnd;
  Status status = Status::zero;

  friend auto operator<=>(const TransitionKey&, const TransitionKey&) = default;
};

struct Transition {
  std::size_t target = 0;
  int move = 0;  // -1, 0 or +1
  CounterOp op;

  friend bool operator==(const Transition&, const Transition&) = default;
};

struct MachineSpec {
  std::string name;
  std::vector<std::string> states;
  std::size_t start = 0;
  std::set<std::size_t> accept;
  std::string alphabet;
  HeadMode head_mode = HeadMode::one_way;
  Visibility visibility = Visibility::deterministic;
  CounterSpec counter;
  std::map<TransitionKey, Transition> transitions;

  std::size_t add_state(std::string state_name, bool accepting = false) {
    states.push_back(std::move(state_name));
    if (accepting) accept.insert(states.size() - 1);
    return states.size() - 1;
  }

  /// Throws SpecError for an unknown name.
  std::size_t state_index(std::string_view state_name) const {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (states[i] == state_name) return i;
    throw SpecError("unknown state '" + std::string(state_name) + "'");
  }

  /// Adds an entry for one status, or for both when `status` is nullopt.
  void on(std::size_t state, char symbol, std::optional<Status> status, Transition t) {
    if (!status || *status == Status::zero) transitions[{state, symbol, Status::zero}] = t;
    if (!status || *status == Status::nonzero) transitions[{state, symbol, Status::nonzero}] = t;
  }

  const Transition* find(std::size_t state, char symbol, Status status) const {
    auto it = transitions.find({state, symbol, status});
    return it == transitions.end() ? nullptr : &it->second;
  }

  bool is_accepting(std::size_t state) const { return accept.count(state) != 0; }

  friend bool operator==(const MachineSpec&, const MachineSpec&) = default;
};

/// ^ input $, immutable once loaded.
class Tape {
 public:
  /// Throws InputError for a symbol outside the machine alphabet.
  static Tape load(const MachineSpec& spec, std::string_view input) {
    for (char c : input)
      if (spec.alphabet.find(c) == std::string::npos)
        throw InputError(std::string("unknown symbol '") + c + "'");
    Tape tape;
    tape.cells_.reserve(input.size() + 2);
    tape.cells_ += kLeftEnd;
    tape.cells_ += input;
    tape.cells_ += kRightEnd;
    return tape;
  }

  char at(std::size_t position) const { return cells_.at(position); }
  std::size_t size() const noexcept { return cells_.size(); }
  std::size_t right_end() const noexcept { return cells_.size() - 1; }
  std::string_view input() const { return std::string_view(cells_).substr(1, cells_.size() - 2); }

 private:
  std::string cells_;
};

struct Configuration {
  std::size_t state = 0;
  std::size_t head = 0;  // index into ^input$
  CounterValue counter;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct StepResult {
  enum class Kind { moved, halted, crashed };

  Kind kind = Kind::halted;
  Configuration next;                // unchanged when halted; the offending value when crashed
  std::optional<Transition> applied;
};

/// Status the finite control would see; blind machines always see nonzero.
inline Status observed_status(const MachineSpec& spec, const CounterValue& value) {
  if (is_blind(spec.visibility)) return Status::nonzero;
  return is_identity(spec.counter, value) ? Status::zero : Status::nonzero;
}

/// One transition of the machine. Halts when δ is undefined; crashes when a
/// partially blind machine drives its counter into F₋.
inline StepResult step(const MachineSpec& spec, const Tape& tape, const Configuration& config) {
  if (config.state >= spec.states.size()) throw EngineError("configuration state out of range");
  if (config.head >= tape.size()) throw EngineError("configuration head off the tape");
  if (config.counter.kind() != spec.counter.kind()) throw EngineError("configuration counter has the wrong kind");

  const char symbol = tape.at(config.head);
  const Transition* t = nullptr;
  if (is_blind(spec.visibility)) {
    t = spec.find(config.state, symbol, Status::nonzero);
    const Transition* z = spec.find(config.state, symbol, Status::zero);
    if ((t == nullptr) != (z == nullptr) || (t != nullptr && !(*t == *z)))
      throw EngineError("blind machine has status-dependent transition at state '" + spec.states[config.state] +
                        "', symbol '" + symbol + "'");
  } else {
    t = spec.find(config.state, symbol, observed_status(spec, config.counter));
  }

  StepResult result;
  if (t == nullptr) {
    result.next = config;
    return result;
  }
  const long long head = static_cast<long long>(config.head) + t->move;
  if (head < 0 || head >= static_cast<long long>(tape.size()))
    throw EngineError("transition moves the head off the tape");

  result.applied = *t;
  result.next.state = t->target;
  result.next.head = static_cast<std::size_t>(head);
  result.next.counter = apply(spec.counter, config.counter, t->op);
  result.kind = StepResult::Kind::moved;
  if (spec.visibility == Visibility::partially_blind && !t->op.is_noop() &&
      is_negative(spec.counter, result.next.counter))
    result.kind = StepResult::Kind::crashed;
  return result;
}

enum class Verdict { accept, reject, crash, step_limit };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::accept: return "accept";
    case Verdict::reject: return "reject";
    case Verdict::crash: return "crash";
    default: return "step-limit";
  }
}

struct RunLimits {
  std::size_t max_steps = 1'000'000;
};

struct TraceEntry {
  std::size_t step = 0;
  Configuration before;
  Transition transition;
};

struct RunResult {
  Verdict verdict = Verdict::reject;
  std::size_t steps = 0;
  std::size_t head_reversals = 0;
  std::size_t counter_reversals = 0;
  Configuration final_configuration;
  std::optional<std::vector<TraceEntry>> trace;

  bool accepted() const noexcept { return verdict == Verdict::accept; }
};

namespace detail {

inline RunResult execute(const MachineSpec& spec, std::string_view input, const RunLimits& limits,
                         bool keep_trace) {
  const Tape tape = Tape::load(spec, input);
  RunResult result;
  if (keep_trace) result.trace.emplace();
  Configuration config{spec.start, 0, identity(spec.counter)};
  ReversalTracker tracker;
  int last_move = 0;

  for (;;) {
    StepResult s = step(spec, tape, config);
    if (s.kind == StepResult::Kind::halted) {
      const bool at_end = spec.head_mode == HeadMode::two_way || config.head == tape.right_end();
      result.verdict = spec.is_accepting(config.state) && at_end && is_identity(spec.counter, config.counter)
                           ? Verdict::accept
                           : Verdict::reject;
      break;
    }
    if (result.steps >= limits.max_steps) {
      result.verdict = Verdict::step_limit;
      break;
    }
    const Transition& t = *s.applied;
    if (t.move != 0) {
      if (last_move != 0 && t.move != last_move) ++result.head_reversals;
      last_move = t.move;
    }
    tracker = record_op(tracker, t.op);
    if (keep_trace) result.trace->push_back({result.steps, std::move(config), t});
    ++result.steps;
    config = std::move(s.next);
    if (s.kind == StepResult::Kind::crashed) {
      result.verdict = Verdict::crash;
      break;
    }
  }
  result.counter_reversals = tracker.count;
  result.final_configuration = std::move(config);
  return result;
}

}  // namespace detail

/// Runs `input` from (start, ^, identity). Accepts iff the machine halts in an
/// accepting state with the identity in its counter (one-way machines must
/// also halt on $). Throws InputError for symbols outside the alphabet.
inline RunResult run(const MachineSpec& spec, std::string_view input, const RunLimits& limits = {}) {
  return detail::execute(spec, input, limits, false);
}

/// As run, keeping every configuration and the transition taken from it.
inline RunResult trace(const MachineSpec& spec, std::string_view input, const RunLimits& limits = {}) {
  return detail::execute(spec, input, limits, true);
}

/// Checks every structural invariant of a machine; unreachable states are warnings.
inline ValidationReport validate_machine(const MachineSpec& spec, const ValidateOptions& options = {}) {
  ValidationReport report;
  auto& bad = report.violations;
  const std::size_t n = spec.states.size();
  if (n == 0) bad.push_back("machine has no states");
  if (spec.start >= n && n != 0) bad.push_back("start state out of range");
  {
    std::set<std::string> names;
    for (const auto& s : spec.states) {
      if (s.empty()) bad.push_back("state with empty name");
      if (std::any_of(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }))
        bad.push_back("state name '" + s + "' contains whitespace");
      if (!names.insert(s).second) bad.push_back("duplicate state name '" + s + "'");
    }
  }
  for (auto a : spec.accept)
    if (a >= n) bad.push_back("accepting state index out of range");
  {
    std::set<char> seen;
    for (char c : spec.alphabet) {
      if (c == kLeftEnd || c == kRightEnd) bad.push_back(std::string("endmarker '") + c + "' in the alphabet");
      if (c == '*' || c <= ' ' || c == 127) bad.push_back(std::string("reserved or blank symbol '") + c + "'");
      if (!seen.insert(c).second) bad.push_back(std::string("duplicate symbol '") + c + "'");
    }
  }

  ValidationReport counter_report = validate_spec(spec.counter, options);
  for (auto& v : counter_report.violations) v = "counter: " + v;
  for (auto& w : counter_report.warnings) w = "counter: " + w;
  report.merge(counter_report);

  const std::size_t gens = spec.counter.generator_count();
  auto where = [&](const TransitionKey& k) {
    std::string state = k.state < n ? spec.states[k.state] : std::to_string(k.state);
    return "transition (" + state + ", '" + k.symbol + "', " + (k.status == Status::zero ? "0" : "1") + ")";
  };
  for (const auto& [key, t] : spec.transitions) {
    if (key.state >= n) bad.push_back(where(key) + ": source state out of range");
    if (t.target >= n) bad.push_back(where(key) + ": target state out of range");
    if (key.symbol != kLeftEnd && key.symbol != kRightEnd && spec.alphabet.find(key.symbol) == std::string::npos)
      bad.push_back(where(key) + ": symbol not in the alphabet");
    if (t.move < -1 || t.move > 1) bad.push_back(where(key) + ": head move must be -1, 0 or +1");
    if (spec.head_mode == HeadMode::one_way && t.move < 0)
      bad.push_back(where(key) + ": one-way machine moves left");
    if (key.symbol == kLeftEnd && t.move < 0) bad.push_back(where(key) + ": moves left off the left endmarker");
    if (key.symbol == kRightEnd && t.move > 0) bad.push_back(where(key) + ": moves right off the right endmarker");
    if (!t.op.is_noop() && t.op.generator >= gens)
      bad.push_back(where(key) + ": generator " + std::to_string(t.op.generator) + " out of range");
  }

  if (is_blind(spec.visibility)) {
    for (const auto& [key, t] : spec.transitions) {
      if (key.status != Status::zero) {
        if (spec.find(key.state, key.symbol, Status::zero) == nullptr)
          bad.push_back(where(key) + ": blindness violated (no matching status-0 entry)");
        continue;
      }
      const Transition* other = spec.find(key.state, key.symbol, Status::nonzero);
      if (other == nullptr || !(*other == t))
        bad.push_back(where(key) + ": blindness violated (status-0 and status-1 entries differ)");
    }
  }

  if (spec.start < n) {
    std::vector<bool> reached(n, false);
    std::queue<std::size_t> frontier;
    reached[spec.start] = true;
    frontier.push(spec.start);
    while (!frontier.empty()) {
      std::size_t q = frontier.front();
      frontier.pop();
      for (auto it = spec.transitions.lower_bound({q, std::numeric_limits<char>::min(), Status::zero});
           it != spec.transitions.end() && it->first.state == q; ++it) {
        if (it->second.target < n && !reached[it->second.target]) {
          reached[it->second.target] = true;
          frontier.push(it->second.target);
        }
      }
    }
    for (std::size_t q = 0; q < n; ++q)
      if (!reached[q]) report.warnings.push_back("state '" + spec.states[q] + "' is unreachable");
  }
  return report;
}

}  // namespace gca
