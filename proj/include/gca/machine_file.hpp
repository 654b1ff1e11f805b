#pragma once

// Machine description files.
//
//   // comment lines start with //
//   [machine]
//   name = lgen
//   head_mode = one-way            (one-way | two-way)
//   visibility = partially-blind   (deterministic | blind | partially-blind)
//
//   [counter]
//   kind = real-sqrt               (integer | real-sqrt | matrix)
//   primes = 2 3                   (real-sqrt only)
//   dimension = 3                  (matrix only)
//   generator = 1 1                (repeatable; integer: N, real-sqrt: coefficients,
//                                   matrix: [[a,b],[c,d]] with entries p/q or integers)
//
//   [states]
//   states = start p0 p1 accept
//   start = start
//   accept = accept
//
//   [alphabet]
//   symbols = a b c
//
//   [transitions]
//   // state symbol status target move op
//   p0 a * p0 +1 inc:0
//
// Symbol '^' stands for the left endmarker, '$' for the right one.
//
//   status   0   the counter holds the identity
//            1   it does not
//            *   either (required for blind machines)
//   op       inc:<j> applies generator j, dec:<j> its inverse, noop nothing

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gca/automaton.hpp"
#include "gca/common.hpp"
#include "gca/format.hpp"

namespace gca {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

inline std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

inline std::string render_move(int move) { return move > 0 ? "+1" : move < 0 ? "-1" : "0"; }

}  // namespace detail

inline std::string emit_machine(const MachineSpec& spec) {
  std::ostringstream out;
  out << "[machine]\n"
      << "name = " << spec.name << "\n"
      << "head_mode = " << to_string(spec.head_mode) << "\n"
      << "visibility = " << to_string(spec.visibility) << "\n\n";

  out << "[counter]\nkind = " << to_string(spec.counter.kind()) << "\n";
  switch (spec.counter.kind()) {
    case CounterKind::integer:
      for (const auto& g : spec.counter.as<IntegerSpec>().generators) out << "generator = " << g.str() << "\n";
      break;
    case CounterKind::real_sqrt: {
      const auto& real = spec.counter.as<RealSqrtSpec>();
      out << "primes =";
      for (auto p : real.primes()) out << ' ' << p;
      out << "\n";
      for (const auto& g : real.generators()) {
        out << "generator =";
        for (const auto& c : g) out << ' ' << c.str();
        out << "\n";
      }
      break;
    }
    case CounterKind::matrix: {
      const auto& m = spec.counter.as<MatrixSpec>();
      out << "dimension = " << m.dimension() << "\n";
      for (const auto& g : m.generators()) out << "generator = " << render_matrix(g) << "\n";
      break;
    }
  }

  std::vector<std::string> accepting;
  for (auto a : spec.accept) accepting.push_back(spec.states.at(a));
  out << "\n[states]\nstates = " << detail::join(spec.states) << "\n"
      << "start = " << spec.states.at(spec.start) << "\n"
      << "accept = " << detail::join(accepting) << "\n\n";

  std::vector<std::string> symbols;
  for (char c : spec.alphabet) symbols.emplace_back(1, c);
  out << "[alphabet]\nsymbols = " << detail::join(symbols) << "\n\n";

  out << "[transitions]\n";
  auto line = [&](const TransitionKey& key, const char* status, const Transition& t) {
    out << spec.states.at(key.state) << ' ' << key.symbol << ' ' << status << ' ' << spec.states.at(t.target) << ' '
        << detail::render_move(t.move) << ' ' << to_string(t.op) << "\n";
  };
  for (auto it = spec.transitions.begin(); it != spec.transitions.end(); ++it) {
    const auto& [key, t] = *it;
    if (key.status == Status::zero) {
      const Transition* other = spec.find(key.state, key.symbol, Status::nonzero);
      if (other != nullptr && *other == t) {
        line(key, "*", t);
        ++it;  // the status-1 twin sorts immediately after
        continue;
      }
      line(key, "0", t);
    } else {
      line(key, "1", t);
    }
  }
  return out.str();
}

namespace detail {

inline CounterOp parse_op(std::string_view text, std::size_t line) {
  if (text == "noop") return CounterOp::noop();
  Direction dir;
  if (text.substr(0, 4) == "inc:")
    dir = Direction::increment;
  else if (text.substr(0, 4) == "dec:")
    dir = Direction::decrement;
  else
    throw ParseError(line, "counter op must be inc:<j>, dec:<j> or noop, got '" + std::string(text) + "'");
  std::string_view index = text.substr(4);
  if (!is_decimal(index, false)) throw ParseError(line, "bad generator index in '" + std::string(text) + "'");
  return {static_cast<std::size_t>(std::stoull(std::string(index))), dir};
}

inline int parse_move(std::string_view text, std::size_t line) {
  if (text == "+1" || text == "1") return 1;
  if (text == "-1") return -1;
  if (text == "0") return 0;
  throw ParseError(line, "head move must be -1, 0 or +1, got '" + std::string(text) + "'");
}

}  // namespace detail

/// Parses a machine file and validates the result. Diagnostics carry 1-based
/// line numbers where one applies.
inline MachineSpec parse_machine(std::string_view text, const ValidateOptions& options = {}) {
  struct Entry {
    std::string value;
    std::size_t line;
  };
  std::map<std::string, std::vector<Entry>> keys;  // "section.key"
  struct RawTransition {
    std::vector<std::string> fields;
    std::size_t line;
  };
  std::vector<RawTransition> raw_transitions;

  static const std::map<std::string, std::vector<std::string>> kAllowed = {
      {"machine", {"name", "head_mode", "visibility"}},
      {"counter", {"kind", "primes", "dimension", "generator"}},
      {"states", {"states", "start", "accept"}},
      {"alphabet", {"symbols"}},
      {"transitions", {}},
  };

  std::string section;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string_view line = detail::trim(raw);
    if (line.empty() || line.substr(0, 2) == "//") continue;
    if (line.front() == '[' && line.back() == ']' && section != "transitions") {
      section = std::string(line.substr(1, line.size() - 2));
      if (!kAllowed.count(section)) throw ParseError(line_no, "unknown section [" + section + "]");
      continue;
    }
    if (line == "[transitions]") continue;
    if (section.empty()) throw ParseError(line_no, "content before the first section");
    if (section == "transitions") {
      if (line.front() == '[' && line.back() == ']') {
        throw ParseError(line_no, "[transitions] must be the last section");
      }
      auto fields = detail::split_words(line);
      if (fields.size() != 6)
        throw ParseError(line_no, "transition needs 6 fields: state symbol status target move op");
      raw_transitions.push_back({std::move(fields), line_no});
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    std::string key(detail::trim(line.substr(0, eq)));
    const auto& allowed = kAllowed.at(section);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ParseError(line_no, "unknown key '" + key + "' in [" + section + "]");
    std::string full = section + "." + key;
    if (key != "generator" && keys.count(full)) throw ParseError(line_no, "duplicate key '" + key + "'");
    keys[full].push_back({std::string(detail::trim(line.substr(eq + 1))), line_no});
  }

  auto get = [&](const std::string& full) -> const Entry& {
    auto it = keys.find(full);
    if (it == keys.end()) throw ParseError(0, "missing '" + full.substr(full.find('.') + 1) + "' in [" +
                                                  full.substr(0, full.find('.')) + "]");
    return it->second.front();
  };

  MachineSpec spec;
  spec.name = get("machine.name").value;
  {
    const Entry& e = get("machine.head_mode");
    if (e.value == "one-way")
      spec.head_mode = HeadMode::one_way;
    else if (e.value == "two-way")
      spec.head_mode = HeadMode::two_way;
    else
      throw ParseError(e.line, "head_mode must be one-way or two-way");
  }
  {
    const Entry& e = get("machine.visibility");
    if (e.value == "deterministic")
      spec.visibility = Visibility::deterministic;
    else if (e.value == "blind")
      spec.visibility = Visibility::blind;
    else if (e.value == "partially-blind")
      spec.visibility = Visibility::partially_blind;
    else
      throw ParseError(e.line, "visibility must be deterministic, blind or partially-blind");
  }

  {
    const Entry& kind = get("counter.kind");
    std::vector<Entry> gens;
    if (auto it = keys.find("counter.generator"); it != keys.end()) gens = it->second;
    auto reject_key = [&](const char* key) {
      if (auto it = keys.find(std::string("counter.") + key); it != keys.end())
        throw ParseError(it->second.front().line, std::string("'") + key + "' does not apply to a " + kind.value +
                                                      " counter");
    };
    auto rethrow_at = [](std::size_t line, auto&& fn) {
      try {
        return fn();
      } catch (const ParseError& e) {
        if (e.line() != 0) throw;
        throw ParseError(line, e.what());
      }
    };
    if (kind.value == "integer") {
      reject_key("primes");
      reject_key("dimension");
      IntegerSpec s;
      s.generators.clear();
      for (const auto& g : gens) s.generators.push_back(rethrow_at(g.line, [&] { return parse_integer(g.value); }));
      spec.counter = CounterSpec(std::move(s));
    } else if (kind.value == "real-sqrt") {
      reject_key("dimension");
      const Entry& primes_entry = get("counter.primes");
      std::vector<std::uint64_t> primes;
      for (const auto& w : detail::split_words(primes_entry.value)) {
        if (!detail::is_decimal(w, false)) throw ParseError(primes_entry.line, "bad prime '" + w + "'");
        primes.push_back(std::stoull(w));
      }
      std::vector<Coeffs> generators;
      for (const auto& g : gens) {
        Coeffs c;
        for (const auto& w : detail::split_words(g.value))
          c.push_back(rethrow_at(g.line, [&] { return parse_integer(w); }));
        if (c.size() != primes.size())
          throw ParseError(g.line, "generator needs " + std::to_string(primes.size()) + " coefficients");
        generators.push_back(std::move(c));
      }
      spec.counter = CounterSpec(RealSqrtSpec(std::move(primes), std::move(generators)));
    } else if (kind.value == "matrix") {
      reject_key("primes");
      const Entry& dim = get("counter.dimension");
      if (!detail::is_decimal(dim.value, false) || std::stoull(dim.value) == 0)
        throw ParseError(dim.line, "dimension must be a positive integer");
      const std::size_t n = std::stoull(dim.value);
      std::vector<RationalMatrix> generators;
      for (const auto& g : gens) {
        RationalMatrix m = rethrow_at(g.line, [&] { return parse_matrix(g.value); });
        if (m.dimension() != n) throw ParseError(g.line, "generator is not " + dim.value + "x" + dim.value);
        generators.push_back(std::move(m));
      }
      spec.counter = CounterSpec(MatrixSpec(n, std::move(generators)));
    } else {
      throw ParseError(kind.line, "counter kind must be integer, real-sqrt or matrix");
    }
  }

  spec.states = detail::split_words(get("states.states").value);
  auto state_at = [&](const std::string& name, std::size_t line) {
    try {
      return spec.state_index(name);
    } catch (const SpecError& e) {
      throw ParseError(line, e.what());
    }
  };
  {
    const Entry& e = get("states.start");
    spec.start = state_at(e.value, e.line);
  }
  {
    const Entry& e = get("states.accept");
    for (const auto& name : detail::split_words(e.value)) spec.accept.insert(state_at(name, e.line));
  }
  {
    const Entry& e = get("alphabet.symbols");
    for (const auto& w : detail::split_words(e.value)) {
      if (w.size() != 1) throw ParseError(e.line, "symbols are single characters, got '" + w + "'");
      spec.alphabet += w;
    }
  }

  for (const auto& [f, line] : raw_transitions) {
    if (f[1].size() != 1) throw ParseError(line, "symbol must be a single character");
    const char symbol = f[1][0];
    std::optional<Status> status;
    if (f[2] == "0")
      status = Status::zero;
    else if (f[2] == "1")
      status = Status::nonzero;
    else if (f[2] != "*")
      throw ParseError(line, "status must be 0, 1 or *");
    if (status && is_blind(spec.visibility))
      throw ParseError(line, "blind machines must use status *");
    const std::size_t from = state_at(f[0], line);
    const Transition t{state_at(f[3], line), detail::parse_move(f[4], line), detail::parse_op(f[5], line)};
    for (Status s : {Status::zero, Status::nonzero}) {
      if (status && *status != s) continue;
      if (!spec.transitions.emplace(TransitionKey{from, symbol, s}, t).second)
        throw ParseError(line, "duplicate transition for (" + f[0] + ", " + f[1] + ")");
    }
  }

  ValidationReport report = validate_machine(spec, options);
  if (!report.ok()) throw ParseError(0, "invalid machine: " + report.violations.front());
  return spec;
}

inline MachineSpec load_machine_file(const std::string& path, const ValidateOptions& options = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_machine(buf.str(), options);
}

}  // namespace gca
