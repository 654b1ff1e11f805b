// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "cli_support.hpp"
#include "gca/machine_file.hpp"
#include "gca/machines.hpp"
#include "gca/oracle.hpp"

using namespace gca;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

LGenParams lgen_params(std::vector<std::uint64_t> l) {
  LGenParams p = LGenParams::uniform(l.size() + 1);
  p.multipliers = std::move(l);
  return p;
}

std::string join_verdicts(const DifferentialReport& r) {
  std::string out;
  for (const auto& [v, n] : r.verdicts) out += std::string(out.empty() ? "" : " ") + to_string(v) + "=" + std::to_string(n);
  return out;
}

// L_gen: exhaustive agreement, counter_reversals <= 1 and head_reversals = 0 on every run.
Outcome lgen_exhaustive(const LGenParams& params, std::size_t max_len, std::size_t expected_total) {
  const MachineSpec m = build_lgen(params);
  if (!validate_machine(m).ok()) return {false, "machine fails validation"};
  std::size_t bound_violations = 0;
  DifferentialOptions options;
  options.observer = [&](std::string_view, const RunResult& r) {
    if (r.counter_reversals > 1 || r.head_reversals != 0) ++bound_violations;
  };
  const auto report =
      differential_test(m, [&](std::string_view x) { return oracle_lgen(params, x); },
                        Corpus{m.alphabet, max_len, std::nullopt}, options);
  std::ostringstream d;
  d << "k=" << params.k() << " length<=" << max_len << ": " << report.total << " strings, "
    << report.disagreements.size() << " disagreements, max counter reversals " << report.max_counter_reversals
    << ", max head reversals " << report.max_head_reversals << " (" << join_verdicts(report) << ")";
  return {report.ok() && report.total == expected_total && bound_violations == 0, d.str()};
}

Outcome criterion1() { return lgen_exhaustive(lgen_params({1, 1}), 10, 88573); }

Outcome criterion2() {
  const Outcome a = lgen_exhaustive(lgen_params({2, 1}), 10, 88573);
  const Outcome b = lgen_exhaustive(lgen_params({1, 1, 1}), 8, 87381);
  return {a.pass && b.pass, a.detail + "; " + b.detail};
}

Outcome criterion3() {
  std::size_t pairs = 0;
  std::size_t wrong = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    std::vector<std::string> words;
    Corpus{"AB", n, std::nullopt}.for_each([&](std::string_view w) {
      if (w.size() == n) words.emplace_back(w);
    });
    for (const auto& x : words)
      for (const auto& y : words) {
        ++pairs;
        if (aw_product_check(x, y) != (x == y)) ++wrong;
      }
  }
  return {pairs == 5460 && wrong == 0,
          std::to_string(pairs) + " word pairs with 1 <= n <= 6, " + std::to_string(wrong) + " mismatches"};
}

Outcome criterion4() {
  const MachineSpec m = build_lpat();
  std::size_t bound_violations = 0;
  DifferentialOptions options;
  options.shape = count_blocks;
  options.observer = [&](std::string_view x, const RunResult& r) {
    if (r.counter_reversals > 2 * count_blocks(x)) ++bound_violations;
  };
  const auto report = differential_test(m, oracle_lpat, Corpus{"01#", 12, std::nullopt}, options);
  const std::size_t limited = report.verdicts.count(Verdict::step_limit) ? report.verdicts.at(Verdict::step_limit) : 0;
  std::ostringstream d;
  d << report.total << " strings, " << report.disagreements.size() << " disagreements, " << limited
    << " step-limit verdicts, " << bound_violations << " runs over 2 reversals per block (" << join_verdicts(report)
    << "); max counter reversals by block count:";
  for (const auto& [blocks, rev] : report.max_counter_reversals_by_shape) d << ' ' << blocks << "->" << rev;
  return {report.ok() && report.total == 797161 && limited == 0 && bound_violations == 0, d.str()};
}

Outcome criterion5() {
  std::string detail;
  bool pass = true;
  for (auto v : {Visibility::deterministic, Visibility::partially_blind}) {
    const auto report = differential_test(build_lpal(v), oracle_lpal, Corpus{"01#", 12, std::nullopt});
    const bool ok = report.ok() && report.total == 797161 && report.max_head_reversals == 0;
    pass = pass && ok;
    detail += std::string(detail.empty() ? "" : "; ") + to_string(v) + ": " + std::to_string(report.total) +
              " strings, " + std::to_string(report.disagreements.size()) + " disagreements, max head reversals " +
              std::to_string(report.max_head_reversals);
  }
  return {pass, detail};
}

Outcome criterion6() {
  const LGenParams params = lgen_params({1, 1});
  const MachineSpec original = build_lgen(params);
  const MachineSpec matrix = real_to_matrix(original);
  std::size_t acceptance_mismatches = 0;
  std::size_t total = 0;
  std::size_t crash_only_original = 0;
  Corpus{"abc", 10, std::nullopt}.for_each([&](std::string_view x) {
    const RunResult a = run(original, x);
    const RunResult b = run(matrix, x);
    ++total;
    if (a.accepted() != b.accepted()) ++acceptance_mismatches;
    if (a.verdict == Verdict::crash && b.verdict != Verdict::crash) ++crash_only_original;
  });

  // 1000 uniform random strings plus 1000 random a^i b^j c^k, both seeded.
  std::vector<std::string> inputs = Corpus{"abc", 40, RandomSample{1000, 20240601}}.strings();
  std::mt19937_64 rng(777);
  for (int i = 0; i < 1000; ++i) {
    auto len = [&] { return static_cast<std::size_t>(rng() % 25); };
    const std::size_t n = len();
    inputs.push_back(std::string(n, 'a') + std::string(rng() % 2 ? n : len(), 'b') +
                     std::string(rng() % 2 ? n : len(), 'c'));
  }
  std::size_t lockstep_mismatches = 0;
  std::size_t steps = 0;
  for (const auto& x : inputs) {
    const LockstepReport r = lockstep_identity(original, matrix, x);
    steps += r.steps_compared;
    if (r.first_mismatch) ++lockstep_mismatches;
  }
  std::ostringstream d;
  d << total << " strings, " << acceptance_mismatches << " acceptance mismatches (" << crash_only_original
    << " inputs crash only the original, both reject); lockstep on " << inputs.size() << " seeded inputs, "
    << steps << " configurations compared, " << lockstep_mismatches << " is_identity mismatches";
  return {acceptance_mismatches == 0 && lockstep_mismatches == 0 && total == 88573, d.str()};
}

// Same counter as L_gen k=3 with one looping state. It accepts the letters in
// any order, given equal counts and no prefix driving the counter negative.
// Segments entered and left in the loop state can hold different letters, so
// swaps really reorder the input.
MachineSpec balanced_machine() {
  MachineSpec m = build_lgen(lgen_params({1, 1}));
  m.name = "balanced";
  m.states.clear();
  m.accept.clear();
  m.transitions.clear();
  const auto start = m.add_state("start");
  const auto loop = m.add_state("loop");
  const auto accept = m.add_state("accept", true);
  m.start = start;
  m.on(start, kLeftEnd, std::nullopt, {loop, +1, CounterOp::noop()});
  m.on(loop, 'a', std::nullopt, {loop, +1, CounterOp::increment(0)});
  m.on(loop, 'b', std::nullopt, {loop, +1, CounterOp::decrement(1)});
  m.on(loop, 'c', std::nullopt, {loop, +1, CounterOp::decrement(2)});
  m.on(loop, kRightEnd, std::nullopt, {accept, 0, CounterOp::noop()});
  return m;
}

struct InterchangeTally {
  std::size_t pass = 0, fail = 0, inconclusive = 0, changed = 0;
};

// Random decompositions of x with r segments inside [start, start + span).
void interchange_trials(const MachineSpec& m, const std::string& x, std::size_t start, std::size_t span,
                        std::mt19937_64& rng, InterchangeTally& tally) {
  const std::size_t r = interchange_segment_count(m);
  // Cut the window into at least r consecutive pieces, keep r of them as the
  // w_i; the others, together with the rest of x, form the v_i.
  std::vector<std::size_t> points;
  for (std::size_t i = 1; i < span; ++i) points.push_back(start + i);
  std::shuffle(points.begin(), points.end(), rng);
  const std::size_t extra = std::min<std::size_t>(points.size(), r - 1 + rng() % r);
  std::vector<std::size_t> cuts(points.begin(), points.begin() + static_cast<std::ptrdiff_t>(extra));
  cuts.push_back(start);
  cuts.push_back(start + span);
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::size_t> piece(cuts.size() - 1);
  std::iota(piece.begin(), piece.end(), 0);
  std::shuffle(piece.begin(), piece.end(), rng);
  piece.resize(r);
  std::sort(piece.begin(), piece.end());
  Decomposition d{x, {}};
  for (auto p : piece) d.segments.push_back({cuts[p], cuts[p + 1] - cuts[p]});
  const InterchangeReport report = interchange_test(m, d);
  switch (report.outcome) {
    case InterchangeOutcome::pass:
      ++tally.pass;
      tally.changed += report.swapped != x;
      break;
    case InterchangeOutcome::fail: ++tally.fail; break;
    default: ++tally.inconclusive;
  }
}

Outcome criterion7() {
  const std::vector<LGenParams> families = {lgen_params({1, 1}), lgen_params({2, 1}), lgen_params({1, 1, 1}),
                                            lgen_params({1, 3})};
  std::mt19937_64 rng(4242);
  InterchangeTally lgen;
  for (const auto& params : families) {
    const MachineSpec m = build_lgen(params);
    const std::size_t r = interchange_segment_count(m);
    const std::string symbols = params.symbol_string();
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t n = r + rng() % 40;
      std::string x(n, symbols[0]);
      for (std::size_t i = 1; i < symbols.size(); ++i) x += std::string(params.multipliers[i - 1] * n, symbols[i]);
      // Even trials put the window right after the a-block with span <= n,
      // which meets the counter bound; odd trials place it anywhere.
      if (trial % 2 == 0) {
        interchange_trials(m, x, n, r + rng() % (n - r + 1), rng, lgen);
      } else {
        const std::size_t start = 1 + rng() % (x.size() - r);
        interchange_trials(m, x, start, r + rng() % (x.size() - start - r + 1), rng, lgen);
      }
    }
  }

  InterchangeTally balanced;
  const MachineSpec shuffle_machine = balanced_machine();
  const std::size_t r = interchange_segment_count(shuffle_machine);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = r + rng() % 30;
    std::string tail = std::string(n, 'b') + std::string(n, 'c');
    std::shuffle(tail.begin(), tail.end(), rng);
    interchange_trials(shuffle_machine, std::string(n, 'a') + tail, n, r + rng() % (n - r + 1), rng, balanced);
  }

  std::ostringstream d;
  d << "L_gen family: " << lgen.pass << " passing decompositions, " << lgen.fail << " failures, " << lgen.inconclusive
    << " inconclusive (counter bound unmet); every swap there exchanges equal letters (" << lgen.changed
    << " changed strings). Balanced a/b/c machine: " << balanced.pass << " passing, " << balanced.changed
    << " with a changed string, " << balanced.fail << " failures, " << balanced.inconclusive << " inconclusive";
  return {lgen.pass >= 100 && lgen.fail == 0 && balanced.fail == 0 && balanced.changed > 0, d.str()};
}

Outcome criterion8() {
  using Float = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<256, boost::multiprecision::digit_base_2>>;
  const std::vector<std::uint64_t> pool{2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<long long> coeff(-1'000'000, 1'000'000);
  std::size_t agree = 0, disagree = 0, unresolved = 0, near = 0;
  for (int trial = 0; trial < 10'000; ++trial) {
    const std::size_t k = 1 + rng() % 4;
    std::vector<std::uint64_t> primes = pool;
    std::shuffle(primes.begin(), primes.end(), rng);
    primes.resize(k);
    std::vector<long long> c(k);
    for (auto& x : c) x = coeff(rng);
    if (trial % 2 == 1 && k >= 2) {
      // Choose the last coefficient to nearly cancel the others.
      double partial = 0;
      for (std::size_t i = 0; i + 1 < k; ++i) partial += static_cast<double>(c[i]) * std::sqrt(double(primes[i]));
      const long long last = std::llround(-partial / std::sqrt(double(primes[k - 1])));
      if (last >= -1'000'000 && last <= 1'000'000) {
        c[k - 1] = last;
        ++near;
      }
    }
    if (trial % 997 == 0) std::fill(c.begin(), c.end(), 0);
    Float sum = 0;
    Float scale = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const Float term = Float(c[i]) * sqrt(Float(primes[i]));
      sum += term;
      scale += abs(term);
    }
    // The float evaluation is only trusted when |sum| clears its rounding error.
    const Float tolerance = (scale + 1) * ldexp(Float(1), -240);
    Sign expected = Sign::zero;
    const bool all_zero = std::all_of(c.begin(), c.end(), [](long long v) { return v == 0; });
    if (!all_zero) {
      if (abs(sum) <= tolerance) {
        ++unresolved;
        continue;
      }
      expected = sum < 0 ? Sign::negative : Sign::positive;
    }
    const Sign got = real_sign(primes, Coeffs(c.begin(), c.end()));
    (got == expected ? agree : disagree) += 1;
  }

  // Group law: every op is undone exactly by its inverse, across all counter kinds.
  const std::vector<CounterSpec> specs = {
      IntegerSpec{{BigInt(1), BigInt(2), BigInt(7)}},
      RealSqrtSpec({2, 3, 5, 7}, {Coeffs{1, 1, 1, 1}, Coeffs{1, 0, 0, 0}, Coeffs{0, -1, 2, 0}, Coeffs{0, 0, 0, 1}}),
      aw_counter(),
      CounterSpec(MatrixSpec(1, {RationalMatrix::scalar(6), RationalMatrix::scalar(Rational(2, 3))})),
      CounterSpec(MatrixSpec(2, {RationalMatrix::from_scaled(2, {1, 1, 0, 1}, 1),
                                 RationalMatrix::from_scaled(2, {2, 0, 1, 3}, 5)})),
  };
  std::size_t round_trips = 0, broken = 0;
  for (const auto& spec : specs) {
    for (int walk = 0; walk < 40; ++walk) {
      CounterValue value = identity(spec);
      std::vector<CounterOp> ops;
      for (int i = 0; i < 25; ++i) {
        const std::size_t j = rng() % spec.generator_count();
        const CounterOp op = rng() % 3 == 0 ? CounterOp::decrement(j) : CounterOp::increment(j);
        const CounterValue next = apply(spec, value, op);
        ++round_trips;
        if (!(apply(spec, next, op.inverse()) == value)) ++broken;
        value = next;
        ops.push_back(op);
      }
      for (auto it = ops.rbegin(); it != ops.rend(); ++it) value = apply(spec, value, it->inverse());
      ++round_trips;
      if (!is_identity(spec, value)) ++broken;
    }
  }
  std::ostringstream d;
  d << agree << "/" << (agree + disagree) << " signs agree with 256-bit evaluation (" << near
    << " near-cancelling vectors, " << unresolved << " left unresolved by the float oracle); " << round_trips
    << " group-law round trips, " << broken << " broken";
  return {disagree == 0 && unresolved == 0 && agree == 10'000 && broken == 0, d.str()};
}

Outcome criterion9() {
  using gca::testing::gca_cli;
  const std::string dir = GCA_WORK_DIR;
  std::vector<std::string> problems;

  // Round trip of every builder output, in process and through `gca build`.
  struct Built {
    std::string args;
    MachineSpec spec;
  };
  LGenParams l21 = lgen_params({2, 1});
  LGenParams k4 = lgen_params({1, 1, 1});
  const std::vector<Built> builds = {
      {"--family lgen --k 3 --l 1,1 --primes 2,3", build_lgen(lgen_params({1, 1}))},
      {"--family lgen --k 3 --l 2,1", build_lgen(l21)},
      {"--family lgen --k 4", build_lgen(k4)},
      {"--family lpat", build_lpat()},
      {"--family lpal", build_lpal()},
      {"--family lpal --visibility partially-blind", build_lpal(Visibility::partially_blind)},
  };
  for (const auto& b : builds) {
    const std::string text = emit_machine(b.spec);
    if (!(parse_machine(text) == b.spec)) problems.push_back("in-process round trip failed for " + b.args);
    const auto cli = gca_cli("build " + b.args);
    if (cli.exit_code != 0 || cli.out != text) problems.push_back("gca build " + b.args + " differs");
    else if (!(parse_machine(cli.out) == b.spec)) problems.push_back("gca build " + b.args + " does not parse back");
  }
  const MachineSpec transformed = real_to_matrix(build_lgen(lgen_params({1, 1})));
  if (!(parse_machine(emit_machine(transformed)) == transformed)) problems.push_back("transform round trip failed");

  gca::testing::write_file(dir + "/acc_lgen.machine", emit_machine(build_lgen(lgen_params({1, 1}))));
  gca::testing::write_file(dir + "/acc_lpat.machine", emit_machine(build_lpat()));
  gca::testing::write_file(dir + "/acc_bad.machine", "[machine]\nname = x\nvisibility = fuzzy\n");
  const std::string lgen = "'" + dir + "/acc_lgen.machine'";
  const std::string lpat = "'" + dir + "/acc_lpat.machine'";

  struct Expect {
    std::string args;
    int code;
  };
  const std::vector<Expect> codes = {
      {"run " + lgen + " aabbcc", 0},
      {"run " + lgen + " aabbc", 1},
      {"run " + lgen + " abbc", 1},
      {"run " + lpat + " '0#1#1#1#' --max-steps 3", 1},
      {"run " + lgen + " aaxbb", 2},
      {"run '" + dir + "/acc_bad.machine' a", 2},
      {"check " + lgen + " --oracle lgen --max-len 6", 0},
      {"check " + lgen + " --oracle lgen --l 1,2 --max-len 6", 1},
      {"check " + lgen + " --oracle nope --max-len 6", 2},
      {"build --family lgen --primes 2,2", 2},
      {"transform " + lgen, 0},
      {"transform " + lpat, 2},
      {"no-such-command", 2},
  };
  for (const auto& e : codes) {
    const int got = gca_cli(e.args).exit_code;
    if (got != e.code)
      problems.push_back("'" + e.args + "' exited " + std::to_string(got) + ", expected " + std::to_string(e.code));
  }

  const std::vector<std::string> repeat = {
      "run " + lpat + " '01#1#01#' --trace",
      "check " + lpat + " --oracle lpat --max-len 7 --format jsonl",
      "check " + lgen + " --oracle lgen --l 2,1 --max-len 5",
      "transform " + lgen,
  };
  for (const auto& args : repeat) {
    const auto a = gca_cli(args);
    const auto b = gca_cli(args);
    if (a.out != b.out || a.exit_code != b.exit_code || a.out.empty())
      problems.push_back("'" + args + "' is not byte-identical across runs");
  }

  std::ostringstream d;
  d << builds.size() << " builder outputs round-tripped, " << codes.size() << " exit codes checked, "
    << repeat.size() << " reports repeated";
  for (const auto& p : problems) d << "; " << p;
  return {problems.empty(), d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"L_gen k=3 l=(1,1) exhaustive, reversal bounds", criterion1},
      {"L_gen l=(2,1) and k=4 exhaustive", criterion2},
      {"A/B word separation, n <= 6", criterion3},
      {"L_pat exhaustive, two reversals per block", criterion4},
      {"L_pal exhaustive, no head reversals", criterion5},
      {"real-to-matrix transform agreement and lockstep", criterion6},
      {"interchange property on L_gen", criterion7},
      {"exact sign certification and group law", criterion8},
      {"CLI round trips, exit codes, determinism", criterion9},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.1fs", secs);
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " - " << criteria[i].first << " ["
              << timing << "] " << o.detail << std::endl;
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
