// gca: command-line front end for generalized counter machines.
//
// Exit codes:
//   0  accepted input or successful command
//   1  non-accepting verdict or failed check
//   2  usage or parse error

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gca/automaton.hpp"
#include "gca/machine_file.hpp"
#include "gca/machines.hpp"
#include "gca/oracle.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kRejected = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

gca::MachineSpec load(const std::string& path) {
  try {
    return gca::load_machine_file(path);
  } catch (const gca::ParseError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

void print_trace_line(const gca::MachineSpec& spec, const gca::Configuration& c, const gca::Tape& tape,
                      std::size_t step, const std::string& op) {
  std::cout << step << ' ' << spec.states[c.state] << ' ' << c.head << ' ' << tape.at(c.head) << ' ' << op << ' '
            << gca::render(spec.counter, c.counter) << '\n';
}

int cmd_run(const std::string& file, const std::string& input, bool with_trace, std::size_t max_steps) {
  const gca::MachineSpec spec = load(file);
  gca::RunResult r;
  try {
    r = with_trace ? gca::trace(spec, input, {max_steps}) : gca::run(spec, input, {max_steps});
  } catch (const gca::InputError& e) {
    throw UsageError(e.what());
  }
  if (with_trace) {
    const gca::Tape tape = gca::Tape::load(spec, input);
    std::cout << "trace:\n";
    for (const auto& e : *r.trace) print_trace_line(spec, e.before, tape, e.step, gca::to_string(e.transition.op));
    print_trace_line(spec, r.final_configuration, tape, r.steps, "-");
  }
  std::cout << "machine: " << spec.name << '\n'
            << "verdict: " << gca::to_string(r.verdict) << '\n'
            << "steps: " << r.steps << '\n'
            << "head_reversals: " << r.head_reversals << '\n'
            << "counter_reversals: " << r.counter_reversals << '\n'
            << "counter: " << gca::render(spec.counter, r.final_configuration.counter) << '\n';
  return r.accepted() ? kOk : kRejected;
}

struct CheckOptions {
  std::string oracle;
  std::size_t max_len = 0;
  std::vector<std::uint64_t> multipliers;
  std::size_t random_count = 0;
  std::uint64_t seed = 0;
  std::size_t max_steps = 1'000'000;
  std::string format = "text";
};

int cmd_check(const std::string& file, const CheckOptions& opt) {
  const gca::MachineSpec spec = load(file);
  gca::LanguagePredicate oracle;
  std::function<std::size_t(std::string_view)> shape;
  if (opt.oracle == "lgen") {
    gca::LGenParams params;
    params.symbols = spec.alphabet;
    params.multipliers = opt.multipliers;
    if (params.multipliers.empty()) params.multipliers.assign(spec.alphabet.size() - 1, 1);
    if (params.multipliers.size() + 1 != spec.alphabet.size())
      throw UsageError("--l needs one multiplier per non-initial symbol (" + std::to_string(spec.alphabet.size() - 1) +
                       ")");
    oracle = [params](std::string_view x) { return gca::oracle_lgen(params, x); };
  } else if (opt.oracle == "lpat") {
    oracle = gca::oracle_lpat;
    shape = gca::count_blocks;
  } else if (opt.oracle == "lpal") {
    oracle = gca::oracle_lpal;
  } else {
    throw UsageError("unknown oracle '" + opt.oracle + "' (expected lgen, lpat or lpal)");
  }

  gca::Corpus corpus{spec.alphabet, opt.max_len, std::nullopt};
  if (opt.random_count > 0) corpus.sample = gca::RandomSample{opt.random_count, opt.seed};
  gca::DifferentialOptions options;
  options.limits.max_steps = opt.max_steps;
  options.shape = shape;
  const gca::DifferentialReport report = gca::differential_test(spec, oracle, corpus, options);

  if (opt.format == "jsonl") {
    for (const auto& d : report.disagreements) {
      nlohmann::json rec = {{"type", "disagreement"},
                            {"index", d.index},
                            {"input", d.input},
                            {"machine", gca::to_string(d.machine)},
                            {"oracle", d.oracle}};
      std::cout << rec.dump() << '\n';
    }
    nlohmann::json verdicts = nlohmann::json::object();
    for (const auto& [v, n] : report.verdicts) verdicts[gca::to_string(v)] = n;
    nlohmann::json by_shape = nlohmann::json::object();
    for (const auto& [s, n] : report.max_counter_reversals_by_shape) by_shape[std::to_string(s)] = n;
    nlohmann::json summary = {{"type", "summary"},
                              {"corpus", report.total},
                              {"disagreements", report.disagreements.size()},
                              {"verdicts", verdicts},
                              {"max_counter_reversals", report.max_counter_reversals},
                              {"max_head_reversals", report.max_head_reversals},
                              {"max_counter_reversals_by_shape", by_shape}};
    std::cout << summary.dump() << '\n';
  } else {
    for (const auto& d : report.disagreements)
      std::cout << "disagreement #" << d.index << ": input \"" << d.input << "\" machine "
                << gca::to_string(d.machine) << ", oracle " << (d.oracle ? "accept" : "reject") << '\n';
    std::cout << "corpus: " << report.total << '\n' << "disagreements: " << report.disagreements.size() << '\n';
    std::cout << "verdicts:";
    for (const auto& [v, n] : report.verdicts) std::cout << ' ' << gca::to_string(v) << '=' << n;
    std::cout << '\n'
              << "max_counter_reversals: " << report.max_counter_reversals << '\n'
              << "max_head_reversals: " << report.max_head_reversals << '\n';
    const char* label = shape ? "blocks" : "length";
    for (const auto& [s, n] : report.max_counter_reversals_by_shape)
      std::cout << "max_counter_reversals[" << label << '=' << s << "]: " << n << '\n';
  }
  return report.ok() ? kOk : kRejected;
}

struct BuildOptions {
  std::string family;
  std::size_t k = 3;
  std::vector<std::uint64_t> multipliers;
  std::vector<std::uint64_t> primes;
  std::string visibility = "deterministic";
  std::string out;
};

int cmd_build(const BuildOptions& opt) {
  gca::MachineSpec spec;
  try {
    if (opt.family == "lgen") {
      if (opt.k < 2) throw UsageError("--k must be at least 2");
      gca::LGenParams params = gca::LGenParams::uniform(opt.k);
      if (!opt.multipliers.empty()) params.multipliers = opt.multipliers;
      if (!opt.primes.empty()) params.primes = opt.primes;
      spec = gca::build_lgen(params);
    } else if (opt.family == "lpat") {
      spec = gca::build_lpat();
    } else if (opt.family == "lpal") {
      if (opt.visibility == "deterministic")
        spec = gca::build_lpal(gca::Visibility::deterministic);
      else if (opt.visibility == "partially-blind")
        spec = gca::build_lpal(gca::Visibility::partially_blind);
      else
        throw UsageError("--visibility must be deterministic or partially-blind");
    } else {
      throw UsageError("unknown family '" + opt.family + "' (expected lgen, lpat or lpal)");
    }
  } catch (const gca::SpecError& e) {
    throw UsageError(e.what());
  }
  write_output(opt.out, gca::emit_machine(spec));
  return kOk;
}

int cmd_transform(const std::string& file, const std::string& out) {
  const gca::MachineSpec spec = load(file);
  try {
    write_output(out, gca::emit_machine(gca::real_to_matrix(spec)));
  } catch (const gca::SpecError& e) {
    throw UsageError(e.what());
  }
  return kOk;
}

int cmd_validate(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw UsageError("cannot open " + file);
  std::ostringstream text;
  text << in.rdbuf();
  gca::MachineSpec spec;
  try {
    spec = gca::parse_machine(text.str());
  } catch (const gca::ParseError& e) {
    std::cout << "invalid: " << e.what() << '\n';
    return kRejected;
  }
  const gca::ValidationReport report = gca::validate_machine(spec);
  for (const auto& w : report.warnings) std::cout << "warning: " << w << '\n';
  std::cout << "valid\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized counter automata: run, check, build and transform machines"};
  app.require_subcommand(1);

  std::string file;
  std::string input;
  bool with_trace = false;
  std::size_t max_steps = 1'000'000;
  auto* run = app.add_subcommand("run", "Run a machine on one input");
  run->add_option("machine", file, "Machine file")->required();
  run->add_option("input", input, "Input string (symbols from the machine alphabet)")->required();
  run->add_flag("--trace", with_trace, "Print one line per configuration");
  run->add_option("--max-steps", max_steps, "Step limit")->capture_default_str();

  CheckOptions check_opt;
  auto* check = app.add_subcommand("check", "Compare a machine with a language oracle on a corpus");
  check->add_option("machine", file, "Machine file")->required();
  check->add_option("--oracle", check_opt.oracle, "lgen, lpat or lpal")->required();
  check->add_option("--max-len", check_opt.max_len, "Longest input in the corpus")->required();
  check->add_option("--l", check_opt.multipliers, "lgen multipliers l1,l2,...")->delimiter(',');
  check->add_option("--random", check_opt.random_count, "Sample this many random inputs instead of enumerating");
  check->add_option("--seed", check_opt.seed, "Seed for --random")->capture_default_str();
  check->add_option("--max-steps", check_opt.max_steps, "Step limit per run")->capture_default_str();
  check->add_option("--format", check_opt.format, "text or jsonl")
      ->check(CLI::IsMember({"text", "jsonl"}))
      ->capture_default_str();

  BuildOptions build_opt;
  auto* build = app.add_subcommand("build", "Write a machine file for one of the built-in families");
  build->add_option("--family", build_opt.family, "lgen, lpat or lpal")->required();
  build->add_option("--k", build_opt.k, "lgen: number of symbol classes")->capture_default_str();
  build->add_option("--l", build_opt.multipliers, "lgen: multipliers l1,l2,...")->delimiter(',');
  build->add_option("--primes", build_opt.primes, "lgen: distinct primes p1,p2,...")->delimiter(',');
  build->add_option("--visibility", build_opt.visibility, "lpal: deterministic or partially-blind")
      ->capture_default_str();
  build->add_option("--out", build_opt.out, "Output path (stdout when omitted)");

  std::string transform_out;
  auto* transform = app.add_subcommand("transform", "Rewrite a real-sqrt machine over a 1x1 matrix counter");
  transform->add_option("machine", file, "Machine file")->required();
  transform->add_option("--out", transform_out, "Output path (stdout when omitted)");

  auto* validate = app.add_subcommand("validate", "Parse and validate a machine file");
  validate->add_option("machine", file, "Machine file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(file, input, with_trace, max_steps);
    if (*check) return cmd_check(file, check_opt);
    if (*build) return cmd_build(build_opt);
    if (*transform) return cmd_transform(file, transform_out);
    if (*validate) return cmd_validate(file);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
