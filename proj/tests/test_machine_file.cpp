// Machine file format: round trips and diagnostics.

#include <catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "gca/machine_file.hpp"
#include "gca/machines.hpp"
#include "gca/oracle.hpp"

using namespace gca;

namespace {

std::string sample_path(const std::string& name) { return std::string(GCA_SAMPLES_DIR) + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

const char* const kSmall = R"(// comment
[machine]
name = tiny
head_mode = one-way
visibility = deterministic

[counter]
kind = integer
generator = 1

[states]
states = s t
start = s
accept = t

[alphabet]
symbols = a

[transitions]
s ^ * s +1 noop
s a * s +1 inc:0
s $ 1 t 0 noop
)";

/// Replaces the first occurrence of `from` in kSmall.
std::string small_with(const std::string& from, const std::string& to) {
  std::string text = kSmall;
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  text.replace(pos, from.size(), to);
  return text;
}

std::size_t error_line(const std::string& text) {
  try {
    parse_machine(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  FAIL("expected a parse error");
  return 0;
}

std::string error_message(const std::string& text) {
  try {
    parse_machine(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  FAIL("expected a parse error");
  return {};
}

}  // namespace

TEST_CASE("builder outputs round-trip through the file format") {
  std::vector<MachineSpec> machines = {
      build_lgen(LGenParams::uniform(2)),
      build_lgen(LGenParams::uniform(3)),
      build_lgen(LGenParams::uniform(5)),
      build_lpat(),
      build_lpal(Visibility::deterministic),
      build_lpal(Visibility::partially_blind),
  };
  LGenParams l21 = LGenParams::uniform(3);
  l21.multipliers = {2, 1};
  machines.push_back(build_lgen(l21));
  machines.push_back(real_to_matrix(build_lgen(LGenParams::uniform(3))));
  for (const auto& m : machines) {
    const std::string text = emit_machine(m);
    const MachineSpec back = parse_machine(text);
    CHECK(back == m);
    CHECK(emit_machine(back) == text);
  }
}

TEST_CASE("hand-written samples parse, run and round-trip") {
  const MachineSpec anbn = load_machine_file(sample_path("anbn.machine"));
  CHECK(run(anbn, "aabb").accepted());
  CHECK(run(anbn, "").accepted());
  CHECK(run(anbn, "abb").verdict == Verdict::crash);
  CHECK(run(anbn, "aab").verdict == Verdict::reject);
  CHECK(parse_machine(emit_machine(anbn)) == anbn);

  const MachineSpec even = load_machine_file(sample_path("even_ab.machine"));
  CHECK(run(even, "abba").accepted());
  CHECK(run(even, "bbaa").accepted());
  CHECK_FALSE(run(even, "aab").accepted());
  CHECK(run(even, "ab").head_reversals == 2);
  CHECK(parse_machine(emit_machine(even)) == even);
}

TEST_CASE("shipped machine files match the builders") {
  CHECK(load_machine_file(sample_path("lgen.machine")) == build_lgen(LGenParams::uniform(3)));
  CHECK(load_machine_file(sample_path("lpat.machine")) == build_lpat());
  CHECK(load_machine_file(sample_path("lpal.machine")) == build_lpal());
  CHECK(read_file(sample_path("lgen.machine")) == emit_machine(build_lgen(LGenParams::uniform(3))));
}

TEST_CASE("status columns") {
  const MachineSpec m = parse_machine(kSmall);
  CHECK(m.find(0, '$', Status::nonzero) != nullptr);
  CHECK(m.find(0, '$', Status::zero) == nullptr);
  CHECK(m.find(0, 'a', Status::zero) != nullptr);
  CHECK(run(m, "a").accepted() == false);  // counter not empty
  CHECK(run(m, "").accepted() == false);   // status 0 has no $ entry
}

TEST_CASE("diagnostics carry line numbers") {
  CHECK(error_line(small_with("head_mode = one-way", "head_mode = sideways")) == 4);
  CHECK(error_line(small_with("[alphabet]", "[letters]")) == 16);
  CHECK(error_line(small_with("kind = integer", "kind = integer\nprimes = 2")) == 9);
  CHECK(error_line(small_with("s a * s +1 inc:0", "s a * s +2 inc:0")) == 21);
  CHECK(error_line(small_with("s a * s +1 inc:0", "s a * s +1 push")) == 21);
  CHECK(error_line(small_with("s a * s +1 inc:0", "s a * nowhere +1 inc:0")) == 21);
  CHECK(error_line(small_with("s a * s +1 inc:0", "s a * s +1 inc:0\ns a 0 s +1 noop")) == 22);
  CHECK(error_line(small_with("generator = 1", "generator = x")) == 9);
  CHECK(error_line(small_with("name = tiny", "name = tiny\nname = again")) == 4);
  CHECK(error_line(small_with("symbols = a", "symbols = ab")) == 17);
  CHECK(error_line(small_with("s ^ * s +1 noop", "s ^ * s")) == 20);
}

TEST_CASE("semantic errors are reported") {
  CHECK(error_message(small_with("visibility = deterministic", "visibility = partially-blind"))
            .find("blind machines must use status *") != std::string::npos);
  CHECK(error_message(small_with("s a * s +1 inc:0", "s a * s +1 inc:3")).find("generator 3 out of range") !=
        std::string::npos);
  CHECK(error_message(small_with("s a * s +1 inc:0", "s a * s -1 inc:0")).find("one-way machine moves left") !=
        std::string::npos);
  CHECK(error_message(small_with("symbols = a", "symbols = a $")).find("endmarker") != std::string::npos);
  CHECK(error_message(small_with("[states]", "")).find("unknown key 'states' in [counter]") != std::string::npos);
  CHECK_THROWS_AS(load_machine_file(sample_path("missing.machine")), ParseError);
}

TEST_CASE("rational entries serialize canonically") {
  MachineSpec m = build_lpat();
  const AWMatrices aw = AWMatrices::standard();
  m.counter = CounterSpec(MatrixSpec(3, {matrix_inverse(aw.a), matrix_inverse(aw.b)}));
  const std::string text = emit_machine(m);
  CHECK(text.find("generator = [[4/25,-3/25,0],[3/25,4/25,0],[0,0,1/5]]") != std::string::npos);
  CHECK(parse_machine(text) == m);
}
