#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

#include "kreinkit/defaults.hpp"
#include "kreinkit/matrix.hpp"
#include "kreinkit/matrix_io.hpp"

using namespace kreinkit;

// End-to-end tests of the command line binary.  The path comes in through
// KREINKIT_CLI_PATH at compile time; every case spawns the real executable
// and inspects exit code, the JSON report on stdout, or the human lines on
// stderr.

namespace {

struct CliRun {
  int exit_code = -1;
  std::string output;
};

// Runs the binary through the shell.  By default stdout (the JSON report)
// is captured and stderr dropped; with capture_stderr the roles flip.
CliRun run_cli(const std::string& args, const std::string& env = "",
               bool capture_stderr = false) {
  std::string cmd;
  if (!env.empty()) cmd += env + " ";
  cmd += KREINKIT_CLI_PATH;
  if (!args.empty()) cmd += " " + args;
  cmd += capture_stderr ? " 2>&1 >/dev/null" : " 2>/dev/null";

  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliRun run;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
    run.output.append(buf, got);
  }
  const int status = pclose(pipe);
  run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return run;
}

nlohmann::json parse_report(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  REQUIRE_MESSAGE(!doc.is_discarded(), "stdout is not JSON: " << text);
  return doc;
}

std::optional<nlohmann::json> find_check(const nlohmann::json& doc,
                                         const std::string& name) {
  for (const auto& check : doc.at("checks")) {
    if (check.at("name") == name) return check;
  }
  return std::nullopt;
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

// Frozen operands shared by the file-based subcommands.
std::string write_operand_a() {
  ComplexMatrix a(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = -1.0;
  save_matrix("cli_fixture_a.json", a, "operand");
  return "cli_fixture_a.json";
}

std::string write_contraction_c() {
  ComplexMatrix c(2, 2);
  c(0, 0) = 0.5;
  c(1, 1) = 2.0;
  save_matrix("cli_fixture_c.json", c);
  return "cli_fixture_c.json";
}

std::string write_symmetry_j() {
  ComplexMatrix j(2, 2);
  j(0, 0) = 1.0;
  j(1, 1) = -1.0;
  save_matrix("cli_fixture_j.json", j, "fundamental-symmetry");
  return "cli_fixture_j.json";
}

std::string write_nilpotent() {
  ComplexMatrix n(2, 2);
  n(0, 1) = 1.0;
  save_matrix("cli_fixture_nilpotent.json", n);
  return "cli_fixture_nilpotent.json";
}

std::string write_tall_a() {
  ComplexMatrix a(3, 3);
  a(0, 0) = 1.0;
  a(1, 1) = 1.0;
  a(2, 2) = -1.0;
  save_matrix("cli_fixture_a3.json", a);
  return "cli_fixture_a3.json";
}

void drop(const std::string& path) { std::remove(path.c_str()); }

}  // namespace

TEST_CASE("repro replays every frozen check and is byte-stable") {
  const CliRun first = run_cli("repro");
  REQUIRE(first.exit_code == 0);
  const nlohmann::json doc = parse_report(first.output);

  CHECK(doc.at("schema") == "kreinkit-report/1");
  CHECK(doc.at("command") == "repro");
  CHECK(doc.at("version") == "1.0.0");
  CHECK(doc.at("overall_pass") == true);
  CHECK(doc.at("master_seed").get<std::uint64_t>() ==
        defaults::master_seed_value());
  CHECK(doc.at("checks").size() == 21);
  for (const auto& check : doc.at("checks")) {
    CHECK_MESSAGE(check.at("passed") == true,
                  check.at("name").get<std::string>());
  }

  // The frozen midpoint gap appears with its exact rational entries.
  const auto witness = find_check(doc, "square-midpoint");
  REQUIRE(witness.has_value());
  CHECK(witness->at("verdict") == "geq");
  CHECK(contains(witness->at("details"), "[[0, 0], [0, -1/4]]"));

  // The square function's predicted obstruction counts as reproduced, not
  // as a failure; it is the only step reported through that lens.
  const auto midpoint = find_check(doc, "proof-chain-square/midpoint-convexity");
  REQUIRE(midpoint.has_value());
  CHECK(midpoint->at("verdict") == "indefinite");
  CHECK(midpoint->at("passed") == true);
  CHECK(contains(midpoint->at("details"), "fails as predicted"));
  const auto linear_midpoint =
      find_check(doc, "proof-chain-linear/midpoint-convexity");
  REQUIRE(linear_midpoint.has_value());
  CHECK(linear_midpoint->at("verdict") == "zero");

  // Same binary, same seed, same bytes.
  const CliRun second = run_cli("repro");
  CHECK(second.exit_code == 0);
  CHECK(second.output == first.output);
}

TEST_CASE("repro --only filters by id and rejects unknown ids") {
  const CliRun one = run_cli("repro --only square-midpoint");
  REQUIRE(one.exit_code == 0);
  const nlohmann::json doc = parse_report(one.output);
  REQUIRE(doc.at("checks").size() == 1);
  CHECK(doc.at("checks")[0].at("name") == "square-midpoint");
  CHECK(doc.at("checks")[0].at("verdict") == "geq");

  const CliRun again = run_cli("repro --only square-midpoint");
  CHECK(again.output == one.output);

  const CliRun sampled = run_cli("repro --only square-transformation");
  REQUIRE(sampled.exit_code == 0);
  CHECK(parse_report(sampled.output).at("checks").size() == 2);

  const CliRun bad = run_cli("repro --only nope", "", true);
  CHECK(bad.exit_code == 64);
  CHECK(contains(bad.output, "unknown check id 'nope'"));
  CHECK(contains(bad.output, "proof-chain-square"));
}

TEST_CASE("verify-jensen certifies, refutes, and screens from files") {
  const std::string a = write_operand_a();
  const std::string c = write_contraction_c();
  const std::string j = write_symmetry_j();

  // The square function satisfies the transformation inequality.
  const CliRun pass = run_cli("verify-jensen --f poly:0,0,1 --A " + a +
                              " --C " + c);
  REQUIRE(pass.exit_code == 0);
  const nlohmann::json doc = parse_report(pass.output);
  CHECK(doc.at("command") == "verify-jensen");
  CHECK(doc.at("overall_pass") == true);
  REQUIRE(doc.at("checks").size() == 1);
  CHECK(doc.at("checks")[0].at("verdict") == "leq");
  CHECK(contains(doc.at("checks")[0].at("details"), "[[3/16, 0], [0, 12]]"));

  // An explicit symmetry file and the equivalent Minkowski flag both
  // reproduce the default verdict.
  const CliRun with_j = run_cli("verify-jensen --f poly:0,0,1 --A " + a +
                                " --C " + c + " --J " + j);
  CHECK(with_j.exit_code == 0);
  CHECK(parse_report(with_j.output).at("checks")[0].at("verdict") == "leq");
  const CliRun with_mink = run_cli("verify-jensen --f poly:0,0,1 --A " + a +
                                   " --C " + c + " --minkowski 2");
  CHECK(with_mink.exit_code == 0);
  CHECK(with_mink.output == with_j.output);

  // The cube fails the inequality on the same operands: the report says
  // so and the process exits nonzero.
  const CliRun fail = run_cli("verify-jensen --f poly:0,0,0,1 --A " + a +
                              " --C " + c);
  CHECK(fail.exit_code == 1);
  const nlohmann::json fdoc = parse_report(fail.output);
  CHECK(fdoc.at("overall_pass") == false);
  CHECK(fdoc.at("checks")[0].at("verdict") == "incomparable");
  CHECK(contains(fdoc.at("checks")[0].at("details"),
                 "[[15/64, 0], [0, -60]]"));

  // The inverse is rejected up front: its excluded point sits at the
  // center of the functional calculus.
  const CliRun hyp = run_cli("verify-jensen --f inv --A " + a + " --C " + c,
                             "", true);
  CHECK(hyp.exit_code == 2);
  CHECK(contains(hyp.output, "hypothesis violated"));
  CHECK(contains(hyp.output, "excluded"));

  // Unreadable input file.
  const CliRun missing = run_cli(
      "verify-jensen --f poly:0,0,1 --A cli_fixture_absent.json --C " + c,
      "", true);
  CHECK(missing.exit_code == 64);
  CHECK(contains(missing.output, "cli_fixture_absent.json"));

  // Operand shapes that cannot be combined.
  const std::string a3 = write_tall_a();
  const CliRun shape = run_cli("verify-jensen --f poly:0,0,1 --A " + a3 +
                               " --C " + c, "", true);
  CHECK(shape.exit_code == 65);
  CHECK(contains(shape.output, "dimension mismatch"));

  drop(a);
  drop(c);
  drop(j);
  drop(a3);
}

TEST_CASE("funcalc agrees across routes and refuses defective spectra") {
  const std::string a = write_operand_a();
  const std::string nil = write_nilpotent();

  // Diagonalizable operand: both routes run and agree.
  const CliRun both = run_cli("funcalc --f exp --A " + a);
  REQUIRE(both.exit_code == 0);
  const nlohmann::json doc = parse_report(both.output);
  REQUIRE(doc.at("checks").size() == 3);
  CHECK(doc.at("checks")[0].at("name") == "contour");
  CHECK(doc.at("checks")[0].at("verdict") == "converged");
  CHECK(doc.at("checks")[1].at("name") == "spectral");
  CHECK(doc.at("checks")[1].at("verdict") == "computed");
  CHECK(doc.at("checks")[2].at("name") == "route-agreement");
  CHECK(doc.at("checks")[2].at("passed") == true);

  // A Jordan block has no eigenvector basis; asking for the spectral
  // route alone is a certification failure.
  const CliRun refused = run_cli("funcalc --f exp --A " + nil +
                                 " --method spectral", "", true);
  CHECK(refused.exit_code == 3);
  CHECK(contains(refused.output, "numerical certification failed"));

  // In both-mode the contour route carries the result and the spectral
  // refusal is reported as an expected outcome.
  const CliRun tolerated = run_cli("funcalc --f exp --A " + nil);
  REQUIRE(tolerated.exit_code == 0);
  const nlohmann::json tdoc = parse_report(tolerated.output);
  REQUIRE(tdoc.at("checks").size() == 2);
  CHECK(tdoc.at("checks")[0].at("name") == "contour");
  CHECK(tdoc.at("checks")[1].at("name") == "spectral");
  CHECK(tdoc.at("checks")[1].at("verdict") == "refused");
  CHECK(tdoc.at("checks")[1].at("passed") == true);
  CHECK(tdoc.at("overall_pass") == true);

  drop(a);
  drop(nil);
}

TEST_CASE("search reports found and exhausted outcomes") {
  const CliRun found = run_cli("search --f poly:0,0,1 --dim 2 --budget 10");
  REQUIRE(found.exit_code == 0);
  const nlohmann::json doc = parse_report(found.output);
  REQUIRE(doc.at("checks").size() == 1);
  CHECK(doc.at("checks")[0].at("verdict") == "found");
  CHECK(contains(doc.at("checks")[0].at("details"), "probe 1"));
  CHECK(contains(doc.at("checks")[0].at("details"), "geq"));

  const CliRun exhausted = run_cli("search --f poly:0,1 --budget 15");
  REQUIRE(exhausted.exit_code == 0);
  const nlohmann::json edoc = parse_report(exhausted.output);
  CHECK(edoc.at("checks")[0].at("verdict") == "exhausted");
  CHECK(contains(edoc.at("checks")[0].at("details"), "15 probes"));
}

TEST_CASE("julia completes a file contraction and reports the link norm") {
  const std::string c = write_contraction_c();
  const std::string j = write_symmetry_j();

  const CliRun run = run_cli("julia --C " + c);
  REQUIRE(run.exit_code == 0);
  const nlohmann::json doc = parse_report(run.output);
  REQUIRE(doc.at("checks").size() == 3);
  CHECK(doc.at("checks")[0].at("name") == "julia-shape");
  CHECK(contains(doc.at("checks")[0].at("details"), "4x4 operator"));
  CHECK(doc.at("checks")[1].at("name") == "julia-identities");
  CHECK(doc.at("checks")[1].at("passed") == true);
  CHECK(doc.at("checks")[2].at("name") == "julia-l-norm");
  CHECK(contains(doc.at("checks")[2].at("details"), "||L|| = 2"));
  CHECK(doc.at("overall_pass") == true);

  // Passing the symmetry explicitly changes nothing for the same space.
  const CliRun with_j = run_cli("julia --C " + c + " --J " + j);
  CHECK(with_j.exit_code == 0);
  CHECK(with_j.output == run.output);

  // The two space selectors are mutually exclusive.
  const CliRun conflict = run_cli("julia --C " + c + " --J " + j +
                                  " --minkowski 2", "", true);
  CHECK(conflict.exit_code == 64);

  drop(c);
  drop(j);
}

TEST_CASE("tolerance and seed options flow into the report") {
  const CliRun flag = run_cli("--tol 1e-6 repro --only minkowski");
  REQUIRE(flag.exit_code == 0);
  CHECK(parse_report(flag.output).at("tolerances").at("verdict_rel") ==
        1e-6);

  const CliRun env = run_cli("repro --only minkowski", "KREINKIT_TOL=1e-7");
  REQUIRE(env.exit_code == 0);
  CHECK(parse_report(env.output).at("tolerances").at("verdict_rel") == 1e-7);

  // The flag wins; the environment value is not even parsed then.
  const CliRun both = run_cli("--tol 1e-6 repro --only minkowski",
                              "KREINKIT_TOL=banana");
  CHECK(both.exit_code == 0);
  CHECK(parse_report(both.output).at("tolerances").at("verdict_rel") ==
        1e-6);

  const CliRun bad_env = run_cli("repro --only minkowski",
                                 "KREINKIT_TOL=banana", true);
  CHECK(bad_env.exit_code == 64);
  CHECK(contains(bad_env.output, "KREINKIT_TOL"));

  const CliRun bad_flag = run_cli("--tol 2 repro --only minkowski", "", true);
  CHECK(bad_flag.exit_code == 64);
  CHECK(contains(bad_flag.output, "(0, 1)"));

  const CliRun seeded = run_cli("--seed 123 search --f poly:0,1 --budget 3");
  REQUIRE(seeded.exit_code == 0);
  CHECK(parse_report(seeded.output).at("master_seed") == 123);
}

TEST_CASE("--out duplicates the report and usage errors exit with 64") {
  const std::string out_path = "cli_fixture_report.json";
  const CliRun run = run_cli("--out " + out_path + " repro --only minkowski");
  REQUIRE(run.exit_code == 0);
  std::ifstream in(out_path);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  CHECK(buffer.str() == run.output);
  drop(out_path);

  const CliRun version = run_cli("--version");
  CHECK(version.exit_code == 0);
  CHECK(contains(version.output, "kreinkit 1.0.0"));

  CHECK(run_cli("", "", true).exit_code == 64);
  CHECK(run_cli("repro --bogus", "", true).exit_code == 64);
  CHECK(run_cli("funcalc --f exp --A x.json --method sideways", "", true)
            .exit_code == 64);
  CHECK(run_cli("verify-jensen --f poly:0,0,1", "", true).exit_code == 64);
}
