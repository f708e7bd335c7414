#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fpcert/cli.hpp"

using namespace fpcert;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_config(const std::string& text) {
  const auto ec = experiment_from_config(KeyValueConfig::parse(text));
  std::ostringstream out, err;
  const int code = run(ec, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("iterate converges on a gallery target and writes its trace") {
  const auto dir = fresh_dir("fpcert_cli_iterate");
  const auto r = run_config(
      "[experiment]\n"
      "command = iterate\n"
      "gallery = halving\n"
      "out = " + dir.string() + "\n");
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("verdict: converged") != std::string::npos);
  CHECK(r.err.empty());

  const auto csv = slurp(dir / "halving_trace.csv");
  CHECK(csv.rfind("# fpcert trace v1\n", 0) == 0);
  CHECK(csv.find("# verdict,converged,") != std::string::npos);
}

TEST_CASE("iterate reports non-convergence through the exit code") {
  const auto r = run_config(
      "[experiment]\n"
      "command = iterate\n"
      "gallery = doubling\n"
      "[starts]\n"
      "x0 = 1\n");
  CHECK(r.code == kExitConclusionFailure);
  CHECK(r.out.find("verdict: diverged") != std::string::npos);
}

TEST_CASE("iterate accepts inline expressions with explicit bounds") {
  const auto r = run_config(
      "[experiment]\n"
      "command = iterate\n"
      "expression = cos(x1)\n"
      "[space]\n"
      "lower = -10\n"
      "upper = 10\n"
      "[starts]\n"
      "x0 = 1\n");
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("0.7390851332") != std::string::npos);
}

TEST_CASE("certify picks the recommended certificate of the requested kind") {
  const auto r = run_config(
      "[experiment]\n"
      "command = certify\n"
      "gallery = halving\n"
      "[certificate]\n"
      "kind = banach\n");
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("check: banach") != std::string::npos);
  CHECK(r.out.find("overall: pass") != std::string::npos);
}

TEST_CASE("certify fails with exit 2 when the premise is refuted") {
  const auto r = run_config(
      "[experiment]\n"
      "command = certify\n"
      "gallery = doubling\n"
      "[certificate]\n"
      "kind = contractive\n");
  CHECK(r.code == kExitPremiseFailure);
  CHECK(r.out.find("overall: fail") != std::string::npos);
}

TEST_CASE("certify without the needed parameter is a usage error") {
  const auto r = run_config(
      "[experiment]\n"
      "command = certify\n"
      "expression = x1/2\n"
      "[space]\n"
      "lower = -10\n"
      "upper = 10\n"
      "[certificate]\n"
      "kind = banach\n");
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("lambda") != std::string::npos);
}

TEST_CASE("verify resolves theorem ids against gallery recommendations") {
  const auto r = run_config(
      "[experiment]\n"
      "command = verify\n"
      "gallery = babylonian_sqrt2\n"
      "theorem = ef_main\n");
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("verified_empirically") != std::string::npos);
  CHECK(r.out.find("ef_main") != std::string::npos);
}

TEST_CASE("verify runs the counterexample flow on request") {
  const auto r = run_config(
      "[experiment]\n"
      "command = verify\n"
      "gallery = x_plus_inv_x\n"
      "as = counterexample\n");
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("counterexample") != std::string::npos);
}

TEST_CASE("verify surfaces premise failures with exit 2") {
  const auto r = run_config(
      "[experiment]\n"
      "command = verify\n"
      "gallery = doubling\n"
      "as = counterexample\n");
  CHECK(r.code == kExitPremiseFailure);
}

TEST_CASE("classify prints one row per certificate kind") {
  const auto r = run_config(
      "[experiment]\n"
      "command = classify\n"
      "gallery = halving\n");
  CHECK(r.code == kExitPass);
  for (const auto& kind : certificate_kind_names()) {
    CHECK(r.out.find(kind) != std::string::npos);
  }
}

TEST_CASE("round trip: an expression target matches its gallery twin") {
  const std::string common =
      "[space]\n"
      "lower = -10\n"
      "upper = 10\n"
      "[certificate]\n"
      "kind = banach\n"
      "lambda = 0.5\n"
      "[starts]\n"
      "starts = -5; 0.3; 7\n";
  const auto from_expr = run_config(
      "[experiment]\n"
      "command = verify\n"
      "expression = x1/2\n" +
      common);
  const auto from_gallery = run_config(
      "[experiment]\n"
      "command = verify\n"
      "gallery = halving\n"
      "[starts]\n"
      "starts = -5; 0.3; 7\n");
  CHECK(from_expr.code == kExitPass);
  CHECK(from_gallery.code == kExitPass);
}

TEST_CASE("gallery-run writes a stable summary and exits clean") {
  const auto dir1 = fresh_dir("fpcert_cli_g1");
  const auto dir2 = fresh_dir("fpcert_cli_g2");
  const auto first = run_config(
      "[experiment]\ncommand = gallery-run\nout = " + dir1.string() + "\n");
  const auto second = run_config(
      "[experiment]\ncommand = gallery-run\nout = " + dir2.string() + "\n");
  CHECK(first.code == kExitPass);
  CHECK(second.code == kExitPass);

  const auto csv1 = slurp(dir1 / "summary.csv");
  const auto csv2 = slurp(dir2 / "summary.csv");
  CHECK(csv1 == csv2);
  CHECK(csv1.rfind("# fpcert summary v1\ncase,overall,worst_margin\n", 0) ==
        0);
  for (const auto& name : list_entries()) {
    CHECK(csv1.find(name) != std::string::npos);
  }
}

TEST_CASE("the sweep covers every recommended certificate") {
  const auto dir = fresh_dir("fpcert_cli_sweep");
  const auto r = run_config(
      "[experiment]\ncommand = sweep\nout = " + dir.string() + "\n");
  CHECK(r.code == kExitPass);
  const auto csv = slurp(dir / "summary.csv");
  CHECK(csv.find("halving/banach") != std::string::npos);
  CHECK(csv.find("halving/meir_keeler") != std::string::npos);
  CHECK(csv.find("halving/compatible_pair_ef") != std::string::npos);
  CHECK(csv.find("x_plus_inv_x/counterexample") != std::string::npos);
  CHECK(csv.find("doubling/counterexample") != std::string::npos);
}

TEST_CASE("the output directory falls back to the environment") {
  const auto dir = fresh_dir("fpcert_cli_env");
  REQUIRE(setenv("FPCERT_OUT", dir.c_str(), 1) == 0);
  const auto r = run_config(
      "[experiment]\n"
      "command = iterate\n"
      "gallery = halving\n");
  unsetenv("FPCERT_OUT");
  CHECK(r.code == kExitPass);
  CHECK(std::filesystem::exists(dir / "halving_trace.csv"));
}

TEST_CASE("usage problems exit with 64 and an explanation") {
  const auto unknown_command = run_config("[experiment]\ncommand = dance\n");
  CHECK(unknown_command.code == kExitUsage);
  CHECK(unknown_command.err.find("dance") != std::string::npos);

  const auto no_target = run_config("[experiment]\ncommand = iterate\n");
  CHECK(no_target.code == kExitUsage);
  CHECK_FALSE(no_target.err.empty());

  const auto both_targets = run_config(
      "[experiment]\ncommand = iterate\ngallery = halving\n"
      "expression = x1\n");
  CHECK(both_targets.code == kExitUsage);

  const auto missing_bounds = run_config(
      "[experiment]\ncommand = iterate\nexpression = x1/2\n"
      "[starts]\nx0 = 0.5\n");
  CHECK(missing_bounds.code == kExitUsage);
  CHECK(missing_bounds.err.find("bounds") != std::string::npos);

  const auto bad_expression = run_config(
      "[experiment]\ncommand = iterate\nexpression = x1 +\n"
      "[space]\nlower = 0\nupper = 1\n[starts]\nx0 = 0.5\n");
  CHECK(bad_expression.code == kExitUsage);
  CHECK(bad_expression.err.find("position 5") != std::string::npos);

  const auto bad_kind = run_config(
      "[experiment]\ncommand = certify\ngallery = halving\n"
      "[certificate]\nkind = sorcery\n");
  CHECK(bad_kind.code == kExitUsage);
  CHECK(bad_kind.err.find("sorcery") != std::string::npos);
}
