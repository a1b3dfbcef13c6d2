#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <string>

#include <nlohmann/json.hpp>

#include "seqdual/manifest.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

// Runs the installed binary with stderr folded into stdout so error text is
// observable alongside the exit code.
RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(SEQDUAL_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[512];
  while (size_t n = fread(buf, 1, sizeof(buf), pipe)) r.output.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

const char* kE12 =
    R"('{"space":{"dim":2,"norm":{"p":"2"}},"vectors":[[3,0],[0,4]]}')";

}  // namespace

TEST_CASE("cli: norm computes the strong norm of a sequence") {
  const RunResult r = run_cli(std::string("norm lp:2 --input ") + kE12);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("5") != std::string::npos);
}

TEST_CASE("cli: json output is canonical and machine-readable") {
  const RunResult r =
      run_cli(std::string("norm lp:2 --json --input ") + kE12);
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = seqdual::parse_json_text(r.output);
  CHECK(j.at("value").get<double>() == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(j.at("method").is_string());
  // The printed line is already in canonical form.
  const std::string line = r.output.substr(0, r.output.find('\n'));
  CHECK(line == seqdual::canonical_json_dump(j));
}

TEST_CASE("cli: dualnorm wraps the class for the caller") {
  const RunResult r = run_cli(
      "dualnorm linf --json --input "
      R"('{"space":{"dim":1,"norm":{"p":"2"}},"vectors":[[1],[-2],[3]]}')");
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = seqdual::parse_json_text(r.output);
  CHECK(j.at("value").get<double>() == doctest::Approx(6.0).epsilon(1e-9));
}

TEST_CASE("cli: opnorm reports the k-term summing norm") {
  const RunResult r = run_cli(
      "opnorm lpw:2 lp:2 --k 2 --json --input "
      R"('{"domain":{"dim":2,"norm":{"p":"2"}},"codomain":{"dim":2,"norm":{"p":"2"}},"matrix":[[1,0],[0,1]]}')");
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = seqdual::parse_json_text(r.output);
  CHECK(j.at("value").get<double>() ==
        doctest::Approx(1.4142135623730951).epsilon(1e-3));
}

TEST_CASE("cli: adjoint-report exits zero when the identity holds") {
  const RunResult r = run_cli(
      "adjoint-report --x lp:2 --y lp:2 --k 2 --json --input "
      R"('{"domain":{"dim":2,"norm":{"p":"2"}},"codomain":{"dim":2,"norm":{"p":"2"}},"matrix":[[2,1],[0,1]]}')");
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = seqdual::parse_json_text(r.output);
  CHECK(j.at("inequality_holds").get<bool>());
  CHECK(j.at("equality_expected").get<bool>());
}

TEST_CASE("cli: verify runs a suite and honors trial counts") {
  const RunResult r = run_cli("verify known-values --trials 3");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("known-values") != std::string::npos);
}

TEST_CASE("cli: verify emits a parseable json report") {
  const RunResult r = run_cli("verify proposition-2.5 --trials 2 --json");
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = seqdual::parse_json_text(r.output);
  CHECK(j.at("suite") == "proposition-2.5");
  CHECK(j.at("pass").get<bool>());
}

TEST_CASE("cli: identical seeds give byte-identical reports") {
  const std::string args = "verify dual-identities --trials 2 --seed 7 --json";
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.output == b.output);
}

TEST_CASE("cli: usage problems exit with code two") {
  CHECK(run_cli("verify no-such-suite").exit_code == 2);
  CHECK(run_cli("norm lp:2 --input '{broken json").exit_code == 2);
  CHECK(run_cli("norm zeta:3 --input " + std::string(kE12)).exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  const RunResult r = run_cli("norm lp:2 --input '{\"oops\":1}'");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("error") != std::string::npos);
}

TEST_CASE("cli: forced methods choose the computation path") {
  const std::string seq =
      R"('{"space":{"dim":2,"norm":{"p":"2"}},"vectors":[[1,0],[0,2]]}')";
  const RunResult exact =
      run_cli("dualnorm lp:2 --method exact --json --input " + seq);
  REQUIRE(exact.exit_code == 0);
  const nlohmann::json je = seqdual::parse_json_text(exact.output);
  const RunResult ascent =
      run_cli("dualnorm lp:2 --method ascent --json --input " + seq);
  REQUIRE(ascent.exit_code == 0);
  const nlohmann::json ja = seqdual::parse_json_text(ascent.output);
  CHECK(je.at("method") == "exact");
  CHECK(ja.at("method") == "ascent");
  CHECK(ja.at("value").get<double>() ==
        doctest::Approx(je.at("value").get<double>()).epsilon(1e-3));
}

TEST_CASE("cli: witness flag appends the maximizing argument") {
  const RunResult r = run_cli(
      "dualnorm lp:2 --method ascent --witness --json --input " +
      std::string(kE12));
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = seqdual::parse_json_text(r.output);
  REQUIRE(j.contains("witness"));
  CHECK(j.at("witness").is_array());
  CHECK(j.at("witness").size() == 4);
}

TEST_CASE("cli: report executes a manifest file") {
  const std::string path = "/tmp/seqdual_cli_manifest.json";
  {
    FILE* f = fopen(path.c_str(), "w");
    REQUIRE(f != nullptr);
    fputs(R"({"version":1,
              "spaces":{"E":{"dim":1,"norm":{"p":"2"}}},
              "sequences":{"x":{"space":"E","vectors":[[1],[2]]}},
              "tasks":[{"task":"norm","class":"lp:1","sequence":"x"}]})",
          f);
    fclose(f);
  }
  const RunResult r = run_cli("report --input " + path);
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = seqdual::parse_json_text(r.output);
  CHECK(j.at("results").at(0).at("value").get<double>() ==
        doctest::Approx(3.0));
  std::remove(path.c_str());
}
