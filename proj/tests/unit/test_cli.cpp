#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "ginedge/cli.hpp"

using namespace ginedge::cli;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::vector<const char*> argv{"ginedge"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const auto parsed = parse(static_cast<int>(argv.size()), argv.data(), out, err);
  if (!parsed.config) return {parsed.exit_code, out.str(), err.str()};
  const int status = run_command(*parsed.config, out, err);
  return {status, out.str(), err.str()};
}

// Runs the installed binary through the shell; returns (exit status, stdout).
std::pair<int, std::string> shell(const std::string& command) {
  std::string output;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buffer{};
  std::size_t n;
  while ((n = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) output.append(buffer.data(), n);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), output};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> result;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) result.push_back(line);
  return result;
}

}  // namespace

TEST_CASE("cdf at gamma = 0 is one everywhere") {
  const auto r = invoke({"cdf", "--gamma", "0", "--t-min", "-5", "--t-max", "5", "--t-step", "1"});
  CHECK(r.status == kExitOk);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 12);
  CHECK(rows[0] == "gamma,t,cdf");
  for (int i = 1; i <= 11; ++i) CHECK(rows[i] == "0," + std::to_string(i - 6) + ",1");
  CHECK(r.out.find('\r') == std::string::npos);
}

TEST_CASE("defaults and overrides") {
  std::ostringstream out, err;
  const char* argv[] = {"ginedge", "mc"};
  const auto parsed = parse(2, argv, out, err);
  REQUIRE(parsed.config);
  CHECK(parsed.config->command == Command::mc);
  CHECK(parsed.config->quad_points == 50);
  CHECK_FALSE(parsed.config->format.has_value());

  setenv(kQuadPointsEnv, "64", 1);
  const auto env = parse(2, argv, out, err);
  unsetenv(kQuadPointsEnv);
  REQUIRE(env.config);
  CHECK(env.config->quad_points == 64);

  const char* argv2[] = {"ginedge", "cdf", "--gamma", "0.2,0.9", "--quad-points", "70", "--format", "json"};
  const auto many = parse(8, argv2, out, err);
  REQUIRE(many.config);
  CHECK(many.config->gamma == std::vector<double>{0.2, 0.9});
  CHECK(many.config->quad_points == 70);
  CHECK(many.config->format == Format::json);
}

TEST_CASE("validation failures exit 1 and name the flag") {
  auto r = invoke({"cdf", "--gamma", "1.5"});
  CHECK(r.status == kExitValidation);
  CHECK(r.err.find("--gamma") != std::string::npos);
  r = invoke({"cdf", "--t-min", "2", "--t-max", "1"});
  CHECK(r.status == kExitValidation);
  CHECK(r.err.find("--t-min") != std::string::npos);
  r = invoke({"cdf", "--t-step", "0"});
  CHECK(r.status == kExitValidation);
  CHECK(r.err.find("--t-step") != std::string::npos);
  r = invoke({"cdf", "--bogus", "1"});
  CHECK(r.status == kExitValidation);
  CHECK(r.err.find("--bogus") != std::string::npos);
  r = invoke({"cdf", "--format", "xml"});
  CHECK(r.status == kExitValidation);
  CHECK(r.err.find("--format") != std::string::npos);
  r = invoke({});
  CHECK(r.status == kExitValidation);
  r = invoke({"mth", "--m", "5"});
  CHECK(r.status == kExitValidation);
  CHECK(r.err.find("--m") != std::string::npos);
  r = invoke({"mc", "--matrix-size", "1"});
  CHECK(r.status == kExitValidation);
  CHECK(r.err.find("--matrix-size") != std::string::npos);
}

TEST_CASE("numerical failures exit 2") {
  const auto r = invoke({"moments", "--gamma", "0.1"});
  CHECK(r.status == kExitNumerical);
  CHECK(r.err.find("tail threshold") != std::string::npos);
  CHECK(invoke({"cdf", "--gamma", "1", "--quad-points", "4", "--t-min", "-30", "--t-max", "-29"}).status ==
        kExitNumerical);
}

TEST_CASE("help documents the columns") {
  const auto r = invoke({"--help"});
  CHECK(r.status == kExitOk);
  CHECK(r.out.find("gamma,t,exact,right_tail,left_tail") != std::string::npos);
  CHECK(r.out.find("table1") != std::string::npos);
}

TEST_CASE("curve and table commands") {
  auto r = invoke({"pdf", "--gamma", "1", "--t-min", "-1", "--t-max", "0", "--t-step", "0.5"});
  CHECK(r.status == kExitOk);
  CHECK(lines(r.out).size() == 4);
  CHECK(lines(r.out)[0] == "gamma,t,pdf");

  r = invoke({"tails", "--gamma", "0.5", "--t-min", "-2", "--t-max", "2", "--t-step", "2"});
  CHECK(r.status == kExitOk);
  const auto t = lines(r.out);
  REQUIRE(t.size() == 7);
  CHECK(t[0] == "gamma,t,exact,right_tail,left_tail");
  CHECK(t[4].empty());
  CHECK(t[5] == "gamma,c1,c0_integral,c0_series");

  r = invoke({"mth", "--m", "3", "--t-min", "-1", "--t-max", "0", "--t-step", "1"});
  CHECK(r.status == kExitOk);
  CHECK(lines(r.out)[0] == "t,F1,F2,F3");

  r = invoke({"gen", "--t", "0", "--lambda-step", "0.25"});
  CHECK(r.status == kExitOk);
  const auto g = lines(r.out);
  REQUIRE(g.size() == 6);
  CHECK(g[0] == "lambda,E");
  CHECK(g[1] == "0,1");

  r = invoke({"cdf", "--gamma", "1", "--t-min", "0", "--t-max", "1", "--format", "json"});
  CHECK(r.status == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.size() == 3);
  CHECK(std::abs(j[0]["cdf"].get<double>() - 0.741492641710) <= 1e-11);
}

TEST_CASE("table1 reproduces the gamma = 1 row") {
  const auto r = invoke({"table1", "--gamma", "1"});
  CHECK(r.status == kExitOk);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].rfind("gamma,mean,variance,skewness,kurtosis", 0) == 0);
  CHECK(rows[1].back() == '1');
  CHECK(invoke({"table1", "--gamma", "0.5"}).status == kExitValidation);
}

TEST_CASE("identity check suite") {
  const auto r = invoke({"check", "--grid", "quick"});
  CHECK(r.status == kExitOk);
  for (const auto& line : lines(r.out)) CHECK(nlohmann::json::parse(line)["passed"].get<bool>());
  CHECK(invoke({"check", "--grid", "default", "--format", "csv"}).status == kExitOk);
}

TEST_CASE("mc output is reproducible and written to --output") {
  const auto a = invoke({"mc", "--matrix-size", "20", "--samples", "100", "--seed", "7"});
  const auto b = invoke({"mc", "--matrix-size", "20", "--samples", "100", "--seed", "7", "--workers", "3"});
  CHECK(a.status == kExitOk);
  CHECK(a.out == b.out);
  const auto doc = nlohmann::json::parse(a.out);
  CHECK(doc["runs"][0]["seed"] == 7);
  const std::string path = "test_cli_mc_output.json";
  const auto c = invoke({"mc", "--matrix-size", "20", "--samples", "100", "--seed", "7", "--output", path});
  CHECK(c.status == kExitOk);
  CHECK(c.out.empty());
  std::ifstream file(path);
  const std::string written((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  CHECK(written == a.out);
  std::remove(path.c_str());
}

TEST_CASE("tool binary") {
  const std::string tool = GINEDGE_TOOL_PATH;
  auto [status, out] = shell(tool + " cdf --gamma 0 --t-min 0 --t-max 1 2>/dev/null");
  CHECK(status == 0);
  CHECK(out == "gamma,t,cdf\n0,0,1\n0,0.5,1\n0,1,1\n");
  CHECK(shell(tool + " cdf --gamma 3 2>/dev/null").first == 1);
  CHECK(shell("GINEDGE_QUAD_POINTS=80 " + tool + " cdf --gamma 1 --t-min 0 --t-max 0.5 2>/dev/null").first == 0);
  CHECK(shell("GINEDGE_QUAD_POINTS=abc " + tool + " cdf 2>/dev/null").first == 1);
}
