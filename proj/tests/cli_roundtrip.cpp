// Drives the riskq binary end to end: exit-code contract, JSON shape,
// byte-identical reruns, CSV ingestion through stdin.

#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

std::string cliPath() {
  const char* p = std::getenv("RISKQ_CLI");
  REQUIRE_MESSAGE(p != nullptr, "RISKQ_CLI must point at the riskq binary");
  return p;
}

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args, const std::string& stdin_data = "") {
  std::string cmd;
  if (!stdin_data.empty()) {
    std::string tmp = "/tmp/riskq_cli_stdin.txt";
    std::ofstream(tmp) << stdin_data;
    cmd = cliPath() + " " + args + " < " + tmp + " 2>/dev/null";
  } else {
    cmd = cliPath() + " " + args + " 2>/dev/null";
  }
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

const char* kU01 = "'{\"type\":\"uniform\",\"a\":0,\"b\":1}'";
const char* kKinked = "'{\"type\":\"pwlinear\",\"kinks\":[1],\"slopes\":[1,2]}'";

}  // namespace

TEST_CASE("var on empirical samples") {
  auto r = run("var --dist '{\"type\":\"empirical\",\"samples\":[1,2,3,4,5]}' "
               "--alpha 0.5");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"value\":3") != std::string::npos);
  CHECK(r.out.find("\"converged\":true") != std::string::npos);
}

TEST_CASE("hg image of the kinked example") {
  auto r = run(std::string("hg --dist ") + kU01 + " --phi " + kKinked +
               " --alpha 0");
  CHECK(r.exit_code == 0);
  // 2 - sqrt(2) = 0.58578643762690485
  CHECK(r.out.find("\"value\":0.585786437") != std::string::npos);
  CHECK(r.out.find("\"mode\":\"limit\"") != std::string::npos);
}

TEST_CASE("premium of a constant") {
  auto r = run("premium --dist '{\"type\":\"empirical\",\"samples\":[2,2]}' "
               "--phi '{\"type\":\"power\",\"c\":2}' --alpha 0.75");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"value\":4") != std::string::npos);
  CHECK(r.out.find("\"attained\":true") != std::string::npos);
}

TEST_CASE("byte-identical output for identical inputs") {
  std::string args = std::string("hg --dist ") + kU01 + " --phi " + kKinked +
                     " --alpha 0.25 --seed 7";
  auto a = run(args), b = run(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("csv samples via stdin") {
  auto r = run("var --dist - --alpha 1.0", "samples\n1\n5\n3\n");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"value\":5") != std::string::npos);
}

TEST_CASE("exit codes: validation, numeric, suite failure") {
  CHECK(run("var --alpha 0.5").exit_code == 2);       // missing --dist
  CHECK(run("frobnicate").exit_code == 2);            // unknown subcommand
  CHECK(run("var --dist '{\"type\":\"nope\"}' --alpha 0.5").exit_code == 2);
  // infinite-mean risk: numerical not-in-space
  CHECK(run("rho --dist '{\"type\":\"pareto\",\"scale\":1,\"shape\":0.5}'")
            .exit_code == 3);
  // dirac distortion is not concave: the coherence suite fails -> exit 1
  auto suite = run("check coherence --g '{\"type\":\"var\",\"beta\":0.9}' "
                   "--trials 400 --seed 42");
  CHECK(suite.exit_code == 1);
  CHECK(suite.out.find("\"passed\":false") != std::string::npos);
}

TEST_CASE("membership fixtures through the CLI") {
  auto member = run("membership --dist '{\"type\":\"fixture\",\"name\":\"cone_x\"}' "
                    "--g '{\"type\":\"example_cone\"}'");
  CHECK(member.exit_code == 0);
  CHECK(member.out.find("\"status\":\"member\"") != std::string::npos);
  auto not_member = run(
      "membership --dist '{\"type\":\"fixture\",\"name\":\"cone_xy\"}' "
      "--g '{\"type\":\"example_cone\"}'");
  CHECK(not_member.out.find("\"status\":\"not_member\"") != std::string::npos);
}

TEST_CASE("orders subcommand") {
  auto st = run("orders --op st "
                "--dist '{\"type\":\"empirical\",\"samples\":[1,2]}' "
                "--dist2 '{\"type\":\"empirical\",\"samples\":[2,3]}'");
  CHECK(st.exit_code == 0);
  CHECK(st.out.find("\"result\":true") != std::string::npos);
  auto sl = run("orders --op stoploss --dist " + std::string(kU01) +
                " --deductible 0.5");
  CHECK(sl.out.find("\"value\":0.124999999999") != std::string::npos);
}

TEST_CASE("examples and check suites pass") {
  auto ex = run("examples");
  CHECK(ex.exit_code == 0);
  CHECK(ex.out.find("\"passed\":true") != std::string::npos);
  auto one = run("examples --filter hg-kinked");
  CHECK(one.exit_code == 0);
  CHECK(one.out.find("\"trials\":1") != std::string::npos);

  auto chk = run("check coherence --g '{\"type\":\"tvar\",\"alpha\":0.9}' "
                 "--trials 40 --seed 42 --jobs 2");
  CHECK(chk.exit_code == 0);

  auto rf = run("check reverse_fatou --g '{\"type\":\"mixture\","
                "\"atoms\":[[0.5,0.3]],"
                "\"segments\":[{\"lo\":0,\"hi\":1,\"coeffs\":[0.7]}],"
                "\"concave\":false}'");
  CHECK(rf.exit_code == 0);
}

TEST_CASE("sigma curve emission") {
  std::string path = "/tmp/riskq_sigma_curve.csv";
  auto r = run(std::string("hg --dist ") + kU01 +
               " --phi '{\"type\":\"power\",\"c\":2}' --alpha 0.5 "
               "--emit-sigma " + path);
  CHECK(r.exit_code == 0);
  std::ifstream f(path);
  REQUIRE(f.good());
  std::string header;
  std::getline(f, header);
  CHECK(header == "x,sigma");
  int rows = 0;
  std::string line;
  while (std::getline(f, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 101);
}

TEST_CASE("search emits unverified candidates") {
  auto r = run("search --problem coh --trials 40 --seed 42");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"verified\":false") != std::string::npos);
}
