// Copyright 2026 The nashpoly Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "nashpoly/conic_solver.hpp"
#include "nashpoly/examples.hpp"
#include "nashpoly/problem_io.hpp"

using namespace nashpoly;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr discarded; wall time goes there.
Run run(const std::string& args) {
  const std::string cmd = std::string(NASHPOLY_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string temp_path(const std::string& leaf) {
  return std::string(NASHPOLY_TEST_TMP) + "/" + leaf;
}

}  // namespace

TEST_CASE("enumerate reports the three two-ball equilibria as JSON") {
  const Run r = run("enumerate example_1_1 --seed 7 --json");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["status"] == "found-all");
  REQUIRE(j["equilibria"].size() == 3);
  for (const auto& e : j["equilibria"]) {
    CHECK(e["x"].size() == 4);
    CHECK(e["omega_star"].get<double>() >= -1e-6);
  }
  CHECK(j["options"]["seed"] == 7);
}

TEST_CASE("identical invocations give identical bytes") {
  const Run a = run("enumerate example_5_1 --json");
  const Run b = run("enumerate example_5_1 --json");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const Run c = run("solve example_1_1");
  const Run d = run("solve example_1_1");
  CHECK(c.out == d.out);
}

TEST_CASE("check at the origin certifies an equilibrium") {
  const Run r = run("check example_1_1 --point 0,0,0,0 --json");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(std::abs(j["omega_star"].get<double>()) <= 1e-6);
  for (const auto& p : j["players"]) CHECK(p["certified"] == true);
}

TEST_CASE("check away from equilibrium reports an improving response") {
  const Run r = run("check example_1_1 --point 1,0,0.4472135954999579,0.8944271909999159 --json");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["omega_star"].get<double>() < -1e-3);
}

TEST_CASE("usage and input errors exit with code 1") {
  CHECK(run("solve /nonexistent/file.json").code == 1);
  CHECK(run("solve example_1_1 --bogus").code == 1);
  CHECK(run("check example_1_1 --point 1,2").code == 1);
  CHECK(run("solve example_1_1 --delta-init -3").code == 1);
  const std::string bad = temp_path("bad_problem.json");
  std::ofstream(bad) << "{\"format\": \"nashpoly-nep\",";
  CHECK(run("solve " + bad).code == 1);
}

TEST_CASE("exported SDPA text imports back to the same problem") {
  const std::string path = temp_path("ex51.dat-s");
  REQUIRE(run("export-sdpa example_5_1 --order 2 -o " + path).code == 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  REQUIRE_FALSE(text.empty());
  CHECK(text.rfind("* nashpoly nvars 4 order 2", 0) == 0);
  const SdpProblem p = import_sdpa(text);
  CHECK(export_sdpa(p) == text);
}

TEST_CASE("dump writes a file that parses to the built-in game") {
  const std::string path = temp_path("dump_5_4.json");
  REQUIRE(run("dump example_5_4 -o " + path).code == 0);
  CHECK(load_problem(path).problem == example_problem("example_5_4"));
  // A dumped file is accepted as input in place of the bundled name.
  const Run r = run("check " + path + " --point -1.33391,0.46976,-1.41184,0.08197 --json");
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["omega_star"].get<double>() > -1e-3);
}

TEST_CASE("list names every bundled game") {
  const Run r = run("list");
  REQUIRE(r.code == 0);
  for (const auto& n : example_names()) CHECK(r.out.find(n) != std::string::npos);
}
