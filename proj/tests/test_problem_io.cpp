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

#include <fstream>
#include <sstream>

#include "nashpoly/examples.hpp"
#include "nashpoly/problem_io.hpp"

using namespace nashpoly;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A two-player file with one ball player; `cons` is spliced in as the
// constraint list of player 1.
std::string small_file(const std::string& family, const std::string& cons) {
  return R"({"format": "nashpoly-nep", "version": 1, "players": [
  {"n": 1, "family": ")" + family + R"(", "objective": [[1, [2, 0]], [1, [1, 1]]])" + cons + R"(},
  {"n": 1, "family": "ball", "objective": [[1, [0, 2]]]}]})";
}

std::string error_of(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const ProblemError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("bundled two-ball file describes two ball players") {
  const std::string path = std::string(NASHPOLY_PROBLEMS_DIR) + "/example_1_1.json";
  const ProblemFile pf = parse_problem(read_file(path));
  CHECK(pf.problem.num_players() == 2);
  CHECK(pf.problem.dimension() == 4);
  for (const auto& p : pf.problem.players()) CHECK(p.family().kind == FamilyKind::Ball);
  CHECK(pf.problem == example_problem("example_1_1"));
}

TEST_CASE("every bundled problem file matches the built-in game") {
  for (const auto& name : example_names()) {
    const std::string text = read_file(std::string(NASHPOLY_PROBLEMS_DIR) + "/" + name + ".json");
    REQUIRE_FALSE(text.empty());
    CHECK(parse_problem(text).problem == example_problem(name));
  }
}

TEST_CASE("serialization round-trips exactly") {
  for (const auto& name : example_names()) {
    const ProblemFile pf = bundled_problem_file(name);
    const std::string text = serialize_problem(pf);
    const ProblemFile back = parse_problem(text);
    CHECK(back.problem == pf.problem);
    CHECK(back.name == pf.name);
    CHECK(serialize_problem(back) == text);
  }
}

TEST_CASE("options survive the round trip and apply over defaults") {
  ProblemFile pf = bundled_problem_file("example_5_1");
  pf.options.seed = 7;
  pf.options.omega_tol = 1e-7;
  pf.options.convex = true;
  const ProblemFile back = parse_problem(serialize_problem(pf));
  CHECK(back.options == pf.options);
  SolverOptions o;
  back.options.apply(o);
  CHECK(o.seed == 7);
  CHECK(o.omega_tol == 1e-7);
  CHECK(o.convex);
  CHECK(o.delta_init == 0.1);
}

TEST_CASE("built-in family without explicit constraints uses the generated ones") {
  const ProblemFile pf = parse_problem(small_file("ball", ""));
  REQUIRE(pf.problem.player(0).num_constraints() == 1);
  CHECK(pf.problem.player(0).constraints()[0].kind == ConstraintKind::Inequality);
}

TEST_CASE("constraint on a rival variable is rejected") {
  const std::string msg =
      error_of(small_file("custom", R"(, "constraints": [{"kind": "inequality", "terms": [[1, [0, 0]], [-1, [0, 2]]]}],
       "multipliers": [[[1, [0, 0]]]])"));
  CHECK(msg.find("depends on rival block") != std::string::npos);
  CHECK(msg.find("players[0]") != std::string::npos);
}

TEST_CASE("unknown family is rejected") {
  const std::string msg = error_of(small_file("pyramid", ""));
  CHECK(msg.find("unknown constraint family") != std::string::npos);
  CHECK(msg.find("players[0].family") != std::string::npos);
}

TEST_CASE("a constraint listed as equality and inequality is rejected") {
  const std::string msg = error_of(small_file(
      "custom", R"(, "constraints": [{"kind": "equality", "terms": [[1, [1, 0]]]},
                                     {"kind": "inequality", "terms": [[1, [1, 0]]]}])"));
  CHECK(msg.find("both as an equality and as an inequality") != std::string::npos);
}

TEST_CASE("syntax errors report line and column") {
  const std::string text = "{\n  \"format\": \"nashpoly-nep\",\n  \"version\": 1,,\n}";
  try {
    parse_problem(text);
    FAIL("expected a syntax error");
  } catch (const ProblemError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 16);
    CHECK(std::string(e.what()).find("line 3, column 16") == 0);
  }
}

TEST_CASE("structural errors name the field") {
  CHECK(error_of(R"({"format": "other", "version": 1, "players": []})").find("format") != std::string::npos);
  CHECK(error_of(R"({"format": "nashpoly-nep", "version": 2, "players": []})").find("unsupported version") !=
        std::string::npos);
  CHECK(error_of(R"({"format": "nashpoly-nep", "version": 1, "players": []})").find("at least one player") !=
        std::string::npos);
  const std::string bad_exp = R"({"format": "nashpoly-nep", "version": 1, "players": [
    {"n": 2, "family": "ball", "objective": [[1, [2, 0, 0]]]}]})";
  CHECK(error_of(bad_exp).find("players[0].objective[0]") != std::string::npos);
  const std::string bad_opt = R"({"format": "nashpoly-nep", "version": 1,
    "players": [{"n": 1, "family": "ball", "objective": [[1, [2]]]}], "options": {"speed": 3}})";
  CHECK(error_of(bad_opt).find("options.speed") != std::string::npos);
  const std::string bad_val = R"({"format": "nashpoly-nep", "version": 1,
    "players": [{"n": 1, "family": "ball", "objective": [[1, [2]]]}], "options": {"delta_init": -1}})";
  CHECK(error_of(bad_val).find("delta_init") != std::string::npos);
}

TEST_CASE("load_problem resolves bundled names and reports missing files") {
  CHECK(load_problem("example_5_1").problem == example_problem("example_5_1"));
  CHECK_THROWS_AS(load_problem("/nonexistent/problem.json"), ProblemError);
}
