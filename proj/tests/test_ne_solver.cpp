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

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nashpoly/examples.hpp"
#include "nashpoly/extraction.hpp"
#include "nashpoly/moment_sdp.hpp"
#include "nashpoly/ne_solver.hpp"

using namespace nashpoly;
using Vec = Eigen::VectorXd;

namespace {

Vec pt(std::initializer_list<double> v) {
  Vec x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x[i++] = d;
  return x;
}

std::vector<Vec> ex11_nes() {
  const double r = 1.0 / std::sqrt(5.0);
  return {pt({0, 0, 0, 0}), pt({1, 0, -r, -2 * r}), pt({-1, 0, r, 2 * r})};
}

double dist_to_set(const Vec& x, const std::vector<Vec>& set) {
  double d = std::numeric_limits<double>::infinity();
  for (const Vec& s : set) d = std::min(d, (x - s).lpNorm<Eigen::Infinity>());
  return d;
}

void check_reported(const NepProblem& nep, const NeReport& r) {
  const KktSystem sys = kkt_sets(nep);
  for (const Equilibrium& e : r.equilibria) {
    const KktViolation v = kkt_violation(sys, e.x);
    CHECK(v.equality <= 1e-6);
    CHECK(v.inequality <= 1e-6);
    CHECK(e.omega_star >= -1e-6);
  }
  for (std::size_t a = 0; a < r.equilibria.size(); ++a)
    for (std::size_t b = a + 1; b < r.equilibria.size(); ++b) {
      CHECK((r.equilibria[a].x - r.equilibria[b].x).lpNorm<Eigen::Infinity>() > 1e-4);
      CHECK(r.equilibria[b].theta > r.equilibria[a].theta + 1e-8);
    }
}

}  // namespace

TEST_CASE("option validation") {
  SolverOptions o;
  CHECK_NOTHROW(o.validate());
  o.delta_init = 0.0;
  CHECK_THROWS_AS(o.validate(), std::invalid_argument);
  o = {};
  o.omega_tol = -1.0;
  CHECK_THROWS_AS(o.validate(), std::invalid_argument);
  o = {};
  o.max_outer_loops = 0;
  CHECK_THROWS_AS(find_one_ne(example_problem("example_1_1"), o), std::invalid_argument);
}

TEST_CASE("master problem with the single equation x = 0") {
  const BlockLayout L = BlockLayout::single(1);
  KktSystem sys;
  sys.phi = {Polynomial::variable(L, 0)};
  const MasterResult m = solve_master(sys, L, gen_theta(1, 1), std::nullopt, {});
  REQUIRE(m.outcome == MasterOutcome::Candidate);
  CHECK(std::abs(m.u[0]) <= 1e-8);
}

TEST_CASE("master problem of the two-ball game returns a listed KKT point") {
  const NepProblem nep = example_problem("example_1_1");
  const KktSystem sys = kkt_sets(nep);
  const Eigen::MatrixXd T = gen_theta(1, 4);
  const MasterResult m = solve_master(sys, nep.layout(), T, std::nullopt, {});
  REQUIRE(m.outcome == MasterOutcome::Candidate);
  CHECK(dist_to_set(m.u, ex11_nes()) <= 1e-6);
  const Polynomial th = theta_polynomial(T, nep.layout());
  CHECK(m.vartheta >= evaluate(th, m.u) - 1e-6);

  // Above the largest theta value of the three points nothing is left.
  double top = 0.0;
  for (const Vec& x : ex11_nes()) top = std::max(top, evaluate(th, x));
  const MasterResult none = solve_master(sys, nep.layout(), T, top + 0.5, {});
  CHECK(none.outcome == MasterOutcome::Infeasible);
}

TEST_CASE("candidate check at the origin of the two-ball game") {
  const CandidateCheck cc = check_candidate(example_problem("example_1_1"), Vec::Zero(4), {});
  REQUIRE(cc.players.size() == 2);
  CHECK_FALSE(cc.inconclusive);
  for (const PlayerCheck& p : cc.players) {
    CHECK(std::abs(p.omega) <= 1e-6);
    CHECK(p.certified);
  }
}

TEST_CASE("candidate check at a mismatched point finds a better response") {
  const double r = 1.0 / std::sqrt(5.0);
  const Vec u = pt({1, 0, r, 2 * r});
  const NepProblem nep = example_problem("example_1_1");
  const CandidateCheck cc = check_candidate(nep, u, {});
  REQUIRE(cc.players.size() == 2);
  const PlayerCheck& p1 = cc.players[0];
  CHECK(p1.omega < -1e-3);
  REQUIRE_FALSE(p1.responses.empty());
  // Player 1 minimizes x11 (x11 + 9/sqrt5) + 2 x12^2 over the ball at this u:
  // the minimizer is (-1, 0) on the unit circle with value 1 - 9/sqrt5 - f1(u).
  const Vec& v = p1.responses.front();
  CHECK(std::abs(v.norm() - 1.0) <= 1e-6);
  CHECK(v[0] == doctest::Approx(-1.0).epsilon(1e-6));
  const Polynomial& f1 = nep.player(0).objective();
  Vec moved = u;
  moved.head(2) = v;
  CHECK(p1.omega == doctest::Approx(evaluate(f1, moved) - evaluate(f1, u)).epsilon(1e-6));
  CHECK(cc.omega_star <= p1.omega);
}

TEST_CASE("unconstrained strictly convex player has omega zero at its stationary point") {
  const BlockLayout L({1, 1});
  auto x = [&](int v) { return Polynomial::variable(L, v); };
  // f1 = x1^2 + x1 x2, f2 = x2^2 - x2: equilibrium at x2 = 1/2, x1 = -1/4.
  const NepProblem nep({PlayerProblem::unconstrained(L, 0, x(0) * x(0) + x(0) * x(1)),
                        PlayerProblem::unconstrained(L, 1, x(1) * x(1) - x(1))});
  const CandidateCheck cc = check_candidate(nep, pt({-0.25, 0.5}), {});
  for (const PlayerCheck& p : cc.players) CHECK(std::abs(p.omega) <= 1e-6);
  const NeReport r = find_one_ne(nep);
  REQUIRE(r.status == NeStatus::FoundSome);
  CHECK((r.equilibria[0].x - pt({-0.25, 0.5})).norm() <= 1e-6);
}

TEST_CASE("find_one_ne on the two-ball game") {
  const NepProblem nep = example_problem("example_1_1");
  const NeReport r = find_one_ne(nep);
  REQUIRE(r.status == NeStatus::FoundSome);
  REQUIRE(r.equilibria.size() == 1);
  CHECK(dist_to_set(r.equilibria[0].x, ex11_nes()) <= 1e-6);
  check_reported(nep, r);
  CHECK(r.theta.rows() == 5);
}

TEST_CASE("a convex game terminates at the first loop") {
  const NeReport r = find_one_ne(example_problem("example_5_1"));
  REQUIRE(r.status == NeStatus::FoundSome);
  REQUIRE(r.trace.size() == 1);
  CHECK(r.trace[0].phase == "master");
  CHECK(r.equilibria[0].loop == 1);

  SolverOptions o;
  o.convex = true;
  const NeReport c = find_one_ne(example_problem("example_5_1"), o);
  REQUIRE(c.status == NeStatus::FoundSome);
  CHECK((c.equilibria[0].x - r.equilibria[0].x).norm() <= 1e-6);
}

TEST_CASE("next equilibrium after the smallest one, and the delta gate") {
  const NepProblem nep = example_problem("example_1_1");
  const SolverOptions o;
  const NeReport first = find_one_ne(nep, o);
  REQUIRE(first.status == NeStatus::FoundSome);
  SearchState state = initial_state(nep, o);
  std::vector<LoopRecord> trace;
  const NextResult nr = find_next_ne(nep, first.equilibria[0], state, o, &trace);
  REQUIRE(nr.outcome == NextOutcome::NextNe);
  CHECK(dist_to_set(nr.equilibrium->x, ex11_nes()) <= 1e-6);
  CHECK((nr.equilibrium->x - first.equilibria[0].x).lpNorm<Eigen::Infinity>() > 1e-4);
  CHECK(nr.equilibrium->theta > first.equilibria[0].theta);
  REQUIRE_FALSE(trace.empty());
  CHECK(trace.front().phase == "gate");
  CHECK(trace.front().note.find("gate closed") != std::string::npos);
}

TEST_CASE("no further equilibrium after the unique one") {
  const NepProblem nep = example_problem("pollution_control");
  const SolverOptions o;
  const NeReport first = find_one_ne(nep, o);
  REQUIRE(first.status == NeStatus::FoundSome);
  SearchState state = initial_state(nep, o);
  CHECK(find_next_ne(nep, first.equilibria[0], state, o).outcome == NextOutcome::NoMore);
}

TEST_CASE("enumeration of the two-ball game") {
  const NepProblem nep = example_problem("example_1_1");
  const NeReport r = enumerate_nes(nep);
  REQUIRE(r.status == NeStatus::FoundAll);
  REQUIRE(r.equilibria.size() == 3);
  for (const Equilibrium& e : r.equilibria) CHECK(dist_to_set(e.x, ex11_nes()) <= 1e-6);
  check_reported(nep, r);
}

TEST_CASE("rejected candidates violate the new cuts; equilibria survive them") {
  const NepProblem nep = example_problem("example_5_4");
  const SolverOptions o;
  const KktSystem base = kkt_sets(nep);
  const MasterResult m = solve_master(base, nep.layout(), gen_theta(o.seed, 4), std::nullopt, o);
  REQUIRE(m.outcome == MasterOutcome::Candidate);
  const CandidateCheck cc = check_candidate(nep, m.u, o);
  REQUIRE(cc.omega_star < -o.omega_tol);

  std::vector<std::vector<Vec>> cuts(2);
  for (int i = 0; i < 2; ++i)
    if (cc.players[i].omega < -o.omega_tol) cuts[i] = cc.players[i].responses;
  const KktSystem cut = attach_cuts(base, nep, cuts);
  CHECK(kkt_violation(cut, m.u).inequality > o.omega_tol);

  const Vec ne = pt({-1.33391, 0.46976, -1.41184, 0.08197});
  const RefineResult ref = refine_point(ne, base.phi);
  CHECK(kkt_violation(cut, ref.x).inequality <= 1e-6);
}

TEST_CASE("too few outer loops end inconclusive") {
  SolverOptions o;
  o.max_outer_loops = 1;
  const NeReport r = find_one_ne(example_problem("example_5_4"), o);
  CHECK(r.status == NeStatus::Inconclusive);
  CHECK(r.equilibria.empty());
  CHECK_FALSE(r.message.empty());
}
