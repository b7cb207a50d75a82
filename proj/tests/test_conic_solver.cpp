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
#include <cstdlib>
#include <random>
#include <stdexcept>

#include "nashpoly/conic_solver.hpp"
#include "nashpoly/examples.hpp"
#include "nashpoly/moment_sdp.hpp"
#include "nashpoly/nep_model.hpp"

using namespace nashpoly;
using Vec = Eigen::VectorXd;

namespace {

Polynomial poly(const BlockLayout& L, const std::vector<std::pair<double, std::vector<int>>>& t) {
  std::vector<std::pair<double, MultiIndex>> terms;
  for (const auto& [c, e] : t) terms.emplace_back(c, MultiIndex(e));
  return Polynomial(L, terms);
}

// Weak duality, checked on every optimal solve in this file.
void check_duality(const SdpSolution& s) {
  if (s.status != SdpStatus::Optimal) return;
  const double tol = 1e-8 * (1.0 + std::abs(s.objective) + std::abs(s.dual_objective));
  CHECK(s.dual_objective <= s.objective + tol);
  CHECK(std::abs(s.y.y0() - 1.0) <= 1e-8);
}

SdpSolution run(const RelaxationSpec& spec) {
  const SdpSolution s = solve_sdp(assemble_relaxation(spec));
  check_duality(s);
  return s;
}

// Three fixed specs used for the monotonicity and lower-bound properties.
struct Fixture {
  RelaxationSpec spec;
  Vec feasible;
};

std::vector<Fixture> fixtures() {
  std::vector<Fixture> out;
  {
    // Motzkin polynomial on the disc of radius 2.
    const BlockLayout L = BlockLayout::single(2);
    RelaxationSpec s{poly(L, {{1, {4, 2}}, {1, {2, 4}}, {-3, {2, 2}}, {1, {0, 0}}}), {},
                     {poly(L, {{4, {0, 0}}, {-1, {2, 0}}, {-1, {0, 2}}})}, 3};
    Vec x(2);
    x << 1, 1;
    out.push_back({s, x});
  }
  {
    // Linear objective over the intersection of a disc and a parabola region.
    const BlockLayout L = BlockLayout::single(2);
    RelaxationSpec s{poly(L, {{-1, {1, 0}}, {-2, {0, 1}}}), {},
                     {poly(L, {{1, {0, 0}}, {-1, {2, 0}}, {-1, {0, 2}}}), poly(L, {{1, {1, 0}}, {-1, {0, 2}}})}, 1};
    Vec x(2);
    x << 0.5, 0.5;
    out.push_back({s, x});
  }
  {
    // Quartic on the unit sphere in three variables.
    const BlockLayout L = BlockLayout::single(3);
    RelaxationSpec s{poly(L, {{1, {4, 0, 0}}, {-2, {1, 1, 1}}, {1, {0, 2, 2}}, {0.5, {1, 0, 0}}}),
                     {poly(L, {{1, {2, 0, 0}}, {1, {0, 2, 0}}, {1, {0, 0, 2}}, {-1, {0, 0, 0}}})}, {}, 2};
    Vec x(3);
    x << 0, 0.6, 0.8;
    out.push_back({s, x});
  }
  return out;
}

}  // namespace

TEST_CASE("x squared has minimum zero") {
  const BlockLayout L = BlockLayout::single(1);
  const SdpSolution s = run({poly(L, {{1, {2}}}), {}, {}, 1});
  REQUIRE(s.status == SdpStatus::Optimal);
  CHECK(std::abs(s.objective) <= 1e-7);
}

TEST_CASE("x on the interval [-1, 1] has minimum -1") {
  const BlockLayout L = BlockLayout::single(1);
  const SdpSolution s = run({poly(L, {{1, {1}}}), {}, {poly(L, {{1, {0}}, {-1, {2}}})}, 1});
  REQUIRE(s.status == SdpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(s.y[MultiIndex({1})] == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("forcing the constant one to vanish is primal infeasible") {
  const BlockLayout L = BlockLayout::single(1);
  const SdpSolution s = run({poly(L, {{1, {2}}}), {Polynomial::constant(L, 1.0)}, {}, 1});
  CHECK(s.status == SdpStatus::PrimalInfeasible);
  CHECK(s.equality_certificate.size() > 0);
}

TEST_CASE("infeasible inequality system is certified by a dual ray") {
  // x >= 1 and -x >= 1 have no common point; the equalities are consistent.
  const BlockLayout L = BlockLayout::single(1);
  const SdpSolution s =
      run({poly(L, {{1, {2}}}), {}, {poly(L, {{1, {1}}, {-1, {0}}}), poly(L, {{-1, {1}}, {-1, {0}}})}, 1});
  CHECK(s.status == SdpStatus::PrimalInfeasible);
  REQUIRE(s.dual_blocks.size() == 3);
}

TEST_CASE("unbounded relaxation is reported dual infeasible") {
  const BlockLayout L = BlockLayout::single(1);
  const SdpSolution s = run({poly(L, {{1, {1}}}), {}, {}, 1});
  CHECK(s.status == SdpStatus::DualInfeasible);
}

TEST_CASE("bounds are monotone in the order and below known feasible values") {
  for (Fixture f : fixtures()) {
    const double at_point = evaluate(f.spec.objective, f.feasible);
    const int d0 = minimum_order(f.spec);
    double prev = -1e300;
    for (int k = d0; k <= d0 + 1; ++k) {
      f.spec.order = k;
      const SdpSolution s = run(f.spec);
      REQUIRE(s.status == SdpStatus::Optimal);
      CHECK(s.objective >= prev - 1e-7);
      CHECK(s.objective <= at_point + 1e-8);
      prev = s.objective;
    }
  }
}

TEST_CASE("a known real solution is never declared infeasible") {
  const NepProblem nep = example_problem("example_1_1");
  const KktSystem sys = kkt_sets(nep);
  const Polynomial th = theta_polynomial(gen_theta(1, 4), nep.layout());
  for (int k = 2; k <= 3; ++k) {
    const SdpSolution s = run({th, sys.phi, sys.psi, k});
    CHECK(s.status == SdpStatus::Optimal);
    // The three equilibria bound the relaxation from above.
    Vec x = Vec::Zero(4);
    CHECK(s.objective <= evaluate(th, x) + 1e-8);
  }
}

TEST_CASE("SDPA export of the smallest problem matches the golden text") {
  const BlockLayout L = BlockLayout::single(1);
  const SdpProblem p = assemble_relaxation({poly(L, {{1, {2}}}), {}, {}, 1});
  const std::string golden =
      "* nashpoly nvars 1 order 1 dim 3 objective_constant 0\n"
      "2\n"
      "1\n"
      "2\n"
      "0 1\n"
      "0 1 1 1 -1\n"
      "1 1 1 2 1\n"
      "2 1 2 2 1\n";
  CHECK(export_sdpa(p) == golden);
}

TEST_CASE("SDPA export is deterministic and round-trips") {
  const NepProblem nep = example_problem("example_5_1");
  const KktSystem sys = kkt_sets(nep);
  const SdpProblem p = assemble_relaxation({theta_polynomial(gen_theta(1, 4), nep.layout()), sys.phi, sys.psi, 2});
  const std::string a = export_sdpa(p), b = export_sdpa(p);
  CHECK(a == b);

  const SdpProblem q = import_sdpa(a);
  CHECK(q.dim == p.dim);
  CHECK(q.nvars == p.nvars);
  CHECK(q.order == p.order);
  CHECK(q.blocks.size() == p.blocks.size());
  CHECK((q.objective - p.objective).norm() == 0.0);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int trial = 0; trial < 3; ++trial) {
    Vec y(p.dim);
    for (int i = 0; i < p.dim; ++i) y[i] = d(rng);
    y[0] = 1.0;
    for (int blk = 0; blk < static_cast<int>(p.blocks.size()); ++blk)
      CHECK((q.block_value(blk, y) - p.block_value(blk, y)).norm() == 0.0);
    // Equality rows agree once y_0 = 1 is substituted.
    REQUIRE(q.equalities.size() == p.equalities.size());
    for (std::size_t r = 0; r < p.equalities.size(); ++r) {
      auto value = [&](const LinearRow& row) {
        double s = -row.rhs;
        for (const auto& [v, c] : row.terms) s += c * y[v];
        return s;
      };
      CHECK(value(q.equalities[r]) == doctest::Approx(value(p.equalities[r])).epsilon(1e-14));
    }
  }
  CHECK(export_sdpa(q) == a);
}

TEST_CASE("solves are deterministic") {
  const Fixture f = fixtures()[0];
  const SdpProblem p = assemble_relaxation(f.spec);
  const SdpSolution s1 = solve_sdp(p), s2 = solve_sdp(p);
  CHECK(s1.objective == s2.objective);
  CHECK((s1.y.values - s2.y.values).norm() == 0.0);
}

TEST_CASE("back-end seam: selection by environment and registration") {
  CHECK_THROWS_AS(make_sdp_backend("no-such-solver"), std::invalid_argument);
  CHECK(make_sdp_backend("embedded")->name() == "embedded");

  struct Counting : SdpBackend {
    std::string name() const override { return "counting"; }
    SdpSolution solve(const SdpProblem& p, const SdpTolerances& t) const override {
      SdpSolution s = solve_sdp_embedded(p, t);
      s.iterations = -1;
      return s;
    }
  };
  register_sdp_backend("counting", [] { return std::unique_ptr<SdpBackend>(new Counting()); });
  const BlockLayout L = BlockLayout::single(1);
  const SdpProblem p = assemble_relaxation({poly(L, {{1, {2}}}), {}, {}, 1});

  setenv("NASHPOLY_SOLVER", "counting", 1);
  CHECK(selected_backend_name() == "counting");
  CHECK(solve_sdp(p).iterations == -1);
  setenv("NASHPOLY_SOLVER", "no-such-solver", 1);
  CHECK_THROWS_AS(solve_sdp(p), std::invalid_argument);
  unsetenv("NASHPOLY_SOLVER");
  CHECK(selected_backend_name() == "embedded");
}

TEST_CASE("malformed problems are rejected before factorization") {
  const BlockLayout L = BlockLayout::single(1);
  SdpProblem p = assemble_relaxation({poly(L, {{1, {2}}}), {}, {}, 1});
  p.blocks[0].entries.push_back({1, 0, 1, 1.0});
  CHECK_THROWS_AS(solve_sdp(p), std::invalid_argument);
}
