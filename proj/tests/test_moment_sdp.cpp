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
#include <random>
#include <set>
#include <stdexcept>
#include <string>

#include "nashpoly/examples.hpp"
#include "nashpoly/moment_sdp.hpp"
#include "nashpoly/nep_model.hpp"

using namespace nashpoly;
using Vec = Eigen::VectorXd;

namespace {

// "21" -> exponent vector (2, 1).
MultiIndex mi(const std::string& s) {
  std::vector<int> e;
  for (char ch : s) e.push_back(ch - '0');
  return MultiIndex(e);
}

// Moment vector with distinct pseudo-random entries, so that a layout
// mismatch cannot go unnoticed.
Tms distinct_tms(int n, int order, unsigned seed = 11) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Tms y(n, order);
  for (Eigen::Index i = 0; i < y.values.size(); ++i) y.values[i] = d(rng);
  return y;
}

// Sum/difference of named moments: {{+1, "00"}, {-1, "10"}}.
double combo(const Tms& y, const std::vector<std::pair<double, std::string>>& terms) {
  double s = 0.0;
  for (const auto& [c, name] : terms) s += c * y[mi(name)];
  return s;
}

double min_eig(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

TEST_CASE("M_1 and M_2 follow the printed layouts for n = 2") {
  const Tms y = distinct_tms(2, 4);
  CHECK(moment_matrix(y, 0)(0, 0) == y[mi("00")]);

  const std::vector<std::vector<std::string>> m1 = {
      {"00", "10", "01"}, {"10", "20", "11"}, {"01", "11", "02"}};
  const Eigen::MatrixXd M1 = moment_matrix(y, 1);
  REQUIRE(M1.rows() == 3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) CHECK(M1(r, c) == y[mi(m1[r][c])]);

  const std::vector<std::vector<std::string>> m2 = {
      {"00", "10", "01", "20", "11", "02"}, {"10", "20", "11", "30", "21", "12"},
      {"01", "11", "02", "21", "12", "03"}, {"20", "30", "21", "40", "31", "22"},
      {"11", "21", "12", "31", "22", "13"}, {"02", "12", "03", "22", "13", "04"}};
  const Eigen::MatrixXd M2 = moment_matrix(y, 2);
  REQUIRE(M2.rows() == 6);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) CHECK(M2(r, c) == y[mi(m2[r][c])]);
}

TEST_CASE("moment_matrix rejects an order beyond the moment vector") {
  CHECK_THROWS_AS(moment_matrix(distinct_tms(2, 3), 2), std::domain_error);
}

TEST_CASE("localizing matrix of 1 - z1 - z1 z2 matches the printed layout") {
  const BlockLayout L = BlockLayout::single(2);
  const Polynomial q(L, {{1.0, mi("00")}, {-1.0, mi("10")}, {-1.0, mi("11")}});
  const Tms y = distinct_tms(2, 4);
  const Eigen::MatrixXd Lq = localizing_matrix(q, y, 2);
  REQUIRE(Lq.rows() == 3);
  const std::vector<std::vector<std::vector<std::string>>> tab = {
      {{"00", "10", "11"}, {"10", "20", "21"}, {"01", "11", "12"}},
      {{"10", "20", "21"}, {"20", "30", "31"}, {"11", "21", "22"}},
      {{"01", "11", "12"}, {"11", "21", "22"}, {"02", "12", "13"}}};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      const auto& t = tab[r][c];
      CHECK(Lq(r, c) == doctest::Approx(combo(y, {{1, t[0]}, {-1, t[1]}, {-1, t[2]}})).epsilon(1e-15));
    }
}

TEST_CASE("localizing matrix of the constant one is the moment matrix") {
  const Tms y = distinct_tms(3, 4);
  const Polynomial one = Polynomial::constant(BlockLayout::single(3), 1.0);
  CHECK((localizing_matrix(one, y, 2) - moment_matrix(y, 2)).norm() == 0.0);
}

TEST_CASE("localizing matrix at a lift is q(u) times an outer product") {
  const BlockLayout L = BlockLayout::single(2);
  const Polynomial q(L, {{1.0, mi("00")}, {-1.0, mi("20")}, {-1.0, mi("02")}});
  Vec u(2);
  u << 0.3, -0.5;
  const Tms y = lift(u, 6);
  const Eigen::MatrixXd Lq = localizing_matrix(q, y, 3);
  const Tms y2 = lift(u, 4);
  const Eigen::MatrixXd expect = evaluate(q, u) * moment_matrix(y2, 2);
  CHECK((Lq - expect).lpNorm<Eigen::Infinity>() <= 1e-14);
  CHECK(min_eig(Lq) >= -1e-12);
  CHECK(min_eig(moment_matrix(y, 3)) >= -1e-12);
}

TEST_CASE("gen_theta is deterministic and positive definite") {
  for (std::uint64_t seed : {1u, 7u, 123u}) {
    const Eigen::MatrixXd a = gen_theta(seed, 4), b = gen_theta(seed, 4);
    CHECK(a.rows() == 5);
    CHECK((a - b).norm() == 0.0);
    CHECK((a - a.transpose()).norm() == 0.0);
    CHECK(min_eig(a) >= 1e-6 * (1 - 1e-9));
  }
  CHECK((gen_theta(1, 4) - gen_theta(2, 4)).norm() > 0.0);
}

TEST_CASE("theta polynomial is bounded below by the eigenvalue bound") {
  const BlockLayout L({2, 3});
  const Eigen::MatrixXd T = gen_theta(5, 5);
  const Polynomial th = theta_polynomial(T, L);
  CHECK(th.degree() == 2);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> d(0.0, 3.0);
  for (int s = 0; s < 100; ++s) {
    Vec x(5);
    for (int j = 0; j < 5; ++j) x[j] = d(rng);
    Vec x1(6);
    x1 << 1.0, x;
    const double v = evaluate(th, x);
    CHECK(v == doctest::Approx(x1.dot(T * x1)).epsilon(1e-12));
    CHECK(v >= 1e-6 * (1.0 + x.squaredNorm()) * (1 - 1e-9));
  }
}

TEST_CASE("smallest relaxation has one block, one equality, three moments") {
  const BlockLayout L = BlockLayout::single(1);
  const Polynomial th(L, {{1.0, mi("2")}, {0.5, mi("0")}});
  const SdpProblem p = assemble_relaxation({th, {}, {}, 1});
  CHECK(p.dim == 3);
  CHECK(p.blocks.size() == 1);
  CHECK(p.blocks[0].size == 2);
  CHECK(p.equalities.size() == 1);
  CHECK(p.objective[0] == 0.5);
  CHECK(p.objective[2] == 1.0);
}

TEST_CASE("relaxation order below d0 is rejected") {
  const NepProblem nep = example_problem("example_1_1");
  const KktSystem sys = kkt_sets(nep);
  const RelaxationSpec spec{theta_polynomial(gen_theta(1, 4), nep.layout()), sys.phi, sys.psi, 1};
  CHECK(minimum_order(spec) == 2);
  CHECK_THROWS_AS(assemble_relaxation(spec), std::invalid_argument);
}

TEST_CASE("lifted equilibria are feasible and the objective pairs to theta") {
  const NepProblem nep = example_problem("example_1_1");
  const KktSystem sys = kkt_sets(nep);
  const Polynomial th = theta_polynomial(gen_theta(1, 4), nep.layout());
  const double s5 = std::sqrt(5.0);
  std::vector<Vec> nes(3, Vec::Zero(4));
  nes[1] << 1, 0, -1 / s5, -2 / s5;
  nes[2] << -1, 0, 1 / s5, 2 / s5;
  for (int k = 2; k <= 3; ++k) {
    const SdpProblem p = assemble_relaxation({th, sys.phi, sys.psi, k});
    CHECK(p.dim == basis_size(4, 2 * k));
    CHECK(p.blocks.size() == 1 + sys.psi.size());
    for (const Vec& x : nes) {
      const Vec y = lift(x, 2 * k).values;
      CHECK(p.equality_residual(y) <= 1e-12);
      for (int b = 0; b < static_cast<int>(p.blocks.size()); ++b) CHECK(min_eig(p.block_value(b, y)) >= -1e-10);
      CHECK(p.objective.dot(y) == doctest::Approx(evaluate(th, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("blocks are structurally symmetric and equalities are distinct") {
  const NepProblem nep = example_problem("example_5_1");
  const KktSystem sys = kkt_sets(nep);
  const SdpProblem p = assemble_relaxation({theta_polynomial(gen_theta(3, 4), nep.layout()), sys.phi, sys.psi, 2});
  for (const SdpBlock& b : p.blocks)
    for (const SdpEntry& e : b.entries) {
      CHECK(e.row <= e.col);
      CHECK(e.col < b.size);
    }
  const Tms y = distinct_tms(4, 4);
  for (int b = 0; b < static_cast<int>(p.blocks.size()); ++b) {
    const Eigen::MatrixXd B = p.block_value(b, y.values);
    CHECK((B - B.transpose()).norm() == 0.0);
  }
  CHECK(p.equalities[0].terms.size() == 1);
  CHECK(p.equalities[0].rhs == 1.0);
  std::set<std::vector<std::pair<int, double>>> seen;
  for (std::size_t r = 1; r < p.equalities.size(); ++r) {
    auto t = p.equalities[r].terms;
    std::sort(t.begin(), t.end());
    CHECK(seen.insert(t).second);
  }
}
