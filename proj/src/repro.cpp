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


#include "nashpoly/repro.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "nashpoly/examples.hpp"

namespace nashpoly {

namespace {

Eigen::VectorXd pt(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x[i++] = d;
  return x;
}

// Best one-to-one assignment by brute force over permutations (at most a
// handful of points).
double assign(const std::vector<Eigen::VectorXd>& f, const std::vector<Eigen::VectorXd>& e, std::vector<bool>& used,
              std::size_t k) {
  if (k == e.size()) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (used[j] || f[j].size() != e[k].size()) continue;
    used[j] = true;
    const double d = std::max((f[j] - e[k]).lpNorm<Eigen::Infinity>(), assign(f, e, used, k + 1));
    used[j] = false;
    best = std::min(best, d);
  }
  return best;
}

}  // namespace

double match_points(const std::vector<Eigen::VectorXd>& found, const std::vector<Eigen::VectorXd>& expected,
                    double tol) {
  if (found.size() != expected.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(found.size(), false);
  const double d = assign(found, expected, used, 0);
  return d <= tol ? d : std::numeric_limits<double>::infinity();
}

std::vector<ReproCase> repro_cases() {
  const double r5 = 1.0 / std::sqrt(5.0);
  std::vector<ReproCase> c;
  c.push_back({"example_1_1", "example_1_1", 0, true,
               {pt({0, 0, 0, 0}), pt({1, 0, -r5, -2 * r5}), pt({-1, 0, r5, 2 * r5})}});
  c.push_back({"example_5_1", "example_5_1", 0, true, {pt({0, 0, 0, 0}), pt({-1, 0, 0.125, 0.875})}});
  c.push_back({"example_5_2", "example_5_2", 0, true,
               {pt({0.3198, 0.6396, -0.6396, 0.6396, 0.6396, -0.4264}),
                pt({0.0000, 0.3895, 0.5842, -0.8346, 0.3895, 0.3895}),
                pt({0.2934, -0.5578, 0.8803, 0.5869, -0.5578, 0.5869}),
                pt({0.0000, -0.5774, -0.8660, -0.5774, -0.5774, -0.5774})}});
  {
    ReproCase n{"example_5_2_negated", "example_5_2_negated", 0, false, {}};
    n.expect_none = true;
    c.push_back(n);
  }
  c.push_back({"example_5_3", "example_5_3", 0, true, {pt({-0.3558, -0.9346, 1, 0, -0.3331, 1})}});
  {
    ReproCase n{"example_5_3_zero_sum", "example_5_3_zero_sum", 0, false, {}};
    n.expect_none = true;
    c.push_back(n);
  }
  c.push_back({"example_5_4", "example_5_4", 0, true, {pt({-1.3339, 0.4698, -1.4118, 0.0820})}});
  {
    const double a = -0.5774;
    ReproCase n{"example_5_5", "example_5_5", 3, false, {pt({a, a, a, a, a, a})}};
    n.first_only = true;
    c.push_back(n);
  }
  c.push_back({"example_5_6", "example_5_6", 2, true,
               {pt({-0.8410, -0.7125, -0.8410, -0.7125, -0.8410, -0.7125})}});
  c.push_back({"pollution_control", "pollution_control", 0, true, {pt({0.7, 0.16, 0.8, 0.16, 0.8, 0.47})}});
  c.push_back({"electricity_market", "electricity_market", 0, true,
               {pt({1.7184, 1.8413, 0.67, 1.2, 0.0823, 0.0823})}});
  return c;
}

ReproOutcome run_repro_case(const ReproCase& c, const SolverOptions& opts) {
  const NepProblem nep = example_problem(c.game, c.size);
  ReproOutcome out;
  out.report = c.enumerate ? enumerate_nes(nep, opts) : find_one_ne(nep, opts);
  const NeReport& r = out.report;
  std::ostringstream d;
  d << "status " << ne_status_name(r.status) << ", " << r.equilibria.size() << " equilibria";
  if (c.expect_none) {
    out.pass = r.status == NeStatus::NoneExists && r.equilibria.empty();
    out.detail = d.str();
    return out;
  }
  const NeStatus want = c.enumerate ? NeStatus::FoundAll : NeStatus::FoundSome;
  std::vector<Eigen::VectorXd> pts;
  double worst_omega = 0.0;
  for (const Equilibrium& e : r.equilibria) {
    pts.push_back(e.x);
    worst_omega = std::min(worst_omega, e.omega_star);
  }
  if (c.first_only && pts.size() > 1) pts.resize(1);
  const double dist = match_points(pts, c.expected, c.coord_tol);
  d << ", max distance " << dist << ", min omega* " << worst_omega;
  out.pass = r.status == want && std::isfinite(dist) && worst_omega >= -c.omega_tol;
  out.detail = d.str();
  return out;
}

}  // namespace nashpoly
