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


#ifndef NASHPOLY_REPRO_HPP
#define NASHPOLY_REPRO_HPP

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nashpoly/ne_solver.hpp"

namespace nashpoly {

/// One golden check on a bundled game.
struct ReproCase {
  std::string id;
  std::string game;
  int size = 0;
  /// true: enumerate_nes; false: find_one_ne.
  bool enumerate = true;
  /// Expected equilibria (any order); empty with expect_none means nonexistence.
  std::vector<Eigen::VectorXd> expected;
  bool expect_none = false;
  /// When set, only the first reported equilibrium is compared (solve-style runs).
  bool first_only = false;
  double coord_tol = 1e-3;
  double omega_tol = 1e-6;
};

struct ReproOutcome {
  bool pass = false;
  std::string detail;
  NeReport report;
};

/// Golden checks of the bundled games.
std::vector<ReproCase> repro_cases();

/// Runs one case with the given options and compares against the goldens.
ReproOutcome run_repro_case(const ReproCase& c, const SolverOptions& opts);

/// Matches reported points to expected points one-to-one within tol
/// (infinity norm). Returns the largest matched distance, or +inf.
double match_points(const std::vector<Eigen::VectorXd>& found, const std::vector<Eigen::VectorXd>& expected,
                    double tol);

}  // namespace nashpoly

#endif  // NASHPOLY_REPRO_HPP
