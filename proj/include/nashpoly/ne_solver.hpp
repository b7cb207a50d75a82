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


#ifndef NASHPOLY_NE_SOLVER_HPP
#define NASHPOLY_NE_SOLVER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nashpoly/conic_solver.hpp"
#include "nashpoly/nep_model.hpp"

namespace nashpoly {

struct SolverOptions {
  std::uint64_t seed = 1;
  /// Relaxation order cap per subproblem; 0 means d0 + 2 of that subproblem.
  int k_max = 0;
  double delta_init = 0.1;
  double delta_shrink = 5.0;
  double omega_tol = 1e-6;
  double feas_check_tol = 1e-6;
  double rank_tol = 1e-6;
  int max_outer_loops = 30;
  /// Skip the cut loop (every KKT point of a convex game is an equilibrium);
  /// the accuracy check still runs before reporting.
  bool convex = false;
  /// Infinity-norm distance below which two points count as the same.
  double distinct_tol = 1e-4;
  SdpTolerances sdp;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

enum class NeStatus { FoundAll, FoundSome, NoneExists, Inconclusive };
std::string ne_status_name(NeStatus status);

struct Equilibrium {
  Eigen::VectorXd x;
  double omega_star = 0.0;
  std::vector<double> omega;
  /// lambda_{i,j}(x) per player.
  std::vector<Eigen::VectorXd> multipliers;
  double theta = 0.0;
  int loop = 0;
};

/// One subproblem solve inside the outer loops.
struct LoopRecord {
  int loop = 0;
  std::string phase;
  std::vector<int> orders;
  std::vector<std::string> sdp_statuses;
  std::vector<int> cut_counts;
  std::optional<Eigen::VectorXd> candidate;
  std::vector<double> omega;
  std::string note;
};

struct NeReport {
  NeStatus status = NeStatus::Inconclusive;
  std::vector<Equilibrium> equilibria;
  std::vector<LoopRecord> trace;
  std::string message;
  Eigen::MatrixXd theta;
  double seconds = 0.0;
};

enum class MasterOutcome { Candidate, Infeasible, Inconclusive };

struct MasterResult {
  MasterOutcome outcome = MasterOutcome::Inconclusive;
  Eigen::VectorXd u;
  /// Relaxation bound at the accepting order.
  double vartheta = 0.0;
  std::vector<int> orders;
  std::vector<std::string> sdp_statuses;
};

/// Moment hierarchy for min [x]_1^T Theta [x]_1 over the KKT system, with
/// the optional extra constraint theta(x) >= level.
MasterResult solve_master(const KktSystem& sys, const BlockLayout& layout,
                          const Eigen::MatrixXd& theta, std::optional<double> level,
                          const SolverOptions& opts);

struct PlayerCheck {
  /// Lower-level optimal value; -infinity when unbounded.
  double omega = 0.0;
  bool certified = false;
  bool unbounded = false;
  /// Improving responses (feasible points with f_i below f_i(u)).
  std::vector<Eigen::VectorXd> responses;
  std::vector<int> orders;
  std::vector<std::string> sdp_statuses;
  std::string note;
};

struct CandidateCheck {
  std::vector<PlayerCheck> players;
  double omega_star = 0.0;
  bool inconclusive = false;
};

/// Solves each player's lower-level problem at u and collects improving
/// responses when u is not an equilibrium.
CandidateCheck check_candidate(const NepProblem& nep, const Eigen::VectorXd& u,
                               const SolverOptions& opts);

/// State carried between searches: Theta and the accumulated cut points.
struct SearchState {
  Eigen::MatrixXd theta;
  std::vector<std::vector<Eigen::VectorXd>> cuts;
};

SearchState initial_state(const NepProblem& nep, const SolverOptions& opts);

NeReport find_one_ne(const NepProblem& nep, const SolverOptions& opts = {});

enum class NextOutcome { NextNe, NoMore, Inconclusive };

struct NextResult {
  NextOutcome outcome = NextOutcome::Inconclusive;
  std::optional<Equilibrium> equilibrium;
  std::string message;
};

/// Searches for the equilibrium with the next larger theta value after
/// `known`. Cuts found on the way are added to `state`.
NextResult find_next_ne(const NepProblem& nep, const Equilibrium& known, SearchState& state,
                        const SolverOptions& opts, std::vector<LoopRecord>* trace = nullptr,
                        int* loop_counter = nullptr);

/// All equilibria in increasing theta order.
NeReport enumerate_nes(const NepProblem& nep, const SolverOptions& opts = {});

/// Largest |phi| and most negative psi value at x.
struct KktViolation {
  double equality = 0.0;
  double inequality = 0.0;
};
KktViolation kkt_violation(const KktSystem& sys, const Eigen::VectorXd& x);

}  // namespace nashpoly

#endif  // NASHPOLY_NE_SOLVER_HPP
