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


#ifndef NASHPOLY_CONIC_SOLVER_HPP
#define NASHPOLY_CONIC_SOLVER_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nashpoly/moment_sdp.hpp"
#include "nashpoly/polycore.hpp"

namespace nashpoly {

/// Inaccurate: the best iterate is primal feasible with a small gap but the
/// dual residual did not reach feas_tol, typically because the dual optimum
/// is not attained. Its moments are usable; its bound is not certified.
enum class SdpStatus { Optimal, PrimalInfeasible, DualInfeasible, Inaccurate, IterationLimit };

std::string status_name(SdpStatus status);

struct SdpTolerances {
  double feas_tol = 1e-8;
  double gap_tol = 1e-8;
  /// Normalised residual of an infeasibility certificate.
  double infeas_tol = 1e-7;
  int max_iters = 200;
  /// Stop after this many iterations without a 10% drop in the worst residual.
  int stall_iters = 25;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::IterationLimit;
  /// Primal moment vector. For PrimalInfeasible it holds the last iterate.
  Tms y;
  double objective = 0.0;
  double dual_objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  /// |objective - dual_objective| / (1 + |objective| + |dual_objective|).
  double gap = 0.0;
  int iterations = 0;
  /// Dual matrices, one per block. For PrimalInfeasible, the normalised
  /// improving ray.
  std::vector<Eigen::MatrixXd> dual_blocks;
  /// For infeasible equalities: w with E^T w = 0 and f^T w > 0.
  Eigen::VectorXd equality_certificate;
};

/// Interface every conic back-end implements.
class SdpBackend {
 public:
  virtual ~SdpBackend() = default;
  virtual std::string name() const = 0;
  virtual SdpSolution solve(const SdpProblem& problem, const SdpTolerances& tols) const = 0;
};

using SdpBackendFactory = std::function<std::unique_ptr<SdpBackend>()>;

/// Registers an additional back-end under `name`.
void register_sdp_backend(const std::string& name, SdpBackendFactory factory);
/// Throws std::invalid_argument for unknown names.
std::unique_ptr<SdpBackend> make_sdp_backend(const std::string& name);
/// Value of NASHPOLY_SOLVER, or "embedded" when unset or empty.
std::string selected_backend_name();

/// Dense homogeneous self-dual interior-point method.
SdpSolution solve_sdp_embedded(const SdpProblem& problem, const SdpTolerances& tols = {});

/// Solves with the back-end selected by NASHPOLY_SOLVER.
SdpSolution solve_sdp(const SdpProblem& problem, const SdpTolerances& tols = {});

/// SDPA sparse (.dat-s) text. Variables are y_1..y_{dim-1}; y_0 = 1 is
/// folded into F_0 and the remaining equalities form a final diagonal block
/// of (+row, -row) pairs. The objective constant and relaxation metadata
/// are stored in a leading comment line.
std::string export_sdpa(const SdpProblem& problem);

/// Inverse of export_sdpa. Equalities come back with y_0 folded into rhs.
SdpProblem import_sdpa(const std::string& text);

}  // namespace nashpoly

#endif  // NASHPOLY_CONIC_SOLVER_HPP
