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


#ifndef NASHPOLY_EXTRACTION_HPP
#define NASHPOLY_EXTRACTION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nashpoly/polycore.hpp"

namespace nashpoly {

struct RankInfo {
  int rank = 0;
  /// Some singular value lies within a factor 10 of the rank threshold.
  bool ambiguous = false;
  Eigen::VectorXd singular_values;
};

/// Singular values of (M + M^T)/2; rank counts sigma_i > tol * max(sigma_1, 1).
RankInfo rank_info(const Eigen::MatrixXd& M, double rank_tol = 1e-6);
int numeric_rank(const Eigen::MatrixXd& M, double rank_tol = 1e-6);

struct FlatReport {
  std::optional<int> t;
  int rank = 0;
  Eigen::VectorXd singular_values_t;
  Eigen::VectorXd singular_values_low;
  double tol = 0.0;
  /// True when at least one order was skipped because of an ambiguous rank.
  bool ambiguous = false;
};

/// First t in [d0, k] with rank M_t[y] == rank M_{t-d0}[y], both
/// unambiguous.
FlatReport flat_truncation(const Tms& y, int d0, int k, double rank_tol = 1e-6);

struct ExtractionOptions {
  double rank_tol = 1e-6;
  /// Pivot threshold of the column echelon form.
  double pivot_tol = 1e-6;
  /// Bound on max |y_a - sum_j w_j x_j^a| over |a| <= 2t.
  double relift_tol = 1e-6;
  std::uint64_t seed = 1;
};

struct ExtractionResult {
  bool ok = false;
  std::string message;
  std::vector<Eigen::VectorXd> points;
  Eigen::VectorXd weights;
  double relift_residual = 0.0;
};

/// Recovers the r atoms of y from M_t[y]: eigen factorisation, column
/// echelon basis, multiplication matrices, a random combination and its
/// Schur form, then least-squares weights.
ExtractionResult extract_minimizers(const Tms& y, int t, int r,
                                    const ExtractionOptions& opts = {});

struct RefineResult {
  Eigen::VectorXd x;
  double residual = 0.0;
  int steps = 0;
};

/// Gauss-Newton on the equations p(x) = 0 (minimum-norm steps, at most
/// max_steps). Never returns a point with a larger residual than x0.
RefineResult refine_point(const Eigen::VectorXd& x0, const std::vector<Polynomial>& equations,
                          int max_steps = 20);

}  // namespace nashpoly

#endif  // NASHPOLY_EXTRACTION_HPP
