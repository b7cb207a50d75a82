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


#ifndef NASHPOLY_MOMENT_SDP_HPP
#define NASHPOLY_MOMENT_SDP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nashpoly/polycore.hpp"

namespace nashpoly {

/// Polynomial optimization problem min theta s.t. phi = 0, psi >= 0, together
/// with the relaxation order k.
struct RelaxationSpec {
  Polynomial objective;
  std::vector<Polynomial> phi;
  std::vector<Polynomial> psi;
  int order = 0;
};

/// d0 = max ceil(deg/2) over phi, psi and the objective (at least 1).
int minimum_order(const RelaxationSpec& spec);

/// M_d[y] over monomial_basis(n, d). Requires 2d <= y.order.
Eigen::MatrixXd moment_matrix(const Tms& y, int d);

/// L_q^{(k)}[y] of side C(n+t, t), t = k - ceil(deg q / 2).
Eigen::MatrixXd localizing_matrix(const Polynomial& q, const Tms& y, int k);

/// Theta = R^T R + 1e-6 I with R uniform(-1, 1), side n + 1, seeded.
Eigen::MatrixXd gen_theta(std::uint64_t seed, int n);

/// [x]_1^T Theta [x]_1 as a polynomial over the given layout.
Polynomial theta_polynomial(const Eigen::MatrixXd& theta, const BlockLayout& layout);

/// One structural entry of a symmetric block: coef * y[var] contributes to
/// positions (row, col) and (col, row). Always row <= col.
struct SdpEntry {
  int row = 0;
  int col = 0;
  int var = 0;
  double coef = 0.0;
};

/// PSD block S(y) = sum of its entries; every entry is linear in y.
struct SdpBlock {
  int size = 0;
  std::vector<SdpEntry> entries;
  std::string label;
};

/// Sparse linear equality sum coef * y[var] = rhs.
struct LinearRow {
  std::vector<std::pair<int, double>> terms;
  double rhs = 0.0;
};

/// Order-k moment relaxation in conic form over y in R^dim:
/// minimize objective^T y s.t. equalities, every block PSD.
/// Equality 0 is always y_0 = 1 and block 0 is always M_k[y].
struct SdpProblem {
  int nvars = 0;
  int order = 0;
  int dim = 0;
  Eigen::VectorXd objective;
  std::vector<LinearRow> equalities;
  std::vector<SdpBlock> blocks;

  /// Dense value of block b at y.
  Eigen::MatrixXd block_value(int b, const Eigen::VectorXd& y) const;
  /// Largest violation of the equalities at y.
  double equality_residual(const Eigen::VectorXd& y) const;
};

/// Builds the relaxation: y_0 = 1, every entry of L_p^{(k)}[y] = 0 for
/// p in phi (upper triangle, duplicates removed), M_k[y] PSD and
/// L_q^{(k)}[y] PSD for q in psi. Throws std::invalid_argument when
/// order < minimum_order(spec).
SdpProblem assemble_relaxation(const RelaxationSpec& spec);

}  // namespace nashpoly

#endif  // NASHPOLY_MOMENT_SDP_HPP
