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


#include "nashpoly/moment_sdp.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

namespace nashpoly {

namespace {

int half_degree(const Polynomial& p) { return (p.degree() + 1) / 2; }

// pos[i][j] = position of basis[i] + basis[j] in the full basis.
std::vector<std::vector<int>> sum_positions(const std::vector<MultiIndex>& basis) {
  const std::size_t s = basis.size();
  std::vector<std::vector<int>> pos(s, std::vector<int>(s));
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = i; j < s; ++j)
      pos[i][j] = pos[j][i] = basis_position(basis[i] + basis[j]);
  return pos;
}

void require_nvars(const Polynomial& p, int n, const char* what) {
  if (p.nvars() != n)
    throw std::invalid_argument(std::string(what) + " has the wrong number of variables");
}

}  // namespace

int minimum_order(const RelaxationSpec& spec) {
  int d0 = std::max(1, half_degree(spec.objective));
  for (const auto& p : spec.phi) d0 = std::max(d0, half_degree(p));
  for (const auto& q : spec.psi) d0 = std::max(d0, half_degree(q));
  return d0;
}

Eigen::MatrixXd moment_matrix(const Tms& y, int d) {
  if (d < 0 || 2 * d > y.order)
    throw std::domain_error("moment_matrix: order exceeds the tms degree");
  const auto basis = monomial_basis(y.nvars, d);
  const auto pos = sum_positions(basis);
  const auto s = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd M(s, s);
  for (Eigen::Index i = 0; i < s; ++i)
    for (Eigen::Index j = 0; j < s; ++j)
      M(i, j) = y.values[pos[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]];
  return M;
}

Eigen::MatrixXd localizing_matrix(const Polynomial& q, const Tms& y, int k) {
  if (q.nvars() != y.nvars)
    throw std::invalid_argument("localizing_matrix: variable count mismatch");
  const int t = k - half_degree(q);
  if (t < 0 || 2 * k > y.order)
    throw std::domain_error("localizing_matrix: order exceeds the tms degree");
  const auto basis = monomial_basis(y.nvars, t);
  const auto s = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(s, s);
  for (Eigen::Index i = 0; i < s; ++i)
    for (Eigen::Index j = i; j < s; ++j) {
      const MultiIndex b = basis[static_cast<std::size_t>(i)] + basis[static_cast<std::size_t>(j)];
      double v = 0.0;
      for (const auto& [g, c] : q.terms()) v += c * y[g + b];
      L(i, j) = L(j, i) = v;
    }
  return L;
}

Eigen::MatrixXd gen_theta(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd R(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) R(i, j) = u(rng);
  return R.transpose() * R + 1e-6 * Eigen::MatrixXd::Identity(n + 1, n + 1);
}

Polynomial theta_polynomial(const Eigen::MatrixXd& theta, const BlockLayout& layout) {
  const int n = layout.total();
  if (theta.rows() != n + 1 || theta.cols() != n + 1)
    throw std::invalid_argument("theta_polynomial: Theta must be (n+1)x(n+1)");
  std::vector<Polynomial> basis;
  basis.push_back(Polynomial::constant(layout, 1.0));
  for (int v = 0; v < n; ++v) basis.push_back(Polynomial::variable(layout, v));
  Polynomial out(layout);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      if (theta(i, j) != 0.0)
        out = out + theta(i, j) * basis[static_cast<std::size_t>(i)] * basis[static_cast<std::size_t>(j)];
  return out;
}

Eigen::MatrixXd SdpProblem::block_value(int b, const Eigen::VectorXd& y) const {
  const SdpBlock& blk = blocks.at(static_cast<std::size_t>(b));
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(blk.size, blk.size);
  for (const SdpEntry& e : blk.entries) {
    S(e.row, e.col) += e.coef * y[e.var];
    if (e.row != e.col) S(e.col, e.row) += e.coef * y[e.var];
  }
  return S;
}

double SdpProblem::equality_residual(const Eigen::VectorXd& y) const {
  double r = 0.0;
  for (const LinearRow& row : equalities) {
    double v = -row.rhs;
    for (const auto& [var, c] : row.terms) v += c * y[var];
    r = std::max(r, std::abs(v));
  }
  return r;
}

SdpProblem assemble_relaxation(const RelaxationSpec& spec) {
  const int n = spec.objective.nvars();
  for (const auto& p : spec.phi) require_nvars(p, n, "equality polynomial");
  for (const auto& q : spec.psi) require_nvars(q, n, "inequality polynomial");
  const int d0 = minimum_order(spec);
  const int k = spec.order;
  if (k < d0)
    throw std::invalid_argument("relaxation order " + std::to_string(k) +
                                " is below the minimum order " + std::to_string(d0));

  SdpProblem prob;
  prob.nvars = n;
  prob.order = k;
  prob.dim = basis_size(n, 2 * k);
  prob.objective = Eigen::VectorXd::Zero(prob.dim);
  for (const auto& [a, c] : spec.objective.terms()) prob.objective[basis_position(a)] += c;

  prob.equalities.push_back({{{0, 1.0}}, 1.0});
  // Entry (i, j) of L_p depends only on basis[i] + basis[j], so the distinct
  // upper-triangle functionals are <p x^b, y> for |b| <= 2t.
  std::map<std::vector<std::pair<int, double>>, bool> seen;
  for (const auto& p : spec.phi) {
    if (p.is_zero()) continue;
    const int t = k - half_degree(p);
    for (const auto& b : monomial_basis(n, 2 * t)) {
      std::map<int, double> acc;
      for (const auto& [g, c] : p.terms()) acc[basis_position(g + b)] += c;
      std::vector<std::pair<int, double>> row;
      for (const auto& [v, c] : acc)
        if (c != 0.0) row.emplace_back(v, c);
      if (row.empty() || !seen.emplace(row, true).second) continue;
      prob.equalities.push_back({std::move(row), 0.0});
    }
  }

  auto add_block = [&](const Polynomial& q, const std::string& label) {
    const int t = k - half_degree(q);
    const auto basis = monomial_basis(n, t);
    const auto pos = sum_positions(basis);
    SdpBlock blk;
    blk.size = static_cast<int>(basis.size());
    blk.label = label;
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = i; j < basis.size(); ++j)
        for (const auto& [g, c] : q.terms()) {
          const int var = g.degree() == 0 ? pos[i][j] : basis_position(g + basis[i] + basis[j]);
          blk.entries.push_back({static_cast<int>(i), static_cast<int>(j), var, c});
        }
    prob.blocks.push_back(std::move(blk));
  };
  add_block(Polynomial::constant(spec.objective.layout(), 1.0), "moment");
  for (std::size_t j = 0; j < spec.psi.size(); ++j) {
    if (spec.psi[j].is_zero()) continue;
    add_block(spec.psi[j], "localizing " + std::to_string(j + 1));
  }
  return prob;
}

}  // namespace nashpoly
