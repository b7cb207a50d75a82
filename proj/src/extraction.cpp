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


#include "nashpoly/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nashpoly/moment_sdp.hpp"

namespace nashpoly {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

RankInfo rank_info(const Mat& M, double rank_tol) {
  RankInfo info;
  const Mat S = 0.5 * (M + M.transpose());
  Eigen::JacobiSVD<Mat> svd(S);
  info.singular_values = svd.singularValues();
  if (info.singular_values.size() == 0) return info;
  const double scale = std::max(info.singular_values[0], 1.0);
  const double thr = rank_tol * scale;
  for (Eigen::Index i = 0; i < info.singular_values.size(); ++i) {
    const double s = info.singular_values[i];
    if (s > thr) ++info.rank;
    if (s > thr / 10.0 && s < thr * 10.0) info.ambiguous = true;
  }
  return info;
}

int numeric_rank(const Mat& M, double rank_tol) { return rank_info(M, rank_tol).rank; }

FlatReport flat_truncation(const Tms& y, int d0, int k, double rank_tol) {
  FlatReport rep;
  rep.tol = rank_tol;
  for (int t = d0; t <= k && 2 * t <= y.order; ++t) {
    const RankInfo hi = rank_info(moment_matrix(y, t), rank_tol);
    const RankInfo lo = rank_info(moment_matrix(y, t - d0), rank_tol);
    rep.singular_values_t = hi.singular_values;
    rep.singular_values_low = lo.singular_values;
    if (hi.ambiguous || lo.ambiguous) {
      rep.ambiguous = true;
      continue;
    }
    if (hi.rank == lo.rank) {
      rep.t = t;
      rep.rank = hi.rank;
      return rep;
    }
  }
  return rep;
}

namespace {

// Reduced column echelon form of V (s x r): returns U with U[pivots] = I and
// the pivot rows, scanning rows in basis order.
bool column_echelon(const Mat& V, double tol, Mat& U, std::vector<int>& pivots) {
  Mat A = V.transpose();  // r x s, row-reduce over columns in order
  const Eigen::Index r = A.rows(), s = A.cols();
  const double scale = std::max(1e-300, A.cwiseAbs().maxCoeff());
  Eigen::Index row = 0;
  pivots.clear();
  for (Eigen::Index col = 0; col < s && row < r; ++col) {
    Eigen::Index best = row;
    for (Eigen::Index i = row + 1; i < r; ++i)
      if (std::abs(A(i, col)) > std::abs(A(best, col))) best = i;
    if (std::abs(A(best, col)) <= tol * scale) {
      A.block(row, col, r - row, 1).setZero();
      continue;
    }
    A.row(row).swap(A.row(best));
    A.row(row) /= A(row, col);
    for (Eigen::Index i = 0; i < r; ++i)
      if (i != row) A.row(i) -= A(i, col) * A.row(row);
    pivots.push_back(static_cast<int>(col));
    ++row;
  }
  if (row < r) return false;
  U = A.transpose();
  return true;
}

}  // namespace

ExtractionResult extract_minimizers(const Tms& y, int t, int r, const ExtractionOptions& opts) {
  ExtractionResult res;
  const int n = y.nvars;
  if (r < 1 || t < 1 || 2 * t > y.order) {
    res.message = "invalid truncation order or rank";
    return res;
  }
  const Mat M = moment_matrix(y, t);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (M + M.transpose()));
  if (es.info() != Eigen::Success || es.eigenvalues().size() < r) {
    res.message = "eigen factorisation failed";
    return res;
  }
  const Eigen::Index s = M.rows();
  Mat V(s, r);
  for (int j = 0; j < r; ++j) {
    const double lam = es.eigenvalues()[s - 1 - j];
    if (!(lam > 0.0)) {
      res.message = "moment matrix has fewer positive eigenvalues than the rank";
      return res;
    }
    V.col(j) = std::sqrt(lam) * es.eigenvectors().col(s - 1 - j);
  }
  Mat U;
  std::vector<int> pivots;
  if (!column_echelon(V, opts.pivot_tol, U, pivots)) {
    res.message = "column echelon form lost rank";
    return res;
  }
  const auto basis = monomial_basis(n, t);
  for (int p : pivots)
    if (basis[p].degree() >= t) {
      res.message = "echelon basis reaches the truncation degree";
      return res;
    }
  // Multiplication matrices: row i of N_j is row (x_j * w_i) of U.
  std::vector<Mat> Nj(n, Mat(r, r));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < r; ++i)
      Nj[j].row(i) = U.row(basis_position(basis[pivots[i]] + MultiIndex::unit(n, j)));

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vec w(n);
  for (int j = 0; j < n; ++j) w[j] = unif(rng);
  w /= w.sum();
  Mat Ncomb = Mat::Zero(r, r);
  for (int j = 0; j < n; ++j) Ncomb += w[j] * Nj[j];
  Eigen::RealSchur<Mat> schur(Ncomb);
  if (schur.info() != Eigen::Success) {
    res.message = "Schur decomposition failed";
    return res;
  }
  const Mat& T = schur.matrixT();
  for (int i = 0; i + 1 < r; ++i)
    if (std::abs(T(i + 1, i)) > 1e-10 * std::max(1.0, T.cwiseAbs().maxCoeff())) {
      res.message = "complex atoms in the multiplication matrices";
      return res;
    }
  const Mat& Q = schur.matrixU();
  for (int i = 0; i < r; ++i) {
    Vec x(n);
    for (int j = 0; j < n; ++j) x[j] = Q.col(i).dot(Nj[j] * Q.col(i));
    res.points.push_back(x);
  }

  // Weights: least squares over all moments of degree <= 2t.
  const int D = basis_size(n, 2 * t);
  Mat B(D, r);
  for (int i = 0; i < r; ++i) B.col(i) = lift(res.points[i], 2 * t).values;
  const Vec target = y.values.head(D);
  res.weights = B.colPivHouseholderQr().solve(target);
  res.relift_residual = (B * res.weights - target).cwiseAbs().maxCoeff();
  if (res.relift_residual > opts.relift_tol * std::max(1.0, target.cwiseAbs().maxCoeff())) {
    res.message = "extracted atoms do not reproduce the moments";
    return res;
  }
  res.ok = true;
  return res;
}

RefineResult refine_point(const Vec& x0, const std::vector<Polynomial>& eqs, int max_steps) {
  RefineResult out;
  out.x = x0;
  if (eqs.empty()) return out;
  const int n = static_cast<int>(x0.size());
  std::vector<std::vector<Polynomial>> jac(eqs.size());
  for (std::size_t i = 0; i < eqs.size(); ++i)
    for (int j = 0; j < n; ++j) jac[i].push_back(eqs[i].derivative(j));
  auto values = [&](const Vec& x) {
    Vec f(static_cast<Eigen::Index>(eqs.size()));
    for (std::size_t i = 0; i < eqs.size(); ++i) f[i] = evaluate(eqs[i], x);
    return f;
  };
  Vec f = values(out.x);
  out.residual = f.cwiseAbs().maxCoeff();
  for (int step = 0; step < max_steps && out.residual > 1e-15; ++step) {
    Mat J(static_cast<Eigen::Index>(eqs.size()), n);
    for (std::size_t i = 0; i < eqs.size(); ++i)
      for (int j = 0; j < n; ++j) J(i, j) = evaluate(jac[i][j], out.x);
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(J);
    cod.setThreshold(1e-10);
    const Vec dx = cod.solve(-f);
    const Vec xn = out.x + dx;
    const Vec fn = values(xn);
    const double rn = fn.cwiseAbs().maxCoeff();
    if (!(rn < out.residual)) break;
    out.x = xn;
    f = fn;
    out.residual = rn;
    out.steps = step + 1;
  }
  return out;
}

}  // namespace nashpoly
