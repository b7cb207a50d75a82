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


#include "nashpoly/conic_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace nashpoly {

std::string status_name(SdpStatus status) {
  switch (status) {
    case SdpStatus::Optimal: return "optimal";
    case SdpStatus::PrimalInfeasible: return "primal-infeasible";
    case SdpStatus::DualInfeasible: return "dual-infeasible";
    case SdpStatus::Inaccurate: return "inaccurate";
    case SdpStatus::IterationLimit: return "iteration-limit";
  }
  return "unknown";
}

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Blocks = std::vector<Mat>;

double inner(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].cwiseProduct(b[i]).sum();
  return s;
}

double norm(const Blocks& a) { return std::sqrt(inner(a, a)); }

void axpy(Blocks& y, double alpha, const Blocks& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

Mat sym(const Mat& m) { return 0.5 * (m + m.transpose()); }

// Linear map y -> blocks and its adjoint, restricted to y = yp + N x.
class ConicMap {
 public:
  ConicMap(const SdpProblem& p, const Mat& N) : p_(p), N_(N) {}

  Blocks apply_y(const Vec& y) const {
    Blocks out;
    for (int b = 0; b < static_cast<int>(p_.blocks.size()); ++b) out.push_back(p_.block_value(b, y));
    return out;
  }

  Vec adjoint_y(const Blocks& W) const {
    Vec g = Vec::Zero(p_.dim);
    for (std::size_t b = 0; b < p_.blocks.size(); ++b)
      for (const SdpEntry& e : p_.blocks[b].entries)
        g[e.var] += e.row == e.col ? e.coef * W[b](e.row, e.row)
                                   : e.coef * (W[b](e.row, e.col) + W[b](e.col, e.row));
    return g;
  }

  // G x = -A(N x)
  Blocks G(const Vec& x) const {
    Blocks out = apply_y(N_ * x);
    for (auto& m : out) m = -m;
    return out;
  }
  // G^T W = -N^T A^*(W)
  Vec Gt(const Blocks& W) const { return -(N_.transpose() * adjoint_y(W)); }

  // N^T [sum_b tr(F_a V F_b V)] N for the given per-block V.
  Mat schur(const Blocks& V) const {
    Mat My = Mat::Zero(p_.dim, p_.dim);
    for (std::size_t b = 0; b < p_.blocks.size(); ++b) {
      const auto& E = p_.blocks[b].entries;
      const Mat& v = V[b];
      const std::size_t ne = E.size();
      for (std::size_t i = 0; i < ne; ++i) {
        const SdpEntry& e = E[i];
        const double we = e.coef * (e.row == e.col ? 1.0 : 2.0);
        for (std::size_t j = i; j < ne; ++j) {
          const SdpEntry& f = E[j];
          const double wf = f.coef * (f.row == f.col ? 1.0 : 2.0);
          const double t = v(e.col, f.row) * v(f.col, e.row) + v(e.col, f.col) * v(f.row, e.row);
          const double val = 0.5 * t * we * wf;
          My(e.var, f.var) += val;
          if (i != j) My(f.var, e.var) += val;
        }
      }
    }
    const Mat T = My * N_;
    Mat M = N_.transpose() * T;
    return sym(M);
  }

  int num_blocks() const { return static_cast<int>(p_.blocks.size()); }
  int block_size(int b) const { return p_.blocks[b].size; }

 private:
  const SdpProblem& p_;
  const Mat& N_;
};

// Nesterov-Todd scaling of one block: s = r diag(lam) r^T, z = r^{-T} diag(lam) r^{-1}.
struct Scaling {
  Mat r;
  Mat rinv;
  Vec lam;
};

bool cholesky_lower(const Mat& a, Mat& L) {
  Eigen::LLT<Mat> llt(a);
  if (llt.info() != Eigen::Success) return false;
  L = llt.matrixL();
  return L.allFinite() && L.diagonal().minCoeff() > 0.0;
}

bool scaling_from(const Mat& s, const Mat& z, Scaling& sc) {
  Mat Ls, Lz;
  if (!cholesky_lower(s, Ls) || !cholesky_lower(z, Lz)) return false;
  Eigen::JacobiSVD<Mat> svd(Lz.transpose() * Ls, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec sig = svd.singularValues();
  if (sig.minCoeff() <= 0.0) return false;
  const Vec isq = sig.cwiseSqrt().cwiseInverse();
  sc.r = Ls * svd.matrixV() * isq.asDiagonal();
  sc.rinv = sig.cwiseSqrt().asDiagonal() * svd.matrixV().transpose() *
            Ls.triangularView<Eigen::Lower>().solve(Mat::Identity(s.rows(), s.cols()));
  sc.lam = sig;
  return true;
}

// Update after a step taken in scaled coordinates; returns false when the
// scaled iterates lost definiteness.
bool scaling_update(Scaling& sc, const Mat& st, const Mat& zt) {
  Mat L1, L2;
  if (!cholesky_lower(st, L1) || !cholesky_lower(zt, L2)) return false;
  Eigen::JacobiSVD<Mat> svd(L2.transpose() * L1, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec sig = svd.singularValues();
  if (!(sig.minCoeff() > 0.0)) return false;
  const Mat V = svd.matrixV();
  const Mat L1inv = L1.triangularView<Eigen::Lower>().solve(Mat::Identity(st.rows(), st.cols()));
  sc.r = sc.r * L1 * V * sig.cwiseSqrt().cwiseInverse().asDiagonal();
  sc.rinv = sig.cwiseSqrt().asDiagonal() * V.transpose() * L1inv * sc.rinv;
  sc.lam = sig;
  return true;
}

// Largest alpha with diag(lam) + alpha * d PSD (infinity when unbounded).
double max_step(const Vec& lam, const Mat& d) {
  const Vec isq = lam.cwiseSqrt().cwiseInverse();
  const Mat m = sym(isq.asDiagonal() * d * isq.asDiagonal());
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  const double emin = es.eigenvalues()(0);
  return emin < 0.0 ? -1.0 / emin : std::numeric_limits<double>::infinity();
}

double max_step_scalar(double v, double dv) {
  return dv < 0.0 ? -v / dv : std::numeric_limits<double>::infinity();
}

// Solves lam o u = d, o the Jordan product (XY + YX) / 2.
Mat jordan_solve(const Vec& lam, const Mat& d) {
  Mat u(d.rows(), d.cols());
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index j = 0; j < d.cols(); ++j) u(i, j) = 2.0 * d(i, j) / (lam[i] + lam[j]);
  return u;
}

struct Factor {
  Eigen::LLT<Mat> llt;
  Mat M;
  bool ok = false;
};

Factor factor_schur(Mat M) {
  Factor f;
  f.M = M;
  const double scale = std::max(1e-300, M.diagonal().cwiseAbs().maxCoeff());
  double reg = 0.0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    if (reg > 0.0) M.diagonal().array() += reg;
    f.llt.compute(M);
    if (f.llt.info() == Eigen::Success) {
      f.ok = true;
      return f;
    }
    reg = reg == 0.0 ? 1e-14 * scale : reg * 100.0;
  }
  return f;
}

// Cholesky solve with iterative refinement against the unshifted matrix;
// keeps the dual residual decreasing once the Schur matrix is ill-conditioned.
Vec solve(const Factor& f, const Vec& rhs) {
  Vec x = f.llt.solve(rhs);
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 3; ++it) {
    const Vec r = rhs - f.M * x;
    const double rn = r.norm();
    if (!(rn < prev) || rn <= 1e-15 * rhs.norm()) break;
    prev = rn;
    x += f.llt.solve(r);
  }
  return x;
}

SdpSolution fixed_point_solution(const SdpProblem& p, const Vec& y, const SdpTolerances& tols) {
  SdpSolution sol;
  sol.y = Tms(p.nvars, 2 * p.order, y);
  sol.objective = sol.dual_objective = p.objective.dot(y);
  double worst = 0.0;
  for (int b = 0; b < static_cast<int>(p.blocks.size()); ++b) {
    Eigen::SelfAdjointEigenSolver<Mat> es(p.block_value(b, y), Eigen::EigenvaluesOnly);
    worst = std::min(worst, es.eigenvalues()(0));
    sol.dual_blocks.push_back(Mat::Zero(p.blocks[b].size, p.blocks[b].size));
  }
  sol.primal_residual = -worst;
  sol.status = -worst <= tols.feas_tol ? SdpStatus::Optimal : SdpStatus::PrimalInfeasible;
  return sol;
}

}  // namespace

SdpSolution solve_sdp_embedded(const SdpProblem& p, const SdpTolerances& tols) {
  if (p.dim <= 0 || p.objective.size() != p.dim)
    throw std::invalid_argument("solve_sdp: malformed problem dimensions");
  for (const SdpBlock& b : p.blocks)
    for (const SdpEntry& e : b.entries)
      if (e.row < 0 || e.col < e.row || e.col >= b.size || e.var < 0 || e.var >= p.dim)
        throw std::invalid_argument("solve_sdp: malformed block entry in '" + b.label + "'");

  // Equality elimination: y = yp + N x with N an orthonormal nullspace basis.
  const auto meq = static_cast<Eigen::Index>(p.equalities.size());
  Mat E = Mat::Zero(meq, p.dim);
  Vec f(meq);
  for (Eigen::Index r = 0; r < meq; ++r) {
    for (const auto& [v, c] : p.equalities[r].terms) E(r, v) += c;
    f[r] = p.equalities[r].rhs;
  }
  Eigen::ColPivHouseholderQR<Mat> qr(E.transpose());
  qr.setThreshold(1e-11);
  const Eigen::Index rank = qr.rank();
  const Mat Q = qr.householderQ();
  const Mat Q1 = Q.leftCols(rank);
  const Mat N = Q.rightCols(p.dim - rank);
  Vec yp = Vec::Zero(p.dim);
  if (rank > 0) yp = Q1 * (E * Q1).colPivHouseholderQr().solve(f);
  const Vec eres = f - E * yp;
  SdpSolution sol;
  if (eres.cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, f.cwiseAbs().maxCoeff())) {
    sol.status = SdpStatus::PrimalInfeasible;
    sol.y = Tms(p.nvars, 2 * p.order, yp);
    sol.primal_residual = eres.cwiseAbs().maxCoeff();
    sol.equality_certificate = eres / eres.norm();
    return sol;
  }
  if (N.cols() == 0) return fixed_point_solution(p, yp, tols);

  const ConicMap A(p, N);
  const int nb = A.num_blocks();
  const Vec c = N.transpose() * p.objective;
  const double c0 = p.objective.dot(yp);
  const Blocks h = A.apply_y(yp);
  const double resx0 = std::max(1.0, c.norm());
  const double resz0 = std::max(1.0, norm(h));
  int dims = 1;
  for (int b = 0; b < nb; ++b) dims += A.block_size(b);

  // Starting point: least-norm primal and dual estimates, shifted inside the cone.
  Blocks I;
  for (int b = 0; b < nb; ++b) I.push_back(Mat::Identity(A.block_size(b), A.block_size(b)));
  Factor f0 = factor_schur(A.schur(I));
  if (!f0.ok) throw std::runtime_error("solve_sdp: singular initial Schur matrix");
  Vec x = solve(f0, A.Gt(h));
  Blocks s = h;
  axpy(s, -1.0, A.G(x));
  Blocks z = A.G(solve(f0, -c));
  auto shift = [&](Blocks& m) {
    double lmin = std::numeric_limits<double>::infinity();
    for (const Mat& b : m) {
      Eigen::SelfAdjointEigenSolver<Mat> es(sym(b), Eigen::EigenvaluesOnly);
      lmin = std::min(lmin, es.eigenvalues()(0));
    }
    if (lmin <= 1e-8 * std::max(1.0, norm(m)))
      for (int b = 0; b < nb; ++b) m[b] = sym(m[b]) + (1.0 - lmin) * I[b];
  };
  shift(s);
  shift(z);
  double tau = 1.0, kappa = 1.0;

  std::vector<Scaling> W(nb);
  for (int b = 0; b < nb; ++b)
    if (!scaling_from(s[b], z[b], W[b])) throw std::runtime_error("solve_sdp: bad start");

  auto current_s = [&] {
    Blocks out(nb);
    for (int b = 0; b < nb; ++b) out[b] = W[b].r * W[b].lam.asDiagonal() * W[b].r.transpose();
    return out;
  };
  auto current_z = [&] {
    Blocks out(nb);
    for (int b = 0; b < nb; ++b)
      out[b] = W[b].rinv.transpose() * W[b].lam.asDiagonal() * W[b].rinv;
    return out;
  };

  const double loose = std::max(1e-6, 100.0 * std::max(tols.feas_tol, tols.gap_tol));
  sol.status = SdpStatus::IterationLimit;
  double pres = 0, dres = 0, relgap = 0, pcost = 0, dcost = 0;
  int stalls = 0;
  int iter = 0;
  // Best iterate by worst residual; restored when the run ends without a verdict.
  struct Snapshot {
    Vec x;
    std::vector<Scaling> W;
    double tau = 0, kappa = 0, pcost = 0, dcost = 0, pres = 0, dres = 0, relgap = 0;
    int iter = 0;
  };
  std::optional<Snapshot> best, usable;
  double best_merit = std::numeric_limits<double>::infinity();
  double usable_merit = std::numeric_limits<double>::infinity();
  int last_improve = 0;
  auto close_enough = [&](double pr, double dr, double gap) {
    return pr <= loose && gap <= loose && dr <= std::sqrt(loose);
  };
  const bool trace = std::getenv("NASHPOLY_SDP_TRACE") != nullptr;
  for (;; ++iter) {
    s = current_s();
    z = current_z();
    const Vec rx = A.Gt(z) + tau * c;
    Blocks rs = A.G(x);
    axpy(rs, 1.0, s);
    axpy(rs, -tau, h);
    const double hz = inner(h, z);
    const double cx = c.dot(x);
    const double rt = kappa + cx + hz;
    const double sz = inner(s, z);
    const double mu = (sz + tau * kappa) / dims;

    pcost = cx / tau + c0;
    dcost = -hz / tau + c0;
    pres = norm(rs) / tau / resz0;
    dres = rx.norm() / tau / resx0;
    relgap = std::abs(pcost - dcost) / (1.0 + std::abs(pcost) + std::abs(dcost));
    const double cgap = sz / (tau * tau) / (1.0 + std::abs(pcost));
    sol.iterations = iter;
    const double merit = std::max({pres, dres, relgap});
    if (merit < 0.9 * best_merit) {
      best_merit = merit;
      best = Snapshot{x, W, tau, kappa, pcost, dcost, pres, dres, relgap, iter};
      last_improve = iter;
    }
    if (dres <= std::sqrt(loose) && std::max(pres, relgap) < usable_merit) {
      usable_merit = std::max(pres, relgap);
      usable = Snapshot{x, W, tau, kappa, pcost, dcost, pres, dres, relgap, iter};
    }
    if (trace)
      std::fprintf(stderr,
                   "%3d pcost %.9e dcost %.9e pres %.2e dres %.2e gap %.2e tau %.2e kappa %.2e mu %.2e"
                   " pinf %.2e\n",
                   iter, pcost, dcost, pres, dres, relgap, tau, kappa, mu,
                   hz < 0.0 ? A.Gt(z).norm() / resx0 / (-hz) : -1.0);

    if (pres <= tols.feas_tol && dres <= tols.feas_tol && relgap <= tols.gap_tol &&
        cgap <= tols.gap_tol) {
      sol.status = SdpStatus::Optimal;
      break;
    }
    if (hz < 0.0 && A.Gt(z).norm() / resx0 / (-hz) <= tols.infeas_tol) {
      sol.status = SdpStatus::PrimalInfeasible;
      break;
    }
    if (cx < 0.0) {
      Blocks gs = A.G(x);
      axpy(gs, 1.0, s);
      if (norm(gs) / resz0 / (-cx) <= tols.infeas_tol) {
        sol.status = SdpStatus::DualInfeasible;
        break;
      }
    }
    if (iter >= tols.max_iters || stalls >= 5 || iter - last_improve >= tols.stall_iters) {
      sol.status = SdpStatus::IterationLimit;
      break;
    }

    // Schur complement with V = (r r^T)^{-1} per block.
    Blocks V(nb);
    for (int b = 0; b < nb; ++b) V[b] = sym(W[b].rinv.transpose() * W[b].rinv);
    const Factor F = factor_schur(A.schur(V));
    if (!F.ok) {
      sol.status = SdpStatus::IterationLimit;
      break;
    }
    Blocks VhV(nb);
    for (int b = 0; b < nb; ++b) VhV[b] = V[b] * h[b] * V[b];
    const Vec dx2 = solve(F, A.Gt(VhV) - c);
    Blocks dz2 = A.G(dx2);
    axpy(dz2, -1.0, h);
    for (int b = 0; b < nb; ++b) dz2[b] = V[b] * dz2[b] * V[b];
    const double den = c.dot(dx2) + inner(h, dz2) - kappa / tau;

    struct Dir {
      Vec dx;
      Blocks ds, dz;
      double dtau = 0, dkappa = 0;
    };
    auto direction = [&](double sigma, const std::vector<Mat>& dsv, double dk) {
      // dsv: right-hand side of lam o (ds~ + dz~) = dsv per block.
      Dir d;
      Blocks u(nb), t(nb);
      for (int b = 0; b < nb; ++b) {
        u[b] = jordan_solve(W[b].lam, dsv[b]);
        t[b] = V[b] * ((1.0 - sigma) * rs[b]) * V[b] + W[b].rinv.transpose() * u[b] * W[b].rinv;
      }
      const Vec dx1 = solve(F, -(1.0 - sigma) * rx - A.Gt(t));
      Blocks dz1 = A.G(dx1);
      for (int b = 0; b < nb; ++b)
        dz1[b] = V[b] * (dz1[b] + (1.0 - sigma) * rs[b]) * V[b] +
                 W[b].rinv.transpose() * u[b] * W[b].rinv;
      d.dtau = (-(1.0 - sigma) * rt - c.dot(dx1) - inner(h, dz1) - dk / tau) / den;
      d.dx = dx1 + d.dtau * dx2;
      d.dz = dz1;
      axpy(d.dz, d.dtau, dz2);
      d.ds = A.G(d.dx);
      for (int b = 0; b < nb; ++b) d.ds[b] = -(1.0 - sigma) * rs[b] - d.ds[b] + d.dtau * h[b];
      d.dkappa = (dk - kappa * d.dtau) / tau;
      return d;
    };
    auto scaled = [&](const Dir& d, Blocks& dst, Blocks& dzt) {
      dst.resize(nb);
      dzt.resize(nb);
      for (int b = 0; b < nb; ++b) {
        dst[b] = sym(W[b].rinv * d.ds[b] * W[b].rinv.transpose());
        dzt[b] = sym(W[b].r.transpose() * d.dz[b] * W[b].r);
      }
    };
    auto step_bound = [&](const Dir& d, const Blocks& dst, const Blocks& dzt) {
      double a = std::min(max_step_scalar(tau, d.dtau), max_step_scalar(kappa, d.dkappa));
      for (int b = 0; b < nb; ++b)
        a = std::min({a, max_step(W[b].lam, dst[b]), max_step(W[b].lam, dzt[b])});
      return a;
    };

    // Predictor.
    std::vector<Mat> lam2(nb);
    for (int b = 0; b < nb; ++b) lam2[b] = Mat((-W[b].lam.array().square()).matrix().asDiagonal());
    const Dir aff = direction(0.0, lam2, -tau * kappa);
    Blocks dsa, dza;
    scaled(aff, dsa, dza);
    const double alpha_aff = std::min(1.0, step_bound(aff, dsa, dza));
    const double sigma = std::pow(1.0 - alpha_aff, 3);

    // Corrector.
    std::vector<Mat> rhs(nb);
    for (int b = 0; b < nb; ++b) {
      const Mat prod = 0.5 * (dsa[b] * dza[b] + dza[b] * dsa[b]);
      rhs[b] = lam2[b] - prod + sigma * mu * I[b];
    }
    const Dir d = direction(sigma, rhs, -tau * kappa - aff.dtau * aff.dkappa + sigma * mu);
    Blocks dst, dzt;
    scaled(d, dst, dzt);
    double alpha = std::min(1.0, 0.99 * step_bound(d, dst, dzt));

    bool updated = false;
    for (int tries = 0; tries < 6 && !updated; ++tries, alpha *= 0.5) {
      std::vector<Scaling> Wn = W;
      bool ok = true;
      for (int b = 0; b < nb && ok; ++b) {
        const Mat L = W[b].lam.asDiagonal();
        ok = scaling_update(Wn[b], sym(L + alpha * dst[b]), sym(L + alpha * dzt[b]));
      }
      if (!ok) continue;
      W = std::move(Wn);
      x += alpha * d.dx;
      tau += alpha * d.dtau;
      kappa += alpha * d.dkappa;
      updated = true;
    }
    if (!updated || alpha < 1e-9) ++stalls;
    else stalls = 0;
    if (!updated) {
      sol.status = SdpStatus::IterationLimit;
      break;
    }
  }
  if (sol.status == SdpStatus::IterationLimit) {
    const bool use_usable = usable && close_enough(usable->pres, usable->dres, usable->relgap);
    if (const auto& snap = use_usable ? usable : best) {
      x = snap->x;
      W = snap->W;
      tau = snap->tau;
      kappa = snap->kappa;
      pcost = snap->pcost;
      dcost = snap->dcost;
      pres = snap->pres;
      dres = snap->dres;
      relgap = snap->relgap;
    }
    if (use_usable) sol.status = SdpStatus::Inaccurate;
  }

  s = current_s();
  z = current_z();
  if (sol.status == SdpStatus::PrimalInfeasible) {
    const double hz = inner(h, z);
    for (auto& m : z) m /= -hz;
    sol.dual_blocks = z;
    sol.y = Tms(p.nvars, 2 * p.order, yp + N * (x / tau));
  } else if (sol.status == SdpStatus::DualInfeasible) {
    sol.y = Tms(p.nvars, 2 * p.order, N * (x / -c.dot(x)));
    sol.dual_blocks = z;
  } else {
    const Vec y = yp + N * (x / tau);
    sol.y = Tms(p.nvars, 2 * p.order, y);
    for (auto& m : z) m /= tau;
    sol.dual_blocks = z;
  }
  sol.objective = pcost;
  sol.dual_objective = dcost;
  sol.primal_residual = pres;
  sol.dual_residual = dres;
  sol.gap = relgap;
  return sol;
}

namespace {

class EmbeddedBackend : public SdpBackend {
 public:
  std::string name() const override { return "embedded"; }
  SdpSolution solve(const SdpProblem& problem, const SdpTolerances& tols) const override {
    return solve_sdp_embedded(problem, tols);
  }
};

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::string, SdpBackendFactory>& registry() {
  static std::map<std::string, SdpBackendFactory> r = {
      {"embedded", [] { return std::unique_ptr<SdpBackend>(new EmbeddedBackend()); }}};
  return r;
}

}  // namespace

void register_sdp_backend(const std::string& name, SdpBackendFactory factory) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  registry()[name] = std::move(factory);
}

std::unique_ptr<SdpBackend> make_sdp_backend(const std::string& name) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  const auto it = registry().find(name);
  if (it == registry().end()) throw std::invalid_argument("unknown SDP back-end '" + name + "'");
  return it->second();
}

std::string selected_backend_name() {
  const char* env = std::getenv("NASHPOLY_SOLVER");
  return env && *env ? std::string(env) : std::string("embedded");
}

SdpSolution solve_sdp(const SdpProblem& problem, const SdpTolerances& tols) {
  if (!std::getenv("NASHPOLY_SDP_TRACE"))
    return make_sdp_backend(selected_backend_name())->solve(problem, tols);
  int largest = 0;
  for (const auto& b : problem.blocks) largest = std::max(largest, b.size);
  std::fprintf(stderr, "sdp: order %d dim %d equalities %zu blocks %zu largest %d\n", problem.order,
               problem.dim, problem.equalities.size(), problem.blocks.size(), largest);
  const auto t0 = std::chrono::steady_clock::now();
  SdpSolution sol = make_sdp_backend(selected_backend_name())->solve(problem, tols);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::fprintf(stderr, "sdp: %s after %d iterations, %.2fs\n", status_name(sol.status).c_str(),
               sol.iterations, secs);
  return sol;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string export_sdpa(const SdpProblem& p) {
  // (matno, block, row, col) -> value, matno 0 is F_0.
  std::map<std::tuple<int, int, int, int>, double> entries;
  const int npsd = static_cast<int>(p.blocks.size());
  for (int b = 0; b < npsd; ++b)
    for (const SdpEntry& e : p.blocks[b].entries) {
      // Sum F_i x_i - F_0 with the y_0 term moved into -F_0.
      const int mat = e.var;
      const double v = mat == 0 ? -e.coef : e.coef;
      entries[{mat, b + 1, e.row + 1, e.col + 1}] += v;
    }
  int lp_size = 0;
  for (std::size_t r = 1; r < p.equalities.size(); ++r) {
    const LinearRow& row = p.equalities[r];
    double b = row.rhs;
    for (const auto& [v, c] : row.terms)
      if (v == 0) b -= c;
    const int i_plus = lp_size + 1, i_minus = lp_size + 2;
    lp_size += 2;
    for (const auto& [v, c] : row.terms) {
      if (v == 0) continue;
      entries[{v, npsd + 1, i_plus, i_plus}] += c;
      entries[{v, npsd + 1, i_minus, i_minus}] -= c;
    }
    entries[{0, npsd + 1, i_plus, i_plus}] += b;
    entries[{0, npsd + 1, i_minus, i_minus}] -= b;
  }
  std::ostringstream os;
  os << "* nashpoly nvars " << p.nvars << " order " << p.order << " dim " << p.dim
     << " objective_constant " << num(p.objective[0]) << "\n";
  os << p.dim - 1 << "\n";
  os << npsd + (lp_size > 0 ? 1 : 0) << "\n";
  for (int b = 0; b < npsd; ++b) os << (b ? " " : "") << p.blocks[b].size;
  if (lp_size > 0) os << (npsd ? " " : "") << -lp_size;
  os << "\n";
  for (int v = 1; v < p.dim; ++v) os << (v > 1 ? " " : "") << num(p.objective[v]);
  os << "\n";
  for (const auto& [key, v] : entries) {
    if (v == 0.0) continue;
    const auto& [mat, blk, i, j] = key;
    os << mat << " " << blk << " " << i << " " << j << " " << num(v) << "\n";
  }
  return os.str();
}

SdpProblem import_sdpa(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  SdpProblem p;
  double objective_constant = 0.0;
  std::vector<std::string> body;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '*' || line[0] == '"') {
      std::istringstream ls(line.substr(1));
      std::string key;
      while (ls >> key) {
        if (key == "nvars") ls >> p.nvars;
        else if (key == "order") ls >> p.order;
        else if (key == "dim") ls >> p.dim;
        else if (key == "objective_constant") ls >> objective_constant;
      }
      continue;
    }
    for (char& ch : line)
      if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
    body.push_back(line);
  }
  std::istringstream bs([&] {
    std::string all;
    for (const auto& l : body) all += l + "\n";
    return all;
  }());
  int m = 0, nblocks = 0;
  if (!(bs >> m >> nblocks)) throw std::invalid_argument("import_sdpa: bad header");
  std::vector<int> sizes(nblocks);
  for (int& s : sizes)
    if (!(bs >> s)) throw std::invalid_argument("import_sdpa: bad block sizes");
  if (p.dim == 0) p.dim = m + 1;
  if (p.dim != m + 1) throw std::invalid_argument("import_sdpa: dimension mismatch");
  p.objective = Eigen::VectorXd::Zero(p.dim);
  p.objective[0] = objective_constant;
  for (int v = 1; v < p.dim; ++v)
    if (!(bs >> p.objective[v])) throw std::invalid_argument("import_sdpa: bad objective");
  p.equalities.push_back({{{0, 1.0}}, 1.0});
  int lp_block = -1, lp_size = 0;
  for (int b = 0; b < nblocks; ++b) {
    if (sizes[b] < 0) {
      lp_block = b + 1;
      lp_size = -sizes[b];
    } else {
      p.blocks.push_back({sizes[b], {}, "block " + std::to_string(b + 1)});
    }
  }
  std::vector<std::map<int, double>> lp_rows(lp_size / 2);
  std::vector<double> lp_rhs(lp_size / 2, 0.0);
  int mat, blk, i, j;
  double v;
  while (bs >> mat >> blk >> i >> j >> v) {
    if (blk == lp_block) {
      if (i % 2 == 0) continue;  // the negated copy
      const int r = (i - 1) / 2;
      if (mat == 0) lp_rhs[r] = v;
      else lp_rows[r][mat] += v;
      continue;
    }
    if (blk < 1 || blk > static_cast<int>(p.blocks.size()))
      throw std::invalid_argument("import_sdpa: bad block index");
    p.blocks[blk - 1].entries.push_back({i - 1, j - 1, mat, mat == 0 ? -v : v});
  }
  for (std::size_t r = 0; r < lp_rows.size(); ++r) {
    LinearRow row;
    for (const auto& [var, c] : lp_rows[r]) row.terms.emplace_back(var, c);
    row.rhs = lp_rhs[r];
    p.equalities.push_back(std::move(row));
  }
  return p;
}

}  // namespace nashpoly
