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


#include "nashpoly/ne_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "nashpoly/extraction.hpp"
#include "nashpoly/moment_sdp.hpp"

namespace nashpoly {

using Vec = Eigen::VectorXd;

void SolverOptions::validate() const {
  auto bad = [](const std::string& what) { throw std::invalid_argument("SolverOptions: " + what); };
  if (k_max < 0) bad("k_max must be >= 0");
  if (!(delta_init > 0.0)) bad("delta_init must be positive");
  if (!(delta_shrink > 1.0)) bad("delta_shrink must exceed 1");
  if (!(omega_tol > 0.0)) bad("omega_tol must be positive");
  if (!(feas_check_tol > 0.0)) bad("feas_check_tol must be positive");
  if (!(rank_tol > 0.0 && rank_tol < 1.0)) bad("rank_tol must lie in (0, 1)");
  if (max_outer_loops < 1) bad("max_outer_loops must be >= 1");
  if (!(distinct_tol > 0.0)) bad("distinct_tol must be positive");
}

std::string ne_status_name(NeStatus status) {
  switch (status) {
    case NeStatus::FoundAll: return "found-all";
    case NeStatus::FoundSome: return "found-some";
    case NeStatus::NoneExists: return "none-exists";
    case NeStatus::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

KktViolation kkt_violation(const KktSystem& sys, const Vec& x) {
  KktViolation v;
  for (const auto& p : sys.phi) v.equality = std::max(v.equality, std::abs(evaluate(p, x)));
  for (const auto& q : sys.psi) v.inequality = std::max(v.inequality, -evaluate(q, x));
  return v;
}

namespace {

int order_cap(const SolverOptions& opts, int d0) {
  return opts.k_max > 0 ? std::max(opts.k_max, d0) : d0 + 2;
}

bool feasible(const std::vector<Polynomial>& eq, const std::vector<Polynomial>& ineq, const Vec& x,
              double tol) {
  for (const auto& p : eq)
    if (std::abs(evaluate(p, x)) > tol) return false;
  for (const auto& q : ineq)
    if (evaluate(q, x) < -tol) return false;
  return true;
}

// Absolute slack used when comparing a relaxation bound with a point value.
double bound_slack(double value) { return 1e-6 * std::max(1.0, std::abs(value)); }

Vec first_moments(const Tms& y) {
  Vec u(y.nvars);
  for (int j = 0; j < y.nvars; ++j) u[j] = y[MultiIndex::unit(y.nvars, j)];
  return u;
}

// Points suggested by a relaxation solution: the first moments and, when a
// flat truncation exists, the extracted atoms. All are refined on `eq`.
std::vector<Vec> suggested_points(const SdpSolution& sol, int d0, int k, const std::vector<Polynomial>& eq,
                                  const SolverOptions& opts) {
  std::vector<Vec> raw;
  raw.push_back(first_moments(sol.y));
  const FlatReport flat = flat_truncation(sol.y, d0, k, opts.rank_tol);
  if (flat.t && flat.rank > 1) {
    ExtractionOptions eo;
    eo.rank_tol = opts.rank_tol;
    eo.seed = opts.seed;
    const ExtractionResult ex = extract_minimizers(sol.y, *flat.t, flat.rank, eo);
    for (const auto& p : ex.points) raw.push_back(p);
  }
  std::vector<Vec> out;
  for (const Vec& x : raw) out.push_back(eq.empty() ? x : refine_point(x, eq).x);
  return out;
}

struct PopResult {
  MasterOutcome outcome = MasterOutcome::Inconclusive;
  Vec x;
  double bound = 0.0;
  std::optional<double> last_bound;
  std::vector<int> orders;
  std::vector<std::string> statuses;
};

// Moment hierarchy for min objective s.t. eq = 0, ineq >= 0. A point is
// accepted when it is feasible and its value is within slack of the bound.
// With use_inaccurate, moments of an Inaccurate solve also propose points;
// the master does this since every candidate is verified afterwards.
PopResult solve_pop(const Polynomial& objective, const std::vector<Polynomial>& eq,
                    const std::vector<Polynomial>& ineq, const SolverOptions& opts,
                    bool use_inaccurate = false) {
  RelaxationSpec spec{objective, eq, ineq, 0};
  const int d0 = minimum_order(spec);
  PopResult res;
  for (int k = d0; k <= order_cap(opts, d0); ++k) {
    spec.order = k;
    const SdpSolution sol = solve_sdp(assemble_relaxation(spec), opts.sdp);
    res.orders.push_back(k);
    res.statuses.push_back(status_name(sol.status));
    if (sol.status == SdpStatus::PrimalInfeasible) {
      res.outcome = MasterOutcome::Infeasible;
      return res;
    }
    const bool usable = sol.status == SdpStatus::Optimal ||
                        (use_inaccurate && sol.status == SdpStatus::Inaccurate);
    if (!usable) continue;
    if (sol.status == SdpStatus::Optimal) res.last_bound = sol.objective;
    // An Inaccurate bound is only good to the dual residual band.
    const double slack = sol.status == SdpStatus::Optimal ? bound_slack(sol.objective)
                                                          : 1e3 * bound_slack(sol.objective);
    std::optional<Vec> best;
    double best_val = std::numeric_limits<double>::infinity();
    for (const Vec& x : suggested_points(sol, d0, k, eq, opts)) {
      if (!feasible(eq, ineq, x, opts.feas_check_tol)) continue;
      const double v = evaluate(objective, x);
      if (v <= sol.objective + slack && v < best_val) {
        best = x;
        best_val = v;
      }
    }
    if (best) {
      res.outcome = MasterOutcome::Candidate;
      res.x = *best;
      res.bound = sol.objective;
      return res;
    }
  }
  return res;
}

// Quadratic-penalty gradient descent on min f s.t. eq = 0, ineq >= 0,
// followed by a Gauss-Newton projection onto the violated constraints.
Vec local_descent(const Polynomial& f, const std::vector<Polynomial>& eq,
                  const std::vector<Polynomial>& ineq, Vec x) {
  const int n = static_cast<int>(x.size());
  auto grad_of = [n](const Polynomial& p) {
    std::vector<Polynomial> g;
    for (int j = 0; j < n; ++j) g.push_back(p.derivative(j));
    return g;
  };
  const auto gf = grad_of(f);
  std::vector<std::vector<Polynomial>> geq, gin;
  for (const auto& p : eq) geq.push_back(grad_of(p));
  for (const auto& q : ineq) gin.push_back(grad_of(q));
  auto eval_grad = [&](const std::vector<Polynomial>& g, const Vec& z) {
    Vec out(n);
    for (int j = 0; j < n; ++j) out[j] = evaluate(g[static_cast<std::size_t>(j)], z);
    return out;
  };
  for (double rho : {10.0, 1e2, 1e3, 1e4}) {
    auto merit = [&](const Vec& z) {
      double m = evaluate(f, z);
      for (const auto& p : eq) m += rho * std::pow(evaluate(p, z), 2);
      for (const auto& q : ineq) m += rho * std::pow(std::min(0.0, evaluate(q, z)), 2);
      return m;
    };
    double step = 1.0;
    for (int it = 0; it < 300; ++it) {
      Vec g = eval_grad(gf, x);
      for (std::size_t a = 0; a < eq.size(); ++a) g += 2.0 * rho * evaluate(eq[a], x) * eval_grad(geq[a], x);
      for (std::size_t a = 0; a < ineq.size(); ++a) {
        const double v = evaluate(ineq[a], x);
        if (v < 0.0) g += 2.0 * rho * v * eval_grad(gin[a], x);
      }
      if (g.norm() < 1e-12) break;
      const double m0 = merit(x);
      step = std::min(1.0, step * 2.0);
      bool moved = false;
      while (step > 1e-14) {
        const Vec trial = x - step * g;
        if (merit(trial) <= m0 - 1e-4 * step * g.squaredNorm()) {
          x = trial;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
  }
  std::vector<Polynomial> active = eq;
  for (const auto& q : ineq)
    if (evaluate(q, x) < 0.0) active.push_back(q);
  if (!active.empty()) x = refine_point(x, active).x;
  return x;
}

void sort_unique(std::vector<Vec>& pts, double tol) {
  std::vector<Vec> out;
  for (const Vec& p : pts) {
    bool dup = false;
    for (const Vec& q : out) dup = dup || (p - q).lpNorm<Eigen::Infinity>() <= tol;
    if (!dup) out.push_back(p);
  }
  pts = std::move(out);
}

PlayerCheck check_player(const NepProblem& nep, int i, const Vec& u, const SolverOptions& opts) {
  const PlayerProblem& pl = nep.player(i);
  const CheckSets cs = check_sets(nep, i, u);
  std::vector<Polynomial> own_eq, own_in;
  for (int j : pl.equality_indices()) own_eq.push_back(pl.own_constraint(j));
  for (int j : pl.inequality_indices()) own_in.push_back(pl.own_constraint(j));

  RelaxationSpec spec{cs.objective, cs.equalities, cs.inequalities, 0};
  const int d0 = minimum_order(spec);
  PlayerCheck pc;
  std::optional<double> last;
  std::vector<Vec> fallback;
  int unbounded_run = 0;
  for (int k = d0; k <= order_cap(opts, d0); ++k) {
    spec.order = k;
    const SdpSolution sol = solve_sdp(assemble_relaxation(spec), opts.sdp);
    pc.orders.push_back(k);
    pc.sdp_statuses.push_back(status_name(sol.status));
    if (sol.status == SdpStatus::DualInfeasible) {
      if (++unbounded_run >= 2) {
        pc.unbounded = true;
        pc.omega = -std::numeric_limits<double>::infinity();
        pc.note = "lower-level relaxation unbounded at two consecutive orders";
        return pc;
      }
      continue;
    }
    unbounded_run = 0;
    if (sol.status != SdpStatus::Optimal) continue;
    last = sol.objective;
    if (sol.objective >= -opts.omega_tol) {
      pc.omega = sol.objective;
      pc.certified = true;
      return pc;
    }
    std::vector<Vec> certified;
    for (const Vec& v : suggested_points(sol, d0, k, cs.equalities, opts)) {
      if (!feasible(own_eq, own_in, v, opts.feas_check_tol)) continue;
      const double val = evaluate(cs.objective, v);
      if (val >= -opts.omega_tol) continue;
      if (val <= sol.objective + bound_slack(sol.objective))
        certified.push_back(v);
      else
        fallback.push_back(v);
    }
    if (!certified.empty()) {
      sort_unique(certified, opts.distinct_tol);
      pc.omega = sol.objective;
      pc.certified = true;
      pc.responses = std::move(certified);
      return pc;
    }
  }
  if (!last) {
    pc.note = "no order of the lower-level hierarchy solved to optimality";
    pc.omega = std::numeric_limits<double>::quiet_NaN();
    return pc;
  }
  pc.omega = *last;
  pc.note = "no flat truncation; improving response found by local search";
  if (fallback.empty()) {
    const Vec v = local_descent(cs.objective, own_eq, own_in, block_part(nep.layout(), i, u));
    if (feasible(own_eq, own_in, v, opts.feas_check_tol) && evaluate(cs.objective, v) < -opts.omega_tol)
      fallback.push_back(v);
  }
  if (!fallback.empty()) {
    auto best = std::min_element(fallback.begin(), fallback.end(), [&](const Vec& a, const Vec& b) {
      return evaluate(cs.objective, a) < evaluate(cs.objective, b);
    });
    pc.responses.push_back(*best);
  } else {
    pc.note = "no improving response found";
  }
  return pc;
}

Equilibrium make_equilibrium(const NepProblem& nep, const KktSystem& sys, const Vec& x,
                             const CandidateCheck& cc, const Polynomial& theta, int loop) {
  Equilibrium e;
  e.x = x;
  e.omega_star = cc.omega_star;
  for (const auto& p : cc.players) e.omega.push_back(p.omega);
  for (int i = 0; i < nep.num_players(); ++i) {
    const auto& lam = sys.lambda_exprs[static_cast<std::size_t>(i)];
    Vec l(static_cast<Eigen::Index>(lam.size()));
    for (std::size_t j = 0; j < lam.size(); ++j) l[static_cast<Eigen::Index>(j)] = evaluate(lam[j], x);
    e.multipliers.push_back(std::move(l));
  }
  e.theta = evaluate(theta, x);
  e.loop = loop;
  return e;
}

std::vector<int> counts_of(const std::vector<std::vector<Vec>>& cuts) {
  std::vector<int> c;
  for (const auto& k : cuts) c.push_back(static_cast<int>(k.size()));
  return c;
}

enum class LoopOutcome { Found, Infeasible, Inconclusive };

struct LoopResult {
  LoopOutcome outcome = LoopOutcome::Inconclusive;
  std::optional<Equilibrium> equilibrium;
  std::string message;
};

// The cut loop: solve the master problem, check the candidate, add cuts.
LoopResult cut_loop(const NepProblem& nep, const KktSystem& base, SearchState& state,
                    std::optional<double> level, const SolverOptions& opts,
                    std::vector<LoopRecord>& trace, int& loop_counter) {
  const Polynomial theta = theta_polynomial(state.theta, nep.layout());
  LoopResult lr;
  for (int it = 0; it < opts.max_outer_loops; ++it) {
    const KktSystem sys = attach_cuts(base, nep, state.cuts);
    const MasterResult mr = solve_master(sys, nep.layout(), state.theta, level, opts);
    LoopRecord rec;
    rec.loop = ++loop_counter;
    rec.phase = level ? "next" : "master";
    rec.orders = mr.orders;
    rec.sdp_statuses = mr.sdp_statuses;
    rec.cut_counts = counts_of(state.cuts);
    if (mr.outcome == MasterOutcome::Infeasible) {
      rec.note = "master relaxation infeasible";
      trace.push_back(rec);
      lr.outcome = LoopOutcome::Infeasible;
      return lr;
    }
    if (mr.outcome == MasterOutcome::Inconclusive) {
      rec.note = "no order of the master hierarchy produced a certified minimizer";
      trace.push_back(rec);
      lr.message = rec.note;
      return lr;
    }
    rec.candidate = mr.u;
    const CandidateCheck cc = check_candidate(nep, mr.u, opts);
    for (const auto& p : cc.players) rec.omega.push_back(p.omega);
    if (cc.inconclusive) {
      rec.note = "candidate check inconclusive";
      for (const auto& p : cc.players)
        if (!p.note.empty()) rec.note += "; " + p.note;
      trace.push_back(rec);
      lr.message = rec.note;
      return lr;
    }
    if (cc.omega_star >= -opts.omega_tol) {
      rec.note = "equilibrium";
      trace.push_back(rec);
      lr.outcome = LoopOutcome::Found;
      lr.equilibrium = make_equilibrium(nep, base, mr.u, cc, theta, rec.loop);
      return lr;
    }
    if (opts.convex) {
      rec.note = "convex mode: KKT point is not an equilibrium";
      trace.push_back(rec);
      lr.message = rec.note;
      return lr;
    }
    bool added = false;
    for (int i = 0; i < nep.num_players(); ++i) {
      const PlayerCheck& p = cc.players[static_cast<std::size_t>(i)];
      if (p.omega >= -opts.omega_tol) continue;
      for (const Vec& v : p.responses) {
        state.cuts[static_cast<std::size_t>(i)].push_back(v);
        added = true;
      }
    }
    rec.note = "not an equilibrium; cuts added";
    trace.push_back(rec);
    if (!added) {
      lr.message = "candidate rejected but no cut point available";
      return lr;
    }
  }
  lr.message = "outer loop limit reached";
  return lr;
}

}  // namespace

MasterResult solve_master(const KktSystem& sys, const BlockLayout& layout, const Eigen::MatrixXd& theta,
                          std::optional<double> level, const SolverOptions& opts) {
  const Polynomial th = theta_polynomial(theta, layout);
  std::vector<Polynomial> psi = sys.psi;
  if (level) psi.push_back(th - Polynomial::constant(layout, *level));
  const PopResult pr = solve_pop(th, sys.phi, psi, opts, true);
  MasterResult mr;
  mr.outcome = pr.outcome;
  mr.u = pr.x;
  mr.vartheta = pr.bound;
  mr.orders = pr.orders;
  mr.sdp_statuses = pr.statuses;
  return mr;
}

CandidateCheck check_candidate(const NepProblem& nep, const Vec& u, const SolverOptions& opts) {
  if (u.size() != nep.dimension()) throw std::invalid_argument("check_candidate: candidate has wrong dimension");
  CandidateCheck cc;
  cc.omega_star = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nep.num_players(); ++i) {
    PlayerCheck pc = check_player(nep, i, u, opts);
    if (std::isnan(pc.omega) || pc.unbounded ||
        (pc.omega < -opts.omega_tol && pc.responses.empty()))
      cc.inconclusive = true;
    if (!std::isnan(pc.omega)) cc.omega_star = std::min(cc.omega_star, pc.omega);
    cc.players.push_back(std::move(pc));
  }
  if (nep.num_players() == 0) cc.omega_star = 0.0;
  return cc;
}

SearchState initial_state(const NepProblem& nep, const SolverOptions& opts) {
  SearchState s;
  s.theta = gen_theta(opts.seed, nep.dimension());
  s.cuts.assign(static_cast<std::size_t>(nep.num_players()), {});
  return s;
}

NeReport find_one_ne(const NepProblem& nep, const SolverOptions& opts) {
  opts.validate();
  const auto t0 = std::chrono::steady_clock::now();
  NeReport rep;
  SearchState state = initial_state(nep, opts);
  rep.theta = state.theta;
  int loops = 0;
  const LoopResult lr = cut_loop(nep, kkt_sets(nep), state, std::nullopt, opts, rep.trace, loops);
  switch (lr.outcome) {
    case LoopOutcome::Found:
      rep.status = NeStatus::FoundSome;
      rep.equilibria.push_back(*lr.equilibrium);
      break;
    case LoopOutcome::Infeasible:
      rep.status = NeStatus::NoneExists;
      rep.message = "the KKT system with cuts is infeasible";
      break;
    case LoopOutcome::Inconclusive:
      rep.status = NeStatus::Inconclusive;
      rep.message = lr.message;
      break;
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

NextResult find_next_ne(const NepProblem& nep, const Equilibrium& known, SearchState& state,
                        const SolverOptions& opts, std::vector<LoopRecord>* trace, int* loop_counter) {
  opts.validate();
  std::vector<LoopRecord> local_trace;
  int local_counter = 0;
  std::vector<LoopRecord>& tr = trace ? *trace : local_trace;
  int& counter = loop_counter ? *loop_counter : local_counter;

  const KktSystem base = kkt_sets(nep);
  const Polynomial theta = theta_polynomial(state.theta, nep.layout());
  const double upsilon = evaluate(theta, known.x);
  NextResult res;

  // Shrink delta until no feasible point has theta in (upsilon, upsilon + delta].
  double delta = opts.delta_init;
  for (;;) {
    if (delta < 1e-12) {
      res.message = "delta underflow while separating the next theta level";
      return res;
    }
    const KktSystem sys = attach_cuts(base, nep, state.cuts);
    std::vector<Polynomial> psi = sys.psi;
    psi.push_back(Polynomial::constant(nep.layout(), upsilon + delta) - theta);
    const PopResult pr = solve_pop(-1.0 * theta, sys.phi, psi, opts);
    LoopRecord rec;
    rec.loop = ++counter;
    rec.phase = "gate";
    rec.orders = pr.orders;
    rec.sdp_statuses = pr.statuses;
    rec.cut_counts = counts_of(state.cuts);
    std::ostringstream note;
    note << "delta " << delta;
    double eta = std::numeric_limits<double>::quiet_NaN();
    if (pr.outcome == MasterOutcome::Candidate) {
      eta = -pr.bound;
      rec.candidate = pr.x;
    } else if (pr.last_bound) {
      eta = -*pr.last_bound;
    }
    if (pr.outcome == MasterOutcome::Infeasible ||
        (!std::isnan(eta) && eta <= upsilon + bound_slack(upsilon))) {
      note << ": gate closed";
      rec.note = note.str();
      tr.push_back(rec);
      break;
    }
    if (std::isnan(eta)) {
      note << ": gate relaxation unsolved";
      rec.note = note.str();
      tr.push_back(rec);
      res.message = "the delta-gate relaxation could not be solved";
      return res;
    }
    note << ": max theta " << eta << " above level";
    rec.note = note.str();
    tr.push_back(rec);
    delta = std::min(delta / opts.delta_shrink, eta - upsilon);
  }

  const LoopResult lr = cut_loop(nep, base, state, upsilon + delta, opts, tr, counter);
  switch (lr.outcome) {
    case LoopOutcome::Found:
      res.outcome = NextOutcome::NextNe;
      res.equilibrium = lr.equilibrium;
      break;
    case LoopOutcome::Infeasible:
      res.outcome = NextOutcome::NoMore;
      break;
    case LoopOutcome::Inconclusive:
      res.message = lr.message;
      break;
  }
  return res;
}

NeReport enumerate_nes(const NepProblem& nep, const SolverOptions& opts) {
  opts.validate();
  const auto t0 = std::chrono::steady_clock::now();
  NeReport rep;
  SearchState state = initial_state(nep, opts);
  rep.theta = state.theta;
  int loops = 0;
  const LoopResult first = cut_loop(nep, kkt_sets(nep), state, std::nullopt, opts, rep.trace, loops);
  auto finish = [&](NeStatus st, std::string msg) {
    rep.status = st;
    rep.message = std::move(msg);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
  };
  if (first.outcome == LoopOutcome::Infeasible)
    return finish(NeStatus::NoneExists, "the KKT system with cuts is infeasible");
  if (first.outcome == LoopOutcome::Inconclusive) return finish(NeStatus::Inconclusive, first.message);
  rep.equilibria.push_back(*first.equilibrium);
  for (;;) {
    const NextResult nr = find_next_ne(nep, rep.equilibria.back(), state, opts, &rep.trace, &loops);
    if (nr.outcome == NextOutcome::NoMore) return finish(NeStatus::FoundAll, "");
    if (nr.outcome == NextOutcome::Inconclusive) return finish(NeStatus::Inconclusive, nr.message);
    bool dup = false;
    for (const auto& e : rep.equilibria)
      dup = dup || (e.x - nr.equilibrium->x).lpNorm<Eigen::Infinity>() <= opts.distinct_tol;
    if (dup) return finish(NeStatus::Inconclusive, "the next level returned a known equilibrium");
    rep.equilibria.push_back(*nr.equilibrium);
  }
}

}  // namespace nashpoly
