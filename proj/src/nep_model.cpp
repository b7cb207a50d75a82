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

#include "nashpoly/nep_model.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace nashpoly {

std::string family_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Ball: return "ball";
    case FamilyKind::Sphere: return "sphere";
    case FamilyKind::SimplexLike: return "simplex";
    case FamilyKind::Box: return "box";
    case FamilyKind::Unconstrained: return "unconstrained";
    case FamilyKind::Custom: return "custom";
  }
  return "unknown";
}

FamilyKind family_from_name(const std::string& name) {
  if (name == "ball") return FamilyKind::Ball;
  if (name == "sphere") return FamilyKind::Sphere;
  if (name == "simplex") return FamilyKind::SimplexLike;
  if (name == "box") return FamilyKind::Box;
  if (name == "unconstrained") return FamilyKind::Unconstrained;
  if (name == "custom") return FamilyKind::Custom;
  throw std::invalid_argument("unknown constraint family '" + name + "'");
}

namespace {

Polynomial own_var(const BlockLayout& layout, int index, int j) {
  return Polynomial::variable(layout, layout.offset(index) + j);
}

Polynomial squared_norm(const BlockLayout& layout, int index) {
  Polynomial s(layout);
  for (int j = 0; j < layout.width(index); ++j) {
    const Polynomial x = own_var(layout, index, j);
    s = s + x * x;
  }
  return s;
}

std::vector<Constraint> family_constraints(const BlockLayout& layout,
                                           int index,
                                           const ConstraintFamily& fam) {
  const Polynomial one = Polynomial::constant(layout, 1.0);
  const int w = layout.width(index);
  std::vector<Constraint> out;
  switch (fam.kind) {
    case FamilyKind::Ball:
      out.push_back({ConstraintKind::Inequality, one - squared_norm(layout, index)});
      break;
    case FamilyKind::Sphere:
      out.push_back({ConstraintKind::Equality, one - squared_norm(layout, index)});
      break;
    case FamilyKind::SimplexLike: {
      Polynomial g0 = one;
      for (int j = 0; j < w; ++j) g0 = g0 - own_var(layout, index, j);
      out.push_back({ConstraintKind::Inequality, g0});
      for (int j = 0; j < w; ++j)
        out.push_back({ConstraintKind::Inequality, own_var(layout, index, j)});
      break;
    }
    case FamilyKind::Box: {
      if (static_cast<int>(fam.bounds.size()) != w)
        throw std::invalid_argument("box family needs one bound per coordinate");
      for (int j = 0; j < w; ++j) {
        const BoxBound& b = fam.bounds[static_cast<std::size_t>(j)];
        if (!b.lower && !b.upper)
          throw std::invalid_argument("box coordinate without any bound");
        if (b.lower && b.upper && !(*b.lower < *b.upper))
          throw std::invalid_argument("box bound requires lower < upper");
        const Polynomial x = own_var(layout, index, j);
        if (b.upper)
          out.push_back({ConstraintKind::Inequality,
                         Polynomial::constant(layout, *b.upper) - x});
        if (b.lower)
          out.push_back({ConstraintKind::Inequality,
                         x - Polynomial::constant(layout, *b.lower)});
      }
      break;
    }
    case FamilyKind::Unconstrained:
    case FamilyKind::Custom:
      break;
  }
  return out;
}

bool same_polynomial(const Polynomial& a, const Polynomial& b) {
  const Polynomial d = a - b;
  const double scale = std::max({1.0, a.max_abs_coefficient(), b.max_abs_coefficient()});
  return d.max_abs_coefficient() <= 1e-12 * scale;
}

}  // namespace

PlayerProblem::PlayerProblem(BlockLayout layout, int index,
                             Polynomial objective,
                             std::vector<Constraint> constraints,
                             ConstraintFamily family)
    : layout_(std::move(layout)),
      index_(index),
      objective_(std::move(objective)),
      constraints_(std::move(constraints)),
      family_(std::move(family)) {
  if (index_ < 0 || index_ >= layout_.num_blocks())
    throw std::invalid_argument("invalid player index");
  if (objective_.nvars() != layout_.total())
    throw std::invalid_argument("objective of player " + std::to_string(index_ + 1) +
                                " has wrong number of variables");
  objective_ = objective_.with_layout(layout_);
  for (std::size_t j = 0; j < constraints_.size(); ++j) {
    Constraint& c = constraints_[j];
    if (c.g.nvars() != layout_.total())
      throw std::invalid_argument("constraint has wrong number of variables");
    c.g = c.g.with_layout(layout_);
    if (!c.g.depends_only_on_block(index_))
      throw std::invalid_argument("constraint " + std::to_string(j + 1) +
                                  " of player " + std::to_string(index_ + 1) +
                                  " depends on rival block");
  }
  const int m = num_constraints();
  const int w = width();
  if (family_.kind == FamilyKind::Custom) {
    if (family_.custom_multipliers.empty() && family_.custom_left_inverse.empty() && m > 0)
      throw std::invalid_argument("custom family of player " +
                                  std::to_string(index_ + 1) +
                                  " needs multiplier expressions or a left inverse");
    if (!family_.custom_multipliers.empty()) {
      if (static_cast<int>(family_.custom_multipliers.size()) != m)
        throw std::invalid_argument("custom family: one multiplier per constraint required");
      for (auto& p : family_.custom_multipliers) {
        if (p.nvars() != layout_.total())
          throw std::invalid_argument("custom multiplier has wrong number of variables");
        p = p.with_layout(layout_);
      }
    }
    if (!family_.custom_left_inverse.empty()) {
      if (static_cast<int>(family_.custom_left_inverse.size()) != m)
        throw std::invalid_argument("custom left inverse must have m_i rows");
      for (auto& row : family_.custom_left_inverse) {
        if (static_cast<int>(row.size()) != w + m)
          throw std::invalid_argument("custom left inverse must have n_i + m_i columns");
        for (auto& p : row) {
          if (p.nvars() != w)
            throw std::invalid_argument("left inverse entries are polynomials in x_i");
          p = p.with_layout(BlockLayout::single(w));
        }
      }
    }
    return;
  }
  const auto expected = family_constraints(layout_, index_, family_);
  if (expected.size() != constraints_.size())
    throw std::invalid_argument("family " + family_name(family_.kind) +
                                " does not match the constraint count of player " +
                                std::to_string(index_ + 1));
  for (std::size_t j = 0; j < expected.size(); ++j) {
    if (expected[j].kind != constraints_[j].kind ||
        !same_polynomial(expected[j].g, constraints_[j].g))
      throw std::invalid_argument("family " + family_name(family_.kind) +
                                  " does not match constraint " + std::to_string(j + 1) +
                                  " of player " + std::to_string(index_ + 1));
  }
}

PlayerProblem PlayerProblem::ball(const BlockLayout& layout, int index,
                                  Polynomial objective) {
  ConstraintFamily fam{FamilyKind::Ball, {}, {}, {}};
  return PlayerProblem(layout, index, std::move(objective),
                       family_constraints(layout, index, fam), fam);
}

PlayerProblem PlayerProblem::sphere(const BlockLayout& layout, int index,
                                    Polynomial objective) {
  ConstraintFamily fam{FamilyKind::Sphere, {}, {}, {}};
  return PlayerProblem(layout, index, std::move(objective),
                       family_constraints(layout, index, fam), fam);
}

PlayerProblem PlayerProblem::simplex(const BlockLayout& layout, int index,
                                     Polynomial objective) {
  ConstraintFamily fam{FamilyKind::SimplexLike, {}, {}, {}};
  return PlayerProblem(layout, index, std::move(objective),
                       family_constraints(layout, index, fam), fam);
}

PlayerProblem PlayerProblem::box(const BlockLayout& layout, int index,
                                 Polynomial objective,
                                 std::vector<BoxBound> bounds) {
  ConstraintFamily fam{FamilyKind::Box, std::move(bounds), {}, {}};
  auto cons = family_constraints(layout, index, fam);
  return PlayerProblem(layout, index, std::move(objective), std::move(cons),
                       std::move(fam));
}

PlayerProblem PlayerProblem::unconstrained(const BlockLayout& layout, int index,
                                           Polynomial objective) {
  return PlayerProblem(layout, index, std::move(objective), {},
                       ConstraintFamily{FamilyKind::Unconstrained, {}, {}, {}});
}

PlayerProblem PlayerProblem::custom(const BlockLayout& layout, int index,
                                    Polynomial objective,
                                    std::vector<Constraint> constraints,
                                    std::vector<Polynomial> multipliers,
                                    PolyMatrix left_inverse) {
  ConstraintFamily fam{FamilyKind::Custom, {}, std::move(multipliers),
                       std::move(left_inverse)};
  return PlayerProblem(layout, index, std::move(objective),
                       std::move(constraints), std::move(fam));
}

std::vector<int> PlayerProblem::equality_indices() const {
  std::vector<int> out;
  for (int j = 0; j < num_constraints(); ++j)
    if (constraints_[static_cast<std::size_t>(j)].kind == ConstraintKind::Equality)
      out.push_back(j);
  return out;
}

std::vector<int> PlayerProblem::inequality_indices() const {
  std::vector<int> out;
  for (int j = 0; j < num_constraints(); ++j)
    if (constraints_[static_cast<std::size_t>(j)].kind == ConstraintKind::Inequality)
      out.push_back(j);
  return out;
}

Polynomial PlayerProblem::own_constraint(int j) const {
  const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(layout_.total() - width());
  return restrict_rivals(constraints_.at(static_cast<std::size_t>(j)).g, index_, zeros);
}

bool operator==(const PlayerProblem& a, const PlayerProblem& b) {
  if (!(a.layout_ == b.layout_) || a.index_ != b.index_ ||
      !(a.objective_ == b.objective_) ||
      a.constraints_.size() != b.constraints_.size() ||
      a.family_.kind != b.family_.kind || !(a.family_.bounds == b.family_.bounds) ||
      !(a.family_.custom_multipliers == b.family_.custom_multipliers) ||
      !(a.family_.custom_left_inverse == b.family_.custom_left_inverse))
    return false;
  for (std::size_t j = 0; j < a.constraints_.size(); ++j)
    if (a.constraints_[j].kind != b.constraints_[j].kind ||
        !(a.constraints_[j].g == b.constraints_[j].g))
      return false;
  return true;
}

NepProblem::NepProblem(std::vector<PlayerProblem> players)
    : players_(std::move(players)) {
  if (players_.empty()) throw std::invalid_argument("a game needs at least one player");
  layout_ = players_.front().layout();
  for (std::size_t i = 0; i < players_.size(); ++i) {
    if (!(players_[i].layout() == layout_))
      throw std::invalid_argument("inconsistent block layout across players");
    if (players_[i].index() != static_cast<int>(i))
      throw std::invalid_argument("players must be listed in block order");
  }
  if (layout_.num_blocks() != num_players())
    throw std::invalid_argument("layout block count differs from player count");
}

const PlayerProblem& NepProblem::player(int i) const {
  if (i < 0 || i >= num_players()) throw std::out_of_range("invalid player index");
  return players_[static_cast<std::size_t>(i)];
}

PolyMatrix constraint_matrix(const PlayerProblem& player) {
  const int w = player.width();
  const int m = player.num_constraints();
  const BlockLayout own = BlockLayout::single(w);
  PolyMatrix G(static_cast<std::size_t>(w + m),
               std::vector<Polynomial>(static_cast<std::size_t>(m), Polynomial(own)));
  for (int j = 0; j < m; ++j) {
    const Polynomial g = player.own_constraint(j);
    for (int r = 0; r < w; ++r)
      G[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] = g.derivative(r);
    G[static_cast<std::size_t>(w + j)][static_cast<std::size_t>(j)] = g;
  }
  return G;
}

PolyMatrix left_inverse(const PlayerProblem& player) {
  const int w = player.width();
  const int m = player.num_constraints();
  const BlockLayout own = BlockLayout::single(w);
  auto zero_matrix = [&] {
    return PolyMatrix(static_cast<std::size_t>(m),
                      std::vector<Polynomial>(static_cast<std::size_t>(w + m),
                                              Polynomial(own)));
  };
  auto x = [&](int j) { return Polynomial::variable(own, j); };
  auto c = [&](double v) { return Polynomial::constant(own, v); };
  auto at = [](PolyMatrix& H, int r, int col) -> Polynomial& {
    return H[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
  };
  const ConstraintFamily& fam = player.family();
  switch (fam.kind) {
    case FamilyKind::Ball:
    case FamilyKind::Sphere: {
      PolyMatrix H = zero_matrix();
      for (int j = 0; j < w; ++j) at(H, 0, j) = -0.5 * x(j);
      at(H, 0, w) = c(1.0);
      return H;
    }
    case FamilyKind::SimplexLike: {
      PolyMatrix H = zero_matrix();
      for (int r = 0; r <= w; ++r) {
        for (int j = 0; j < w; ++j) at(H, r, j) = -1.0 * x(j);
        if (r > 0) at(H, r, r - 1) = at(H, r, r - 1) + c(1.0);
        for (int col = 0; col < m; ++col) at(H, r, w + col) = c(1.0);
      }
      return H;
    }
    case FamilyKind::Box: {
      PolyMatrix H = zero_matrix();
      int row = 0;
      for (int j = 0; j < w; ++j) {
        const BoxBound& b = fam.bounds[static_cast<std::size_t>(j)];
        if (b.lower && b.upper) {
          const double span = *b.upper - *b.lower;
          const int ru = row, rl = row + 1;
          const Polynomial t = (1.0 / span) * (x(j) - c(*b.lower));
          at(H, ru, j) = -1.0 * t;
          at(H, rl, j) = c(1.0) - t;
          for (int r : {ru, rl}) {
            at(H, r, w + ru) = c(1.0 / span);
            at(H, r, w + rl) = c(1.0 / span);
          }
          row += 2;
        } else if (b.upper) {
          at(H, row, j) = c(-1.0);
          row += 1;
        } else {
          at(H, row, j) = c(1.0);
          row += 1;
        }
      }
      return H;
    }
    case FamilyKind::Unconstrained:
      return {};
    case FamilyKind::Custom:
      return fam.custom_left_inverse;
  }
  return {};
}

std::vector<Polynomial> multiplier_expressions(const PlayerProblem& player) {
  const ConstraintFamily& fam = player.family();
  if (fam.kind == FamilyKind::Custom && !fam.custom_multipliers.empty())
    return fam.custom_multipliers;
  if (player.num_constraints() == 0) return {};
  const PolyMatrix H = left_inverse(player);
  if (H.empty())
    throw std::invalid_argument("custom family without multiplier expressions");
  const BlockLayout& L = player.layout();
  const auto grad = block_gradient(player.objective(), player.index());
  std::vector<Polynomial> out;
  out.reserve(H.size());
  for (const auto& row : H) {
    Polynomial lam(L);
    for (int k = 0; k < player.width(); ++k) {
      const Polynomial& h = row[static_cast<std::size_t>(k)];
      if (h.is_zero()) continue;
      lam = lam + embed_block(h, L, player.index()) * grad[static_cast<std::size_t>(k)];
    }
    out.push_back(std::move(lam));
  }
  return out;
}

KktSystem kkt_sets(const NepProblem& nep) {
  KktSystem sys;
  sys.cut_counts.assign(static_cast<std::size_t>(nep.num_players()), 0);
  for (const PlayerProblem& pl : nep.players()) {
    const auto lam = multiplier_expressions(pl);
    const auto grad_f = block_gradient(pl.objective(), pl.index());
    for (int r = 0; r < pl.width(); ++r) {
      Polynomial stat = grad_f[static_cast<std::size_t>(r)];
      for (int j = 0; j < pl.num_constraints(); ++j) {
        const Polynomial dg =
            pl.constraints()[static_cast<std::size_t>(j)].g.derivative(
                pl.layout().offset(pl.index()) + r);
        if (dg.is_zero()) continue;
        stat = stat - lam[static_cast<std::size_t>(j)] * dg;
      }
      sys.phi.push_back(std::move(stat));
    }
    for (int j : pl.equality_indices())
      sys.phi.push_back(pl.constraints()[static_cast<std::size_t>(j)].g);
    for (int j : pl.inequality_indices())
      sys.phi.push_back(lam[static_cast<std::size_t>(j)] *
                        pl.constraints()[static_cast<std::size_t>(j)].g);
    for (int j : pl.inequality_indices())
      sys.psi.push_back(pl.constraints()[static_cast<std::size_t>(j)].g);
    for (int j : pl.inequality_indices())
      sys.psi.push_back(lam[static_cast<std::size_t>(j)]);
    sys.lambda_exprs.push_back(lam);
  }
  return sys;
}

Polynomial substitute_block(const Polynomial& p, int block,
                            const Eigen::VectorXd& v) {
  const BlockLayout& L = p.layout();
  const int off = L.offset(block);
  const int w = L.width(block);
  if (v.size() != w) throw std::invalid_argument("substitute_block: width mismatch");
  std::vector<std::pair<double, MultiIndex>> terms;
  for (const auto& [alpha, c] : p.terms()) {
    double coef = c;
    std::vector<int> e = alpha.exponents();
    for (int j = 0; j < w; ++j) {
      for (int k = 0; k < e[static_cast<std::size_t>(off + j)]; ++k) coef *= v[j];
      e[static_cast<std::size_t>(off + j)] = 0;
    }
    terms.emplace_back(coef, MultiIndex(std::move(e)));
  }
  return Polynomial(L, terms);
}

KktSystem attach_cuts(const KktSystem& sys, const NepProblem& nep,
                      const std::vector<std::vector<Eigen::VectorXd>>& cuts) {
  if (static_cast<int>(cuts.size()) > nep.num_players())
    throw std::invalid_argument("attach_cuts: more cut lists than players");
  KktSystem out = sys;
  if (out.cut_counts.size() < static_cast<std::size_t>(nep.num_players()))
    out.cut_counts.resize(static_cast<std::size_t>(nep.num_players()), 0);
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const PlayerProblem& pl = nep.player(static_cast<int>(i));
    for (const Eigen::VectorXd& v : cuts[i]) {
      if (v.size() != pl.width())
        throw std::invalid_argument("attach_cuts: cut point has wrong dimension");
      out.psi.push_back(substitute_block(pl.objective(), pl.index(), v) - pl.objective());
      out.cut_counts[i] += 1;
    }
  }
  return out;
}

CheckSets check_sets(const NepProblem& nep, int i, const Eigen::VectorXd& u) {
  if (u.size() != nep.dimension())
    throw std::invalid_argument("check_sets: candidate has wrong dimension");
  const PlayerProblem& pl = nep.player(i);
  const Eigen::VectorXd rivals = rival_part(nep.layout(), i, u);
  const auto lam = multiplier_expressions(pl);
  std::vector<Polynomial> lam_r;
  for (const auto& l : lam) lam_r.push_back(restrict_rivals(l, i, rivals));

  CheckSets cs;
  for (int j : pl.equality_indices()) cs.equalities.push_back(pl.own_constraint(j));
  for (int j : pl.inequality_indices())
    cs.equalities.push_back(lam_r[static_cast<std::size_t>(j)] * pl.own_constraint(j));
  const Polynomial f_r = restrict_rivals(pl.objective(), i, rivals);
  for (int r = 0; r < pl.width(); ++r) {
    Polynomial stat = f_r.derivative(r);
    for (int j = 0; j < pl.num_constraints(); ++j) {
      const Polynomial dg = pl.own_constraint(j).derivative(r);
      if (dg.is_zero()) continue;
      stat = stat - lam_r[static_cast<std::size_t>(j)] * dg;
    }
    cs.equalities.push_back(std::move(stat));
  }
  for (int j : pl.inequality_indices()) cs.inequalities.push_back(pl.own_constraint(j));
  for (int j : pl.inequality_indices())
    cs.inequalities.push_back(lam_r[static_cast<std::size_t>(j)]);
  const double f_u = evaluate(pl.objective(), u);
  cs.objective = f_r - Polynomial::constant(f_r.layout(), f_u);
  return cs;
}

namespace {

Eigen::MatrixXd evaluate_matrix(const PolyMatrix& M, const Eigen::VectorXd& x) {
  if (M.empty()) return {};
  Eigen::MatrixXd out(static_cast<Eigen::Index>(M.size()),
                      static_cast<Eigen::Index>(M.front().size()));
  for (std::size_t r = 0; r < M.size(); ++r)
    for (std::size_t c = 0; c < M[r].size(); ++c)
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = evaluate(M[r][c], x);
  return out;
}

}  // namespace

ModelDiagnostics verify_multipliers(const NepProblem& nep, unsigned seed,
                                    int samples) {
  ModelDiagnostics diag;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (const PlayerProblem& pl : nep.players()) {
    const int m = pl.num_constraints();
    if (m == 0) continue;
    const std::string who = "player " + std::to_string(pl.index() + 1);
    const PolyMatrix G = constraint_matrix(pl);
    const PolyMatrix H = left_inverse(pl);
    const bool custom_lambda = pl.family().kind == FamilyKind::Custom &&
                               !pl.family().custom_multipliers.empty();
    if (H.empty())
      diag.warnings.push_back(who + ": multiplier expressions supplied without a left "
                                    "inverse; the identity H G = I is not verified");
    int rank_deficient = 0;
    for (int s = 0; s < samples; ++s) {
      Eigen::VectorXd x(nep.dimension());
      for (Eigen::Index k = 0; k < x.size(); ++k) x[k] = unif(rng);
      const Eigen::VectorXd xi = block_part(nep.layout(), pl.index(), x);
      const Eigen::MatrixXd Gv = evaluate_matrix(G, xi);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(Gv);
      const auto& sv = svd.singularValues();
      if (sv.size() < m || sv[m - 1] <= 1e-10 * std::max(1.0, sv[0])) ++rank_deficient;
      if (H.empty()) continue;
      const Eigen::MatrixXd Hv = evaluate_matrix(H, xi);
      const double err = (Hv * Gv - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
      const double scale = std::max(1.0, Hv.cwiseAbs().maxCoeff() * Gv.cwiseAbs().maxCoeff());
      if (err > 1e-9 * scale)
        throw std::invalid_argument(who + ": left inverse fails H G = I at a sample point");
      if (custom_lambda) {
        // The supplied expressions must equal H f_hat at every point.
        const auto grad = block_gradient(pl.objective(), pl.index());
        Eigen::VectorXd fhat = Eigen::VectorXd::Zero(pl.width() + m);
        for (int k = 0; k < pl.width(); ++k)
          fhat[k] = evaluate(grad[static_cast<std::size_t>(k)], x);
        const Eigen::VectorXd lam_h = Hv * fhat;
        for (int j = 0; j < m; ++j) {
          const double lj = evaluate(pl.family().custom_multipliers[static_cast<std::size_t>(j)], x);
          if (std::abs(lj - lam_h[j]) > 1e-8 * std::max(1.0, std::abs(lam_h[j])))
            throw std::invalid_argument(who + ": multiplier expression " +
                                        std::to_string(j + 1) +
                                        " disagrees with the left inverse");
        }
      }
    }
    if (rank_deficient > 0) {
      std::ostringstream os;
      os << who << ": constraint matrix G_i is rank deficient at " << rank_deficient
         << " of " << samples << " sampled points";
      diag.warnings.push_back(os.str());
    }
  }
  return diag;
}

}  // namespace nashpoly
