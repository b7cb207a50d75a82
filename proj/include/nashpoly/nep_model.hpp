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

#ifndef NASHPOLY_NEP_MODEL_HPP
#define NASHPOLY_NEP_MODEL_HPP

#include <optional>
#include <string>
#include <vector>

#include "nashpoly/polycore.hpp"

namespace nashpoly {

enum class FamilyKind { Ball, Sphere, SimplexLike, Box, Unconstrained, Custom };

std::string family_name(FamilyKind kind);
FamilyKind family_from_name(const std::string& name);

enum class ConstraintKind { Equality, Inequality };

/// One constraint g_{i,j}(x_i) = 0 or >= 0, stored in the joint layout.
struct Constraint {
  ConstraintKind kind = ConstraintKind::Inequality;
  Polynomial g;
};

/// Bounds of one coordinate for the Box family. At least one side is set.
struct BoxBound {
  std::optional<double> lower;
  std::optional<double> upper;
  friend bool operator==(const BoxBound&, const BoxBound&) = default;
};

/// Row-major matrix of polynomials.
using PolyMatrix = std::vector<std::vector<Polynomial>>;

/// Shape of a player's constraint tuple together with the data needed to
/// write its Lagrange multipliers as polynomials.
///
/// Built-in families carry a polynomial left inverse H_i of the KKT matrix
/// G_i. Custom families carry user multiplier expressions (joint layout)
/// and optionally a left inverse (own-block variables) used for
/// verification.
struct ConstraintFamily {
  FamilyKind kind = FamilyKind::Unconstrained;
  std::vector<BoxBound> bounds;
  std::vector<Polynomial> custom_multipliers;
  PolyMatrix custom_left_inverse;
};

class PlayerProblem {
 public:
  PlayerProblem() = default;
  /// General constructor; validates the family against the constraints.
  PlayerProblem(BlockLayout layout, int index, Polynomial objective,
                std::vector<Constraint> constraints, ConstraintFamily family);

  static PlayerProblem ball(const BlockLayout& layout, int index,
                            Polynomial objective);
  static PlayerProblem sphere(const BlockLayout& layout, int index,
                              Polynomial objective);
  static PlayerProblem simplex(const BlockLayout& layout, int index,
                               Polynomial objective);
  static PlayerProblem box(const BlockLayout& layout, int index,
                           Polynomial objective, std::vector<BoxBound> bounds);
  static PlayerProblem unconstrained(const BlockLayout& layout, int index,
                                     Polynomial objective);
  /// Custom family. Supply multiplier expressions, a left inverse, or both.
  static PlayerProblem custom(const BlockLayout& layout, int index,
                              Polynomial objective,
                              std::vector<Constraint> constraints,
                              std::vector<Polynomial> multipliers,
                              PolyMatrix left_inverse = {});

  int index() const { return index_; }
  int width() const { return layout_.width(index_); }
  const BlockLayout& layout() const { return layout_; }
  const Polynomial& objective() const { return objective_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const ConstraintFamily& family() const { return family_; }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  std::vector<int> equality_indices() const;
  std::vector<int> inequality_indices() const;

  /// Constraint j as a polynomial in the n_i own variables.
  Polynomial own_constraint(int j) const;

  friend bool operator==(const PlayerProblem& a, const PlayerProblem& b);

 private:
  BlockLayout layout_;
  int index_ = 0;
  Polynomial objective_;
  std::vector<Constraint> constraints_;
  ConstraintFamily family_;
};

class NepProblem {
 public:
  NepProblem() = default;
  explicit NepProblem(std::vector<PlayerProblem> players);

  int num_players() const { return static_cast<int>(players_.size()); }
  int dimension() const { return layout_.total(); }
  const BlockLayout& layout() const { return layout_; }
  const PlayerProblem& player(int i) const;
  const std::vector<PlayerProblem>& players() const { return players_; }

  friend bool operator==(const NepProblem&, const NepProblem&) = default;

 private:
  std::vector<PlayerProblem> players_;
  BlockLayout layout_;
};

/// KKT polynomial sets of the whole game.
struct KktSystem {
  std::vector<Polynomial> phi;
  std::vector<Polynomial> psi;
  /// lambda_exprs[i][j] = lambda_{i,j}(x) in the joint layout.
  std::vector<std::vector<Polynomial>> lambda_exprs;
  /// Number of cut inequalities appended to psi, per player.
  std::vector<int> cut_counts;
};

/// The KKT matrix G_i(x_i): rows are the n_i gradient components followed by
/// the m_i diagonal constraint rows; columns follow the constraints.
PolyMatrix constraint_matrix(const PlayerProblem& player);

/// Polynomial left inverse H_i(x_i) of constraint_matrix for the built-in
/// families, or the user-supplied one for Custom. Empty when not available.
PolyMatrix left_inverse(const PlayerProblem& player);

/// lambda_{i,j}(x) for every constraint of the player, in the joint layout.
std::vector<Polynomial> multiplier_expressions(const PlayerProblem& player);

KktSystem kkt_sets(const NepProblem& nep);

/// Appends f_i(v, x_{-i}) - f_i(x) >= 0 for every v in cuts[i].
KktSystem attach_cuts(const KktSystem& sys, const NepProblem& nep,
                      const std::vector<std::vector<Eigen::VectorXd>>& cuts);

/// Polynomial p with block `block` replaced by the numeric vector v.
Polynomial substitute_block(const Polynomial& p, int block,
                            const Eigen::VectorXd& v);

struct CheckSets {
  std::vector<Polynomial> equalities;    // H_i(u)
  std::vector<Polynomial> inequalities;  // G_i(u)
  Polynomial objective;                  // f_i(x_i, u_-i) - f_i(u)
};

/// Lower-level polynomial sets of player i at candidate u, in the n_i own
/// variables.
CheckSets check_sets(const NepProblem& nep, int i, const Eigen::VectorXd& u);

/// Diagnostics collected while validating a game.
struct ModelDiagnostics {
  std::vector<std::string> warnings;
};

/// Numeric checks of the multiplier data: H G = I at random points for any
/// available left inverse, agreement of custom expressions with H, and a
/// rank test of G_i at random points. Throws on a failed H G = I check.
ModelDiagnostics verify_multipliers(const NepProblem& nep, unsigned seed = 1,
                                    int samples = 20);

}  // namespace nashpoly

#endif  // NASHPOLY_NEP_MODEL_HPP
