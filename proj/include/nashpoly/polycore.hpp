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

#ifndef NASHPOLY_POLYCORE_HPP
#define NASHPOLY_POLYCORE_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace nashpoly {

/// Exponent vector alpha with cached total degree |alpha|.
///
/// Ordering is graded alphabetical: lower total degree first; within one
/// degree the exponent vectors are compared lexicographically in
/// descending order, so for (z1, z2) the cubic block reads
/// z1^3, z1^2 z2, z1 z2^2, z2^3.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents);

  static MultiIndex zero(int nvars);
  static MultiIndex unit(int nvars, int var);

  int nvars() const { return static_cast<int>(exps_.size()); }
  int degree() const { return degree_; }
  int operator[](int i) const { return exps_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& exponents() const { return exps_; }

  MultiIndex operator+(const MultiIndex& other) const;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.exps_ == b.exps_;
  }
  friend std::strong_ordering operator<=>(const MultiIndex& a,
                                          const MultiIndex& b);

 private:
  std::vector<int> exps_;
  int degree_ = 0;
};

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex& a) const noexcept;
};

/// C(n, k) as a 64-bit integer; zero when k < 0 or k > n.
std::int64_t binomial(int n, int k);

/// All alpha with |alpha| <= d in graded alphabetical order. The list has
/// C(nvars + d, d) entries.
std::vector<MultiIndex> monomial_basis(int nvars, int d);

/// Position of alpha in monomial_basis(alpha.nvars(), d) for any
/// d >= |alpha|. The position does not depend on d.
int basis_position(const MultiIndex& alpha);

/// Number of monomials of degree <= d in nvars variables.
int basis_size(int nvars, int d);

/// Player blocks of the joint strategy vector x = (x_1, ..., x_N).
class BlockLayout {
 public:
  BlockLayout() = default;
  explicit BlockLayout(std::vector<int> widths);

  /// A single block covering all variables.
  static BlockLayout single(int nvars);

  int num_blocks() const { return static_cast<int>(widths_.size()); }
  int total() const { return total_; }
  int width(int block) const;
  int offset(int block) const;
  /// Block that owns the given variable.
  int block_of(int var) const;
  const std::vector<int>& widths() const { return widths_; }

  friend bool operator==(const BlockLayout&, const BlockLayout&) = default;

 private:
  std::vector<int> widths_;
  std::vector<int> offsets_;
  int total_ = 0;
};

/// Sparse multivariate polynomial with double coefficients.
///
/// Values are immutable: arithmetic returns new polynomials. Zero
/// coefficients are never stored. The zero polynomial has degree 0.
class Polynomial {
 public:
  using Terms = std::map<MultiIndex, double>;

  Polynomial() = default;
  explicit Polynomial(BlockLayout layout);
  Polynomial(BlockLayout layout,
             const std::vector<std::pair<double, MultiIndex>>& terms);

  static Polynomial constant(const BlockLayout& layout, double value);
  static Polynomial variable(const BlockLayout& layout, int var);
  static Polynomial monomial(const BlockLayout& layout, double coef,
                             const MultiIndex& alpha);

  int nvars() const { return layout_.total(); }
  const BlockLayout& layout() const { return layout_; }
  const Terms& terms() const { return terms_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  double coefficient(const MultiIndex& alpha) const;
  double constant_term() const;
  /// Largest absolute coefficient.
  double max_abs_coefficient() const;
  /// True when only variables of the given block appear.
  bool depends_only_on_block(int block) const;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double s, const Polynomial& p);
  friend Polynomial operator*(const Polynomial& p, double s) { return s * p; }

  /// Exact partial derivative with respect to variable `var`.
  Polynomial derivative(int var) const;

  /// Same terms, reinterpreted under a layout with equal total width.
  Polynomial with_layout(BlockLayout layout) const;

  /// Drops terms with |coefficient| <= tol.
  Polynomial pruned(double tol) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.layout_.total() == b.layout_.total() && a.terms_ == b.terms_;
  }

  std::string to_string() const;

 private:
  void add_in_place(const MultiIndex& alpha, double coef);

  BlockLayout layout_;
  Terms terms_;
};

/// Truncated multi-sequence y indexed by monomial_basis(nvars, order).
struct Tms {
  int order = 0;
  int nvars = 0;
  Eigen::VectorXd values;

  Tms() = default;
  Tms(int nvars_, int order_);
  Tms(int nvars_, int order_, Eigen::VectorXd values_);

  double operator[](const MultiIndex& alpha) const;
  double& operator[](const MultiIndex& alpha);
  double y0() const { return values.size() ? values[0] : 0.0; }
};

double evaluate(const Polynomial& p, std::span<const double> point);
double evaluate(const Polynomial& p, const Eigen::VectorXd& point);

/// Gradient of p with respect to the variables of player block i.
std::vector<Polynomial> block_gradient(const Polynomial& p, int block);

/// <f, y> = sum_alpha f_alpha y_alpha.
double pair(const Polynomial& f, const Tms& y);

/// Moment vector of the Dirac measure at u: y_alpha = u^alpha.
Tms lift(const Eigen::VectorXd& u, int order);

/// Substitutes numeric values for every block except `block`; the result is
/// a polynomial in the n_i variables of that block.
Polynomial restrict_rivals(const Polynomial& p, int block,
                           std::span<const double> rivals);
Polynomial restrict_rivals(const Polynomial& p, int block,
                           const Eigen::VectorXd& rivals);

/// Concatenation of all blocks except `block` of a joint vector.
Eigen::VectorXd rival_part(const BlockLayout& layout, int block,
                           const Eigen::VectorXd& x);
/// The `block` part of a joint vector.
Eigen::VectorXd block_part(const BlockLayout& layout, int block,
                           const Eigen::VectorXd& x);
/// Joint vector with block `block` replaced by `own`.
Eigen::VectorXd replace_block(const BlockLayout& layout, int block,
                              const Eigen::VectorXd& x,
                              const Eigen::VectorXd& own);

/// Re-embeds a polynomial in n_i variables into the full layout at `block`.
Polynomial embed_block(const Polynomial& p, const BlockLayout& layout,
                       int block);

}  // namespace nashpoly

#endif  // NASHPOLY_POLYCORE_HPP
