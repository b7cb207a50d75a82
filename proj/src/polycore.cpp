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

#include "nashpoly/polycore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace nashpoly {

MultiIndex::MultiIndex(std::vector<int> exponents)
    : exps_(std::move(exponents)) {
  for (int e : exps_) {
    if (e < 0) throw std::invalid_argument("negative exponent in MultiIndex");
    degree_ += e;
  }
}

MultiIndex MultiIndex::zero(int nvars) {
  return MultiIndex(std::vector<int>(static_cast<std::size_t>(nvars), 0));
}

MultiIndex MultiIndex::unit(int nvars, int var) {
  std::vector<int> e(static_cast<std::size_t>(nvars), 0);
  e.at(static_cast<std::size_t>(var)) = 1;
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (other.nvars() != nvars())
    throw std::invalid_argument("MultiIndex length mismatch");
  std::vector<int> e(exps_);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.exps_[i];
  MultiIndex out;
  out.exps_ = std::move(e);
  out.degree_ = degree_ + other.degree_;
  return out;
}

std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
  if (a.degree_ != b.degree_) return a.degree_ <=> b.degree_;
  // Within a degree: larger leading exponents come first.
  const std::size_t n = std::min(a.exps_.size(), b.exps_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.exps_[i] != b.exps_[i]) return b.exps_[i] <=> a.exps_[i];
  }
  return a.exps_.size() <=> b.exps_.size();
}

std::size_t MultiIndexHash::operator()(const MultiIndex& a) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (int e : a.exponents()) {
    h ^= static_cast<std::size_t>(e) + 0x9e3779b97f4a7c15ULL + (h << 6) +
         (h >> 2);
  }
  return h;
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

int basis_size(int nvars, int d) {
  if (d < 0) return 0;
  return static_cast<int>(binomial(nvars + d, d));
}

namespace {

void append_degree(int nvars, int d, std::vector<int>& current, int var,
                   int remaining, std::vector<MultiIndex>& out) {
  if (var == nvars - 1) {
    current[static_cast<std::size_t>(var)] = remaining;
    out.emplace_back(current);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[static_cast<std::size_t>(var)] = e;
    append_degree(nvars, d, current, var + 1, remaining - e, out);
  }
  current[static_cast<std::size_t>(var)] = 0;
}

}  // namespace

std::vector<MultiIndex> monomial_basis(int nvars, int d) {
  if (nvars < 1) throw std::invalid_argument("monomial_basis: nvars < 1");
  if (d < 0) throw std::invalid_argument("monomial_basis: d < 0");
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(basis_size(nvars, d)));
  std::vector<int> current(static_cast<std::size_t>(nvars), 0);
  for (int deg = 0; deg <= d; ++deg)
    append_degree(nvars, deg, current, 0, deg, out);
  return out;
}

int basis_position(const MultiIndex& alpha) {
  const int n = alpha.nvars();
  const int d = alpha.degree();
  std::int64_t pos = d > 0 ? binomial(n + d - 1, d - 1) : 0;
  int rem = d;
  for (int i = 0; i + 1 < n; ++i) {
    const int parts = n - i - 1;
    for (int v = alpha[i] + 1; v <= rem; ++v)
      pos += binomial(rem - v + parts - 1, parts - 1);
    rem -= alpha[i];
  }
  return static_cast<int>(pos);
}

BlockLayout::BlockLayout(std::vector<int> widths) : widths_(std::move(widths)) {
  offsets_.reserve(widths_.size());
  for (int w : widths_) {
    if (w < 1) throw std::invalid_argument("block width must be positive");
    offsets_.push_back(total_);
    total_ += w;
  }
}

BlockLayout BlockLayout::single(int nvars) { return BlockLayout({nvars}); }

int BlockLayout::width(int block) const {
  if (block < 0 || block >= num_blocks())
    throw std::out_of_range("invalid player index");
  return widths_[static_cast<std::size_t>(block)];
}

int BlockLayout::offset(int block) const {
  if (block < 0 || block >= num_blocks())
    throw std::out_of_range("invalid player index");
  return offsets_[static_cast<std::size_t>(block)];
}

int BlockLayout::block_of(int var) const {
  for (int b = num_blocks() - 1; b >= 0; --b)
    if (var >= offsets_[static_cast<std::size_t>(b)]) return b;
  throw std::out_of_range("variable outside layout");
}

Polynomial::Polynomial(BlockLayout layout) : layout_(std::move(layout)) {}

Polynomial::Polynomial(BlockLayout layout,
                       const std::vector<std::pair<double, MultiIndex>>& terms)
    : layout_(std::move(layout)) {
  for (const auto& [c, a] : terms) {
    if (a.nvars() != layout_.total())
      throw std::invalid_argument("term length does not match nvars");
    add_in_place(a, c);
  }
}

Polynomial Polynomial::constant(const BlockLayout& layout, double value) {
  Polynomial p(layout);
  p.add_in_place(MultiIndex::zero(layout.total()), value);
  return p;
}

Polynomial Polynomial::variable(const BlockLayout& layout, int var) {
  Polynomial p(layout);
  p.add_in_place(MultiIndex::unit(layout.total(), var), 1.0);
  return p;
}

Polynomial Polynomial::monomial(const BlockLayout& layout, double coef,
                                const MultiIndex& alpha) {
  if (alpha.nvars() != layout.total())
    throw std::invalid_argument("term length does not match nvars");
  Polynomial p(layout);
  p.add_in_place(alpha, coef);
  return p;
}

void Polynomial::add_in_place(const MultiIndex& alpha, double coef) {
  if (coef == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(alpha, coef);
  if (!inserted) {
    it->second += coef;
    if (it->second == 0.0) terms_.erase(it);
  }
}

int Polynomial::degree() const {
  return terms_.empty() ? 0 : terms_.rbegin()->first.degree();
}

double Polynomial::coefficient(const MultiIndex& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::constant_term() const {
  if (terms_.empty()) return 0.0;
  const auto& [a, c] = *terms_.begin();
  return a.degree() == 0 ? c : 0.0;
}

double Polynomial::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& [a, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

bool Polynomial::depends_only_on_block(int block) const {
  const int lo = layout_.offset(block);
  const int hi = lo + layout_.width(block);
  for (const auto& [a, c] : terms_)
    for (int v = 0; v < a.nvars(); ++v)
      if (a[v] != 0 && (v < lo || v >= hi)) return false;
  return true;
}

namespace {

const BlockLayout& common_layout(const Polynomial& a, const Polynomial& b) {
  if (a.nvars() != b.nvars())
    throw std::invalid_argument("polynomial nvars mismatch");
  return a.layout().num_blocks() >= b.layout().num_blocks() ? a.layout()
                                                            : b.layout();
}

}  // namespace

Polynomial Polynomial::operator-() const { return -1.0 * *this; }

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  Polynomial out(common_layout(a, b));
  out.terms_ = a.terms_;
  for (const auto& [alpha, c] : b.terms_) out.add_in_place(alpha, c);
  return out;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  Polynomial out(common_layout(a, b));
  out.terms_ = a.terms_;
  for (const auto& [alpha, c] : b.terms_) out.add_in_place(alpha, -c);
  return out;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out(common_layout(a, b));
  for (const auto& [alpha, ca] : a.terms_)
    for (const auto& [beta, cb] : b.terms_) out.add_in_place(alpha + beta, ca * cb);
  return out;
}

Polynomial operator*(double s, const Polynomial& p) {
  Polynomial out(p.layout_);
  if (s == 0.0) return out;
  for (const auto& [alpha, c] : p.terms_) out.add_in_place(alpha, s * c);
  return out;
}

Polynomial Polynomial::derivative(int var) const {
  if (var < 0 || var >= nvars())
    throw std::out_of_range("derivative: variable index out of range");
  Polynomial out(layout_);
  for (const auto& [alpha, c] : terms_) {
    const int e = alpha[var];
    if (e == 0) continue;
    std::vector<int> ex = alpha.exponents();
    ex[static_cast<std::size_t>(var)] -= 1;
    out.add_in_place(MultiIndex(std::move(ex)), c * e);
  }
  return out;
}

Polynomial Polynomial::with_layout(BlockLayout layout) const {
  if (layout.total() != nvars())
    throw std::invalid_argument("with_layout: total width mismatch");
  Polynomial out(std::move(layout));
  out.terms_ = terms_;
  return out;
}

Polynomial Polynomial::pruned(double tol) const {
  Polynomial out(layout_);
  for (const auto& [alpha, c] : terms_)
    if (std::abs(c) > tol) out.terms_.emplace(alpha, c);
  return out;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(12);
  bool first = true;
  for (const auto& [alpha, c] : terms_) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    const double ac = std::abs(c);
    const bool unit = alpha.degree() > 0 && ac == 1.0;
    if (!unit) os << ac;
    bool need_star = !unit;
    for (int v = 0; v < alpha.nvars(); ++v) {
      if (alpha[v] == 0) continue;
      if (need_star) os << "*";
      os << "x" << (v + 1);
      if (alpha[v] > 1) os << "^" << alpha[v];
      need_star = true;
    }
  }
  return os.str();
}

Tms::Tms(int nvars_, int order_)
    : order(order_),
      nvars(nvars_),
      values(Eigen::VectorXd::Zero(basis_size(nvars_, order_))) {}

Tms::Tms(int nvars_, int order_, Eigen::VectorXd values_)
    : order(order_), nvars(nvars_), values(std::move(values_)) {
  if (values.size() != basis_size(nvars, order))
    throw std::invalid_argument("Tms length does not match C(n+2k, 2k)");
}

double Tms::operator[](const MultiIndex& alpha) const {
  if (alpha.degree() > order)
    throw std::domain_error("moment index exceeds tms order");
  return values[basis_position(alpha)];
}

double& Tms::operator[](const MultiIndex& alpha) {
  if (alpha.degree() > order)
    throw std::domain_error("moment index exceeds tms order");
  return values[basis_position(alpha)];
}

double evaluate(const Polynomial& p, std::span<const double> point) {
  if (static_cast<int>(point.size()) != p.nvars())
    throw std::invalid_argument("evaluate: point dimension mismatch");
  double sum = 0.0;
  for (const auto& [alpha, c] : p.terms()) {
    double m = c;
    for (int v = 0; v < alpha.nvars(); ++v)
      for (int e = 0; e < alpha[v]; ++e) m *= point[static_cast<std::size_t>(v)];
    sum += m;
  }
  return sum;
}

double evaluate(const Polynomial& p, const Eigen::VectorXd& point) {
  return evaluate(p, std::span<const double>(point.data(),
                                             static_cast<std::size_t>(point.size())));
}

std::vector<Polynomial> block_gradient(const Polynomial& p, int block) {
  const int off = p.layout().offset(block);
  const int w = p.layout().width(block);
  std::vector<Polynomial> g;
  g.reserve(static_cast<std::size_t>(w));
  for (int j = 0; j < w; ++j) g.push_back(p.derivative(off + j));
  return g;
}

double pair(const Polynomial& f, const Tms& y) {
  if (f.nvars() != y.nvars)
    throw std::invalid_argument("pair: nvars mismatch");
  if (f.degree() > y.order)
    throw std::domain_error("pair: polynomial degree exceeds tms order");
  double s = 0.0;
  for (const auto& [alpha, c] : f.terms()) s += c * y.values[basis_position(alpha)];
  return s;
}

Tms lift(const Eigen::VectorXd& u, int order) {
  if (order < 0) throw std::invalid_argument("lift: negative order");
  const int n = static_cast<int>(u.size());
  Tms y(n, order);
  const auto basis = monomial_basis(n, order);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    double m = 1.0;
    for (int v = 0; v < n; ++v) m *= std::pow(u[v], basis[k][v]);
    y.values[static_cast<Eigen::Index>(k)] = m;
  }
  return y;
}

Polynomial restrict_rivals(const Polynomial& p, int block,
                           std::span<const double> rivals) {
  const BlockLayout& L = p.layout();
  const int off = L.offset(block);
  const int w = L.width(block);
  if (static_cast<int>(rivals.size()) != L.total() - w)
    throw std::invalid_argument("restrict_rivals: rival vector length mismatch");
  std::vector<std::pair<double, MultiIndex>> terms;
  terms.reserve(p.terms().size());
  for (const auto& [alpha, c] : p.terms()) {
    double coef = c;
    std::size_t r = 0;
    for (int v = 0; v < L.total(); ++v) {
      if (v >= off && v < off + w) continue;
      for (int e = 0; e < alpha[v]; ++e) coef *= rivals[r];
      ++r;
    }
    std::vector<int> own(alpha.exponents().begin() + off,
                         alpha.exponents().begin() + off + w);
    terms.emplace_back(coef, MultiIndex(std::move(own)));
  }
  return Polynomial(BlockLayout::single(w), terms);
}

Polynomial restrict_rivals(const Polynomial& p, int block,
                           const Eigen::VectorXd& rivals) {
  return restrict_rivals(
      p, block,
      std::span<const double>(rivals.data(), static_cast<std::size_t>(rivals.size())));
}

Eigen::VectorXd rival_part(const BlockLayout& layout, int block,
                           const Eigen::VectorXd& x) {
  const int off = layout.offset(block);
  const int w = layout.width(block);
  Eigen::VectorXd r(layout.total() - w);
  r << x.head(off), x.tail(layout.total() - off - w);
  return r;
}

Eigen::VectorXd block_part(const BlockLayout& layout, int block,
                           const Eigen::VectorXd& x) {
  return x.segment(layout.offset(block), layout.width(block));
}

Eigen::VectorXd replace_block(const BlockLayout& layout, int block,
                              const Eigen::VectorXd& x,
                              const Eigen::VectorXd& own) {
  Eigen::VectorXd out = x;
  out.segment(layout.offset(block), layout.width(block)) = own;
  return out;
}

Polynomial embed_block(const Polynomial& p, const BlockLayout& layout,
                       int block) {
  const int off = layout.offset(block);
  if (p.nvars() != layout.width(block))
    throw std::invalid_argument("embed_block: width mismatch");
  std::vector<std::pair<double, MultiIndex>> terms;
  for (const auto& [alpha, c] : p.terms()) {
    std::vector<int> e(static_cast<std::size_t>(layout.total()), 0);
    for (int v = 0; v < alpha.nvars(); ++v)
      e[static_cast<std::size_t>(off + v)] = alpha[v];
    terms.emplace_back(c, MultiIndex(std::move(e)));
  }
  return Polynomial(layout, terms);
}

}  // namespace nashpoly
