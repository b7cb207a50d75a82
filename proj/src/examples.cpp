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


#include "nashpoly/examples.hpp"

#include <map>
#include <stdexcept>

namespace nashpoly {

namespace {

// Polynomial builder over a fixed layout with 1-based (player, coord) access.
struct Vars {
  BlockLayout L;
  Polynomial operator()(int i, int j) const {
    return Polynomial::variable(L, L.offset(i - 1) + j - 1);
  }
  Polynomial c(double v) const { return Polynomial::constant(L, v); }
};

struct Term2 {
  double coef;
  int e1;
  int e2;
};

// Polynomial in two own variables from (coef, exp1, exp2) records.
Polynomial own2(std::initializer_list<Term2> terms) {
  const BlockLayout own = BlockLayout::single(2);
  std::vector<std::pair<double, MultiIndex>> t;
  for (const Term2& r : terms) t.emplace_back(r.coef, MultiIndex({r.e1, r.e2}));
  return Polynomial(own, t);
}

Constraint ineq(Polynomial g) { return {ConstraintKind::Inequality, std::move(g)}; }
Constraint eq(Polynomial g) { return {ConstraintKind::Equality, std::move(g)}; }

NepProblem two_ball_game() {
  const Vars x{BlockLayout({2, 2})};
  const Polynomial f1 = x(1, 1) * (x(1, 1) + x(2, 1) + 4.0 * x(2, 2)) + 2.0 * x(1, 2) * x(1, 2);
  const Polynomial f2 = x(2, 1) * (x(1, 1) + 2.0 * x(1, 2) + x(2, 1)) +
                        x(2, 2) * (2.0 * x(1, 1) + x(1, 2) + x(2, 2));
  return NepProblem({PlayerProblem::ball(x.L, 0, f1), PlayerProblem::ball(x.L, 1, f2)});
}

NepProblem ball_simplex_game() {
  const Vars x{BlockLayout({2, 2})};
  const Polynomial f1 = x(1, 1) * (x(1, 1) + x(2, 1) + 4.0 * x(2, 2)) + 4.0 * x(1, 2) * x(1, 2);
  const Polynomial f2 = 2.0 * x(2, 1) * x(2, 1) + 2.0 * x(2, 2) * x(2, 2) +
                        (x(1, 1) - 2.0 * x(1, 2)) * x(2, 1) +
                        (4.0 * x(1, 1) + x(1, 2)) * x(2, 2);
  return NepProblem({PlayerProblem::ball(x.L, 0, f1), PlayerProblem::simplex(x.L, 1, f2)});
}

// Nonconvex 3+3 game; the first player has an unbounded feasible set.
NepProblem cubic_sphere_game(bool negated) {
  const Vars x{BlockLayout({3, 3})};
  Polynomial f1 = x.c(0.0);
  for (int j = 1; j <= 3; ++j) f1 = f1 + x(1, j) * (x(1, j) - static_cast<double>(j) * x(2, j));
  const Polynomial prod = x(2, 1) * x(2, 2) * x(2, 3);
  Polynomial s11 = x.c(0.0);  // sum_{i<j, k} x1i x1j x2k
  for (int i = 1; i <= 3; ++i)
    for (int j = i + 1; j <= 3; ++j)
      for (int k = 1; k <= 3; ++k) s11 = s11 + x(1, i) * x(1, j) * x(2, k);
  Polynomial s22 = x.c(0.0);  // sum_{i, j<k} x1i x2j x2k
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      for (int k = j + 1; k <= 3; ++k) s22 = s22 + x(1, i) * x(2, j) * x(2, k);
  const Polynomial f2 = negated ? -prod + s22 - s11 : prod + s11 + s22;

  const BlockLayout own = BlockLayout::single(3);
  auto z = [&](int j) { return Polynomial::variable(own, j - 1); };
  auto k = [&](double v) { return Polynomial::constant(own, v); };
  const Polynomial zero = k(0.0);
  const PolyMatrix H = {
      {zero, -z(2), z(3), k(1.0), zero, zero},
      {zero, zero, -z(3), zero, k(1.0), zero},
      {k(1.0), -1.0 * z(2) * z(2), z(2) * z(3), z(2), zero, zero},
  };
  std::vector<Constraint> g1 = {ineq(x.c(1.0) - x(1, 1) * x(1, 2)),
                                ineq(x.c(1.0) - x(1, 2) * x(1, 3)), ineq(x(1, 1))};
  return NepProblem({PlayerProblem::custom(x.L, 0, f1, g1, {}, H),
                     PlayerProblem::sphere(x.L, 1, f2)});
}

NepProblem three_player_game(bool zero_sum) {
  const Vars x{BlockLayout({2, 2, 2})};
  const Polynomial f1 = (2.0 * x(1, 1) - x(1, 2) + x.c(3.0)) * x(1, 1) * x(2, 1) +
                        (2.0 * x(1, 2) * x(1, 2) + x(3, 2) * x(3, 2)) * x(1, 2);
  const Polynomial f2 = (x(2, 1) * x(2, 1) - x(1, 2)) * x(2, 1) +
                        (x(2, 2) * x(2, 2) + 2.0 * x(3, 2) + x(1, 2) * x(3, 1)) * x(2, 2);
  const Polynomial f3 =
      zero_sum ? -f1 - f2
               : (x(1, 1) * x(1, 2) - x.c(1.0)) * x(3, 1) -
                     (3.0 * x(3, 2) * x(3, 2) + x.c(1.0)) * x(3, 2) +
                     2.0 * (x(3, 1) + x(3, 2)) * x(3, 1) * x(3, 2);

  // Player 2: x^T x - 1 = 0, x21 >= 0, x22 >= 0.
  const PolyMatrix H2 = {
      {own2({{0.5, 1, 0}}), own2({{0.5, 0, 1}}), own2({{-1, 0, 0}}), own2({{-0.5, 0, 0}}),
       own2({{-0.5, 0, 0}})},
      {own2({{1, 0, 0}, {-1, 2, 0}}), own2({{-1, 1, 1}}), own2({{2, 1, 0}}), own2({{1, 1, 0}}),
       own2({{1, 1, 0}})},
      {own2({{-1, 1, 1}}), own2({{1, 0, 0}, {-1, 0, 2}}), own2({{2, 0, 1}}), own2({{1, 0, 1}}),
       own2({{1, 0, 1}})},
  };
  const std::vector<Constraint> g2 = {
      eq(x(2, 1) * x(2, 1) + x(2, 2) * x(2, 2) - x.c(1.0)), ineq(x(2, 1)), ineq(x(2, 2))};
  // Player 3: 1 - x31^2 >= 0, 1 - x32^2 >= 0.
  const PolyMatrix H3 = {
      {own2({{-0.5, 1, 0}}), own2({}), own2({{1, 0, 0}}), own2({})},
      {own2({}), own2({{-0.5, 0, 1}}), own2({}), own2({{1, 0, 0}})},
  };
  const std::vector<Constraint> g3 = {ineq(x.c(1.0) - x(3, 1) * x(3, 1)),
                                      ineq(x.c(1.0) - x(3, 2) * x(3, 2))};
  return NepProblem({PlayerProblem::ball(x.L, 0, f1),
                     PlayerProblem::custom(x.L, 1, f2, g2, {}, H2),
                     PlayerProblem::custom(x.L, 2, f3, g3, {}, H3)});
}

// Both players live on the ring 1 <= |x_i|^2 <= 2.
NepProblem ring_game() {
  const Vars x{BlockLayout({2, 2})};
  const Polynomial f1 = 2.0 * x(1, 1) * x(1, 2) + 3.0 * x(1, 1) * x(2, 1) * x(2, 1) +
                        3.0 * x(1, 2) * x(1, 2) * x(2, 2);
  const Polynomial f2 = x(2, 1) * x(2, 1) * x(2, 1) + x(2, 2) * x(2, 2) * x(2, 2) +
                        x(1, 1) * x(2, 1) * x(2, 1) + x(1, 2) * x(2, 2) * x(2, 2) +
                        x(1, 1) * x(1, 2) * (x(2, 1) + x(2, 2));
  // s = x^T x; rows ((2-s)/2 x^T, s-1, s) and ((1-s)/4 x^T, s/2, (1+s)/2).
  const PolyMatrix H = {
      {own2({{1, 1, 0}, {-0.5, 3, 0}, {-0.5, 1, 2}}), own2({{1, 0, 1}, {-0.5, 2, 1}, {-0.5, 0, 3}}),
       own2({{-1, 0, 0}, {1, 2, 0}, {1, 0, 2}}), own2({{1, 2, 0}, {1, 0, 2}})},
      {own2({{0.25, 1, 0}, {-0.25, 3, 0}, {-0.25, 1, 2}}),
       own2({{0.25, 0, 1}, {-0.25, 2, 1}, {-0.25, 0, 3}}), own2({{0.5, 2, 0}, {0.5, 0, 2}}),
       own2({{0.5, 0, 0}, {0.5, 2, 0}, {0.5, 0, 2}})},
  };
  std::vector<PlayerProblem> players;
  for (int i = 1; i <= 2; ++i) {
    const Polynomial s = x(i, 1) * x(i, 1) + x(i, 2) * x(i, 2);
    const std::vector<Constraint> g = {ineq(s - x.c(1.0)), ineq(x.c(2.0) - s)};
    players.push_back(PlayerProblem::custom(x.L, i - 1, i == 1 ? f1 : f2, g, {}, H));
  }
  return NepProblem(std::move(players));
}

NepProblem sphere_game(int n) {
  if (n < 1) throw std::invalid_argument("sphere game needs n >= 1");
  const Vars x{BlockLayout({n, n})};
  std::vector<PlayerProblem> players;
  for (int p = 1; p <= 2; ++p) {
    const int q = 3 - p;
    Polynomial f = x.c(0.0);
    for (int i = 1; i <= n; ++i)
      for (int j = i; j <= n; ++j) f = f + x(p, i) * x(p, j) * (x(q, i) + x(q, j));
    players.push_back(PlayerProblem::sphere(x.L, p - 1, f));
  }
  return NepProblem(std::move(players));
}

NepProblem quartic_unconstrained_game(int n) {
  if (n < 1) throw std::invalid_argument("unconstrained game needs n >= 1");
  const Vars x{BlockLayout({n, n, n})};
  // Coordinate 0 of every block is the constant 1.
  auto v = [&](int p, int j) { return j == 0 ? x.c(1.0) : x(p, j); };
  const int rot[3][2] = {{2, 3}, {3, 1}, {1, 2}};
  std::vector<PlayerProblem> players;
  for (int p = 1; p <= 3; ++p) {
    const int a = rot[p - 1][0], b = rot[p - 1][1];
    Polynomial f = x.c(0.0);
    for (int i = 1; i <= n; ++i) {
      const Polynomial s = x(p, i) * x(p, i);
      f = f + s * s;
    }
    Polynomial cross = x.c(0.0);
    for (int i = 0; i <= n; ++i)
      for (int j = i; j <= n; ++j)
        for (int k = j; k <= n; ++k)
          cross = cross + v(p, i) * v(p, j) * (v(p, k) + v(a, i) + v(b, j));
    f = f + (1.0 / (n * n)) * cross;
    players.push_back(PlayerProblem::unconstrained(x.L, p - 1, f));
  }
  return NepProblem(std::move(players));
}

// Three countries choosing emissions x_{i,1} and abatement investment x_{i,2}.
NepProblem pollution_game() {
  const Vars x{BlockLayout({2, 2, 2})};
  const double bs[3] = {1.5, 2.0, 1.8};
  const double ds[3] = {0.8, 1.2, 1.0};
  const double Es[3] = {3.0, 4.0, 2.0};
  const double gs[3] = {0.7, 0.5, 0.9};
  const double cs[3][3] = {{0, 0.2, 0.3}, {0.4, 0, 0.2}, {0.5, 0.1, 0}};
  std::vector<PlayerProblem> players;
  for (int i = 1; i <= 3; ++i) {
    const double b = bs[i - 1], d = ds[i - 1], E = Es[i - 1], g = gs[i - 1];
    Polynomial f = -1.0 * x(i, 1) * (x.c(b) - 0.5 * x(i, 1)) + 0.5 * x(i, 2) * x(i, 2) +
                   d * (x(i, 1) - g * x(i, 2));
    for (int j = 1; j <= 3; ++j)
      if (j != i) f = f + cs[i - 1][j - 1] * x(i, 2) * x(j, 1);
    const std::vector<Constraint> cons = {ineq(x(i, 2)), ineq(x.c(b) - x(i, 1)),
                                          ineq(x(i, 1) - g * x(i, 2)),
                                          ineq(x.c(E) - x(i, 1) + g * x(i, 2))};
    const double D1 = b * (E - b), D2 = E * b, D3 = E * (E - b);
    const PolyMatrix H = {
        {own2({{g / D1, 2, 0}, {-E * g / D1, 1, 0}, {g, 0, 0}}),
         own2({{2 * g / D1, 1, 1}, {-g * g / D1, 0, 2}, {-E * g / D1, 0, 1}, {1, 0, 0}}),
         own2({{-2 * g / D1, 1, 0}, {g * g / D1, 0, 1}, {E * g / D1, 0, 0}}),
         own2({{-g / D1, 1, 0}, {g / b, 0, 0}}),
         own2({{-g / D1, 1, 0}, {g * g / D1, 0, 1}, {E * g / D1, 0, 0}}),
         own2({{-g / D1, 1, 0}, {g * g / D1, 0, 1}})},
        {own2({{1 / D1, 2, 0}, {-E / D1, 1, 0}}),
         own2({{2 / D1, 1, 1}, {-g / D1, 0, 2}, {-E / D1, 0, 1}}),
         own2({{-2 / D1, 1, 0}, {g / D1, 0, 1}, {E / D1, 0, 0}}),
         own2({{-1 / D1, 1, 0}, {1 / b, 0, 0}}),
         own2({{-1 / D1, 1, 0}, {g / D1, 0, 1}, {E / D1, 0, 0}}),
         own2({{-1 / D1, 1, 0}, {g / D1, 0, 1}})},
        {own2({{1 / D2, 2, 0}, {-(E + b) / D2, 1, 0}, {1, 0, 0}}),
         own2({{2 / D2, 1, 1}, {-g / D2, 0, 2}, {-(E + b) / D2, 0, 1}}),
         own2({{-2 / D2, 1, 0}, {g / D2, 0, 1}, {(E + b) / D2, 0, 0}}),
         own2({{-1 / D2, 1, 0}, {1 / b, 0, 0}}),
         own2({{-1 / D2, 1, 0}, {g / D2, 0, 1}, {(E + b) / D2, 0, 0}}),
         own2({{-1 / D2, 1, 0}, {g / D2, 0, 1}, {1 / E, 0, 0}})},
        {own2({{-1 / D3, 2, 0}, {b / D3, 1, 0}}),
         own2({{-2 / D3, 1, 1}, {g / D3, 0, 2}, {b / D3, 0, 1}}),
         own2({{2 / D3, 1, 0}, {-g / D3, 0, 1}, {-b / D3, 0, 0}}),
         own2({{1 / D3, 1, 0}}),
         own2({{1 / D3, 1, 0}, {-g / D3, 0, 1}, {-b / D3, 0, 0}}),
         own2({{1 / D3, 1, 0}, {-g / D3, 0, 1}, {1 / E, 0, 0}})},
    };
    players.push_back(PlayerProblem::custom(x.L, i - 1, f, cons, {}, H));
  }
  return NepProblem(std::move(players));
}

// Three generating companies with 1, 2 and 3 units; price 10 - total output.
NepProblem electricity_game() {
  const Vars x{BlockLayout({1, 2, 3})};
  const std::vector<std::vector<double>> c = {{0.4}, {0.35, 0.35}, {0.46, 0.5, 0.5}};
  const std::vector<std::vector<double>> d = {{2}, {1.25, 1}, {2.25, 3, 3}};
  const std::vector<std::vector<double>> E = {{2}, {2.5, 0.67}, {1.2, 1.8, 1.6}};
  Polynomial total = x.c(0.0);
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= i; ++j) total = total + x(i, j);
  const Polynomial price = x.c(10.0) - total;
  std::vector<PlayerProblem> players;
  for (int i = 1; i <= 3; ++i) {
    Polynomial own = x.c(0.0), cost = x.c(0.0);
    std::vector<BoxBound> bounds;
    for (int j = 1; j <= i; ++j) {
      const double cij = c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
      const double dij = d[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
      own = own + x(i, j);
      cost = cost + 0.5 * cij * x(i, j) * x(i, j) + dij * x(i, j);
      bounds.push_back({0.0, E[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]});
    }
    players.push_back(PlayerProblem::box(x.L, i - 1, cost - price * own, bounds));
  }
  return NepProblem(std::move(players));
}

struct Entry {
  std::string description;
  NepProblem (*build)(int);
};

const std::vector<std::pair<std::string, Entry>>& registry() {
  static const std::vector<std::pair<std::string, Entry>> table = {
      {"example_1_1", {"two players on unit balls, three equilibria",
                       [](int) { return two_ball_game(); }}},
      {"example_5_1", {"convex game, ball and simplex players",
                       [](int) { return ball_simplex_game(); }}},
      {"example_5_2", {"nonconvex 3+3 game with a sphere player, four equilibria",
                       [](int) { return cubic_sphere_game(false); }}},
      {"example_5_2_negated", {"variant of example_5_2 without equilibria",
                               [](int) { return cubic_sphere_game(true); }}},
      {"example_5_3", {"three players: ball, sphere arc, box",
                       [](int) { return three_player_game(false); }}},
      {"example_5_3_zero_sum", {"zero-sum variant of example_5_3 without equilibria",
                                [](int) { return three_player_game(true); }}},
      {"example_5_4", {"two players on rings 1 <= |x|^2 <= 2",
                       [](int) { return ring_game(); }}},
      {"example_5_5", {"two sphere players, size n (default 3)",
                       [](int n) { return sphere_game(n > 0 ? n : 3); }}},
      {"example_5_6", {"three unconstrained quartic players, size n (default 2)",
                       [](int n) { return quartic_unconstrained_game(n > 0 ? n : 2); }}},
      {"pollution_control", {"three-country emission and abatement game",
                             [](int) { return pollution_game(); }}},
      {"electricity_market", {"three generating companies with capacity bounds",
                              [](int) { return electricity_game(); }}},
  };
  return table;
}

const Entry& lookup(const std::string& name) {
  for (const auto& [key, entry] : registry())
    if (key == name) return entry;
  throw std::invalid_argument("unknown example '" + name + "'");
}

}  // namespace

std::vector<std::string> example_names() {
  std::vector<std::string> out;
  for (const auto& kv : registry()) out.push_back(kv.first);
  return out;
}

std::string example_description(const std::string& name) {
  return lookup(name).description;
}

NepProblem example_problem(const std::string& name, int size) {
  return lookup(name).build(size);
}

}  // namespace nashpoly
