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


#include "nashpoly/problem_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nashpoly/examples.hpp"

namespace nashpoly {

using json = nlohmann::ordered_json;

void OptionOverrides::apply(SolverOptions& o) const {
  if (seed) o.seed = *seed;
  if (k_max) o.k_max = *k_max;
  if (delta_init) o.delta_init = *delta_init;
  if (delta_shrink) o.delta_shrink = *delta_shrink;
  if (omega_tol) o.omega_tol = *omega_tol;
  if (feas_check_tol) o.feas_check_tol = *feas_check_tol;
  if (rank_tol) o.rank_tol = *rank_tol;
  if (max_outer_loops) o.max_outer_loops = *max_outer_loops;
  if (convex) o.convex = *convex;
}

namespace {

constexpr const char* kFormat = "nashpoly-nep";
constexpr int kVersion = 1;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ProblemError(path + ": " + what);
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path, "missing field '" + key + "'");
  return *it;
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

double as_double(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

const json& as_array(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array");
  return v;
}

Polynomial read_poly(const json& v, const BlockLayout& layout, const std::string& path) {
  std::vector<std::pair<double, MultiIndex>> terms;
  const int n = layout.total();
  std::size_t t = 0;
  for (const json& term : as_array(v, path)) {
    const std::string tp = path + "[" + std::to_string(t++) + "]";
    if (!term.is_array() || term.size() != 2) fail(tp, "a term is [coefficient, [exponents]]");
    const double c = as_double(term[0], tp + "[0]");
    const json& e = as_array(term[1], tp + "[1]");
    if (static_cast<int>(e.size()) != n)
      fail(tp, "exponent vector has length " + std::to_string(e.size()) + ", expected " + std::to_string(n));
    std::vector<int> exps;
    for (std::size_t j = 0; j < e.size(); ++j) {
      const int x = as_int(e[j], tp + "[1][" + std::to_string(j) + "]");
      if (x < 0) fail(tp, "negative exponent");
      exps.push_back(x);
    }
    terms.emplace_back(c, MultiIndex(std::move(exps)));
  }
  return Polynomial(layout, terms);
}

json write_poly(const Polynomial& p) {
  json out = json::array();
  for (const auto& [a, c] : p.terms()) out.push_back(json::array({c, a.exponents()}));
  return out;
}

OptionOverrides read_options(const json& v) {
  if (!v.is_object()) fail("options", "expected an object");
  OptionOverrides o;
  for (auto it = v.begin(); it != v.end(); ++it) {
    const std::string& k = it.key();
    const std::string p = "options." + k;
    if (k == "seed") {
      if (!it->is_number_unsigned()) fail(p, "expected a non-negative integer");
      o.seed = it->get<std::uint64_t>();
    } else if (k == "k_max") o.k_max = as_int(*it, p);
    else if (k == "delta_init") o.delta_init = as_double(*it, p);
    else if (k == "delta_shrink") o.delta_shrink = as_double(*it, p);
    else if (k == "omega_tol") o.omega_tol = as_double(*it, p);
    else if (k == "feas_check_tol") o.feas_check_tol = as_double(*it, p);
    else if (k == "rank_tol") o.rank_tol = as_double(*it, p);
    else if (k == "max_outer_loops") o.max_outer_loops = as_int(*it, p);
    else if (k == "convex") {
      if (!it->is_boolean()) fail(p, "expected true or false");
      o.convex = it->get<bool>();
    } else fail(p, "unknown option");
  }
  SolverOptions probe;
  o.apply(probe);
  try {
    probe.validate();
  } catch (const std::invalid_argument& e) {
    fail("options", e.what());
  }
  return o;
}

json write_options(const OptionOverrides& o) {
  json out = json::object();
  if (o.seed) out["seed"] = *o.seed;
  if (o.k_max) out["k_max"] = *o.k_max;
  if (o.delta_init) out["delta_init"] = *o.delta_init;
  if (o.delta_shrink) out["delta_shrink"] = *o.delta_shrink;
  if (o.omega_tol) out["omega_tol"] = *o.omega_tol;
  if (o.feas_check_tol) out["feas_check_tol"] = *o.feas_check_tol;
  if (o.rank_tol) out["rank_tol"] = *o.rank_tol;
  if (o.max_outer_loops) out["max_outer_loops"] = *o.max_outer_loops;
  if (o.convex) out["convex"] = *o.convex;
  return out;
}

PlayerProblem read_player(const json& pj, const BlockLayout& layout, int i) {
  const std::string path = "players[" + std::to_string(i) + "]";
  const Polynomial objective = read_poly(field(pj, "objective", path), layout, path + ".objective");
  FamilyKind kind;
  try {
    kind = family_from_name(as_string(field(pj, "family", path), path + ".family"));
  } catch (const std::invalid_argument& e) {
    fail(path + ".family", e.what());
  }

  std::vector<Constraint> cons;
  const bool has_cons = pj.contains("constraints");
  if (has_cons) {
    const json& cj = as_array(pj["constraints"], path + ".constraints");
    for (std::size_t j = 0; j < cj.size(); ++j) {
      const std::string cp = path + ".constraints[" + std::to_string(j) + "]";
      const std::string k = as_string(field(cj[j], "kind", cp), cp + ".kind");
      Constraint c;
      if (k == "equality") c.kind = ConstraintKind::Equality;
      else if (k == "inequality") c.kind = ConstraintKind::Inequality;
      else fail(cp + ".kind", "expected 'equality' or 'inequality'");
      c.g = read_poly(field(cj[j], "terms", cp), layout, cp + ".terms");
      cons.push_back(std::move(c));
    }
    for (std::size_t a = 0; a < cons.size(); ++a)
      for (std::size_t b = 0; b < cons.size(); ++b)
        if (cons[a].kind == ConstraintKind::Equality && cons[b].kind == ConstraintKind::Inequality &&
            cons[a].g == cons[b].g)
          fail(path + ".constraints", "constraint " + std::to_string(a + 1) +
                                          " is listed both as an equality and as an inequality");
  }

  ConstraintFamily fam;
  fam.kind = kind;
  if (pj.contains("bounds")) {
    const json& bj = as_array(pj["bounds"], path + ".bounds");
    for (std::size_t j = 0; j < bj.size(); ++j) {
      const std::string bp = path + ".bounds[" + std::to_string(j) + "]";
      if (!bj[j].is_array() || bj[j].size() != 2) fail(bp, "a bound is [lower, upper] with null for a free side");
      BoxBound b;
      if (!bj[j][0].is_null()) b.lower = as_double(bj[j][0], bp + "[0]");
      if (!bj[j][1].is_null()) b.upper = as_double(bj[j][1], bp + "[1]");
      fam.bounds.push_back(b);
    }
  }
  if (pj.contains("multipliers")) {
    const json& mj = as_array(pj["multipliers"], path + ".multipliers");
    for (std::size_t j = 0; j < mj.size(); ++j)
      fam.custom_multipliers.push_back(read_poly(mj[j], layout, path + ".multipliers[" + std::to_string(j) + "]"));
  }
  if (pj.contains("left_inverse")) {
    const int w = layout.width(i);
    const BlockLayout own = BlockLayout::single(w);
    const json& hj = as_array(pj["left_inverse"], path + ".left_inverse");
    for (std::size_t r = 0; r < hj.size(); ++r) {
      const std::string rp = path + ".left_inverse[" + std::to_string(r) + "]";
      std::vector<Polynomial> row;
      const json& rj = as_array(hj[r], rp);
      for (std::size_t c = 0; c < rj.size(); ++c)
        row.push_back(read_poly(rj[c], own, rp + "[" + std::to_string(c) + "]"));
      fam.custom_left_inverse.push_back(std::move(row));
    }
  }
  if (kind != FamilyKind::Custom && (!fam.custom_multipliers.empty() || !fam.custom_left_inverse.empty()))
    fail(path, "multipliers and left_inverse are only allowed for the custom family");
  if (kind != FamilyKind::Box && !fam.bounds.empty()) fail(path + ".bounds", "bounds are only allowed for the box family");

  try {
    if (!has_cons) {
      switch (kind) {
        case FamilyKind::Ball: return PlayerProblem::ball(layout, i, objective);
        case FamilyKind::Sphere: return PlayerProblem::sphere(layout, i, objective);
        case FamilyKind::SimplexLike: return PlayerProblem::simplex(layout, i, objective);
        case FamilyKind::Box: return PlayerProblem::box(layout, i, objective, fam.bounds);
        case FamilyKind::Unconstrained: return PlayerProblem::unconstrained(layout, i, objective);
        case FamilyKind::Custom: break;
      }
    }
    return PlayerProblem(layout, i, objective, std::move(cons), std::move(fam));
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

json write_player(const PlayerProblem& p) {
  json out = json::object();
  out["n"] = p.width();
  out["family"] = family_name(p.family().kind);
  out["objective"] = write_poly(p.objective());
  json cons = json::array();
  for (const Constraint& c : p.constraints())
    cons.push_back(json{{"kind", c.kind == ConstraintKind::Equality ? "equality" : "inequality"},
                        {"terms", write_poly(c.g)}});
  out["constraints"] = std::move(cons);
  const ConstraintFamily& fam = p.family();
  if (!fam.bounds.empty()) {
    json b = json::array();
    for (const BoxBound& bb : fam.bounds)
      b.push_back(json::array({bb.lower ? json(*bb.lower) : json(nullptr), bb.upper ? json(*bb.upper) : json(nullptr)}));
    out["bounds"] = std::move(b);
  }
  if (!fam.custom_multipliers.empty()) {
    json m = json::array();
    for (const auto& q : fam.custom_multipliers) m.push_back(write_poly(q));
    out["multipliers"] = std::move(m);
  }
  if (!fam.custom_left_inverse.empty()) {
    json h = json::array();
    for (const auto& row : fam.custom_left_inverse) {
      json r = json::array();
      for (const auto& q : row) r.push_back(write_poly(q));
      h.push_back(std::move(r));
    }
    out["left_inverse"] = std::move(h);
  }
  return out;
}

}  // namespace

ProblemFile parse_problem(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is the 1-based offset of the offending character.
    const std::size_t upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    int line = 1, col = 1;
    for (std::size_t k = 0; k < upto; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    const auto cut = msg.find("syntax error");
    if (cut != std::string::npos) msg = msg.substr(cut);
    throw ProblemError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg, line, col);
  }
  if (!doc.is_object()) fail("document", "expected a JSON object");
  if (as_string(field(doc, "format", "document"), "format") != kFormat)
    fail("format", std::string("expected \"") + kFormat + "\"");
  const int version = as_int(field(doc, "version", "document"), "version");
  if (version != kVersion) fail("version", "unsupported version " + std::to_string(version));

  ProblemFile pf;
  if (doc.contains("name")) pf.name = as_string(doc["name"], "name");
  if (doc.contains("description")) pf.description = as_string(doc["description"], "description");
  const json& pl = as_array(field(doc, "players", "document"), "players");
  if (pl.empty()) fail("players", "a game needs at least one player");
  std::vector<int> widths;
  for (std::size_t i = 0; i < pl.size(); ++i) {
    const std::string p = "players[" + std::to_string(i) + "]";
    const int n = as_int(field(pl[i], "n", p), p + ".n");
    if (n < 1) fail(p + ".n", "block width must be positive");
    widths.push_back(n);
  }
  const BlockLayout layout(widths);
  std::vector<PlayerProblem> players;
  for (std::size_t i = 0; i < pl.size(); ++i) players.push_back(read_player(pl[i], layout, static_cast<int>(i)));
  try {
    pf.problem = NepProblem(std::move(players));
  } catch (const std::invalid_argument& e) {
    fail("players", e.what());
  }
  if (doc.contains("options")) pf.options = read_options(doc["options"]);
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    static const char* known[] = {"format", "version", "name", "description", "players", "options"};
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return it.key() == k; }) ==
        std::end(known))
      fail(it.key(), "unknown field");
  }
  return pf;
}

std::string serialize_problem(const ProblemFile& f) {
  json doc = json::object();
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  if (!f.name.empty()) doc["name"] = f.name;
  if (!f.description.empty()) doc["description"] = f.description;
  json players = json::array();
  for (const PlayerProblem& p : f.problem.players()) players.push_back(write_player(p));
  doc["players"] = std::move(players);
  const json opts = write_options(f.options);
  if (!opts.empty()) doc["options"] = opts;
  return doc.dump(1) + "\n";
}

ProblemFile bundled_problem_file(const std::string& name, int size) {
  ProblemFile pf;
  pf.name = name;
  pf.description = example_description(name);
  pf.problem = example_problem(name, size);
  return pf;
}

ProblemFile load_problem(const std::string& path_or_name) {
  const auto names = example_names();
  if (std::find(names.begin(), names.end(), path_or_name) != names.end())
    return bundled_problem_file(path_or_name);
  std::ifstream in(path_or_name, std::ios::binary);
  if (!in) throw ProblemError("cannot open '" + path_or_name + "' (not a file and not a bundled game)");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

}  // namespace nashpoly
