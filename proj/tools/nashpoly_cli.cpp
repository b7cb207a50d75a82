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


// Command-line front end: solve, enumerate, check, export-sdpa, repro.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nashpoly/conic_solver.hpp"
#include "nashpoly/examples.hpp"
#include "nashpoly/moment_sdp.hpp"
#include "nashpoly/ne_solver.hpp"
#include "nashpoly/problem_io.hpp"
#include "nashpoly/repro.hpp"

using namespace nashpoly;
using json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kInconclusive = 2;

struct Flags {
  std::uint64_t seed = 1;
  int k_max = 0;
  double delta_init = 0.1;
  double omega_tol = 1e-6;
  double rank_tol = 1e-6;
  int max_loops = 30;
  bool convex = false;
  bool as_json = false;
  int size = 0;
  std::string output;
};

// Coordinates print with 6 significant digits; tiny values print as 0 so
// that solver noise does not show up as -1.2e-12.
std::string coord(double v) {
  if (std::abs(v) < 5e-10) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4e", v);
  return buf;
}

std::string point_text(const Eigen::VectorXd& x, const BlockLayout& L) {
  std::string s = "(";
  for (int b = 0; b < L.num_blocks(); ++b) {
    if (b) s += " | ";
    for (int j = 0; j < L.width(b); ++j) s += (j ? ", " : "") + coord(x[L.offset(b) + j]);
  }
  return s + ")";
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

json trace_json(const std::vector<LoopRecord>& trace) {
  json t = json::array();
  for (const LoopRecord& r : trace) {
    json o{{"loop", r.loop}, {"phase", r.phase}, {"orders", r.orders}, {"sdp_statuses", r.sdp_statuses},
           {"cut_counts", r.cut_counts}};
    o["candidate"] = r.candidate ? json(to_std(*r.candidate)) : json(nullptr);
    o["omega"] = r.omega;
    o["note"] = r.note;
    t.push_back(std::move(o));
  }
  return t;
}

void print_trace(std::ostream& os, const std::vector<LoopRecord>& trace, const BlockLayout& L) {
  os << "trace:\n";
  for (const LoopRecord& r : trace) {
    os << "  loop " << r.loop << " " << r.phase << "  orders";
    for (std::size_t a = 0; a < r.orders.size(); ++a) os << " " << r.orders[a] << ":" << r.sdp_statuses[a];
    os << "  cuts [";
    for (std::size_t a = 0; a < r.cut_counts.size(); ++a) os << (a ? "," : "") << r.cut_counts[a];
    os << "]";
    if (r.candidate) os << "  u = " << point_text(*r.candidate, L);
    if (!r.omega.empty()) {
      os << "  omega";
      for (double w : r.omega) os << " " << sci(w);
    }
    os << "  " << r.note << "\n";
  }
}

SolverOptions options_from(const Flags& f, const ProblemFile& pf, const CLI::App& sub) {
  SolverOptions o;
  pf.options.apply(o);
  // Flags given on the command line override the file.
  if (sub.count("--seed")) o.seed = f.seed;
  if (sub.count("--k-max")) o.k_max = f.k_max;
  if (sub.count("--delta-init")) o.delta_init = f.delta_init;
  if (sub.count("--omega-tol")) o.omega_tol = f.omega_tol;
  if (sub.count("--rank-tol")) o.rank_tol = f.rank_tol;
  if (sub.count("--max-loops")) o.max_outer_loops = f.max_loops;
  if (sub.count("--convex")) o.convex = f.convex;
  o.validate();
  return o;
}

ProblemFile load(const std::string& what, int size) {
  const auto names = example_names();
  if (size > 0 && std::find(names.begin(), names.end(), what) != names.end())
    return bundled_problem_file(what, size);
  return load_problem(what);
}

void emit(const Flags& f, const std::string& text) {
  if (f.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(f.output, std::ios::binary);
  if (!out) throw ProblemError("cannot write '" + f.output + "'");
  out << text;
}

int report_run(const std::string& command, const ProblemFile& pf, const SolverOptions& o, const NeReport& r,
               const Flags& f) {
  const NepProblem& nep = pf.problem;
  const BlockLayout& L = nep.layout();
  std::ostringstream os;
  if (f.as_json) {
    json doc{{"command", command}, {"problem", pf.name}, {"players", nep.num_players()},
             {"dimension", nep.dimension()}, {"status", ne_status_name(r.status)}, {"message", r.message}};
    json eq = json::array();
    for (const Equilibrium& e : r.equilibria) {
      json m = json::array();
      for (const auto& l : e.multipliers) m.push_back(to_std(l));
      eq.push_back(json{{"x", to_std(e.x)}, {"omega_star", e.omega_star}, {"omega", e.omega},
                        {"multipliers", m}, {"theta", e.theta}, {"loop", e.loop}});
    }
    doc["equilibria"] = std::move(eq);
    doc["options"] = json{{"seed", o.seed}, {"k_max", o.k_max}, {"delta_init", o.delta_init},
                          {"omega_tol", o.omega_tol}, {"rank_tol", o.rank_tol},
                          {"max_outer_loops", o.max_outer_loops}, {"convex", o.convex}};
    doc["trace"] = trace_json(r.trace);
    os << doc.dump(2) << "\n";
  } else {
    os << "problem: " << (pf.name.empty() ? "(file)" : pf.name) << "  players " << nep.num_players()
       << "  variables " << nep.dimension() << "\n";
    os << "command: " << command << "  seed " << o.seed << "\n";
    os << "status: " << ne_status_name(r.status) << "\n";
    if (!r.message.empty()) os << "message: " << r.message << "\n";
    os << "equilibria: " << r.equilibria.size() << "\n";
    int idx = 0;
    for (const Equilibrium& e : r.equilibria) {
      os << "  [" << ++idx << "] x* = " << point_text(e.x, L) << "\n";
      os << "      omega* = " << sci(e.omega_star) << "  omega =";
      for (double w : e.omega) os << " " << sci(w);
      os << "  loop " << e.loop << "\n";
    }
    print_trace(os, r.trace, L);
  }
  emit(f, os.str());
  std::fprintf(stderr, "wall time: %.2f s\n", r.seconds);
  if (r.status == NeStatus::Inconclusive) return kInconclusive;
  return kOk;
}

int run_check(const ProblemFile& pf, const SolverOptions& o, const std::string& point, const Flags& f) {
  const NepProblem& nep = pf.problem;
  std::vector<double> vals;
  {
    std::string s = point;
    for (char& ch : s)
      if (ch == ',') ch = ' ';
    std::istringstream is(s);
    double v;
    while (is >> v) vals.push_back(v);
    if (!is.eof()) throw ProblemError("--point: cannot parse '" + point + "'");
  }
  if (static_cast<int>(vals.size()) != nep.dimension())
    throw ProblemError("--point has " + std::to_string(vals.size()) + " coordinates, the game has " +
                       std::to_string(nep.dimension()));
  const Eigen::VectorXd u = Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
  const KktViolation kv = kkt_violation(kkt_sets(nep), u);
  const CandidateCheck cc = check_candidate(nep, u, o);
  const bool ne = !cc.inconclusive && cc.omega_star >= -o.omega_tol;
  std::ostringstream os;
  if (f.as_json) {
    json players = json::array();
    for (const PlayerCheck& p : cc.players) {
      json resp = json::array();
      for (const auto& v : p.responses) resp.push_back(to_std(v));
      players.push_back(json{{"omega", std::isfinite(p.omega) ? json(p.omega) : json(nullptr)},
                             {"certified", p.certified}, {"unbounded", p.unbounded}, {"orders", p.orders},
                             {"sdp_statuses", p.sdp_statuses}, {"responses", resp}, {"note", p.note}});
    }
    json doc{{"command", "check"}, {"problem", pf.name}, {"point", vals},
             {"kkt_equality_violation", kv.equality}, {"kkt_inequality_violation", kv.inequality},
             {"players", players}, {"omega_star", cc.omega_star}, {"inconclusive", cc.inconclusive},
             {"is_equilibrium", ne}};
    os << doc.dump(2) << "\n";
  } else {
    os << "problem: " << (pf.name.empty() ? "(file)" : pf.name) << "\n";
    os << "point: " << point_text(u, nep.layout()) << "\n";
    os << "KKT violation: equalities " << sci(kv.equality) << "  inequalities " << sci(kv.inequality) << "\n";
    for (std::size_t i = 0; i < cc.players.size(); ++i) {
      const PlayerCheck& p = cc.players[i];
      os << "  player " << i + 1 << ": omega = " << sci(p.omega) << (p.certified ? "" : " (uncertified)");
      for (const auto& v : p.responses) os << "  better response " << point_text(v, BlockLayout::single(static_cast<int>(v.size())));
      if (!p.note.empty()) os << "  " << p.note;
      os << "\n";
    }
    os << "omega* = " << sci(cc.omega_star) << "\n";
    os << "verdict: " << (cc.inconclusive ? "inconclusive" : ne ? "equilibrium" : "not an equilibrium") << "\n";
  }
  emit(f, os.str());
  return cc.inconclusive ? kInconclusive : kOk;
}

int run_export(const ProblemFile& pf, const SolverOptions& o, int order, const Flags& f) {
  const NepProblem& nep = pf.problem;
  const KktSystem sys = kkt_sets(nep);
  RelaxationSpec spec{theta_polynomial(gen_theta(o.seed, nep.dimension()), nep.layout()), sys.phi, sys.psi, 0};
  spec.order = order > 0 ? order : minimum_order(spec);
  emit(f, export_sdpa(assemble_relaxation(spec)));
  return kOk;
}

int run_repro(const Flags& f, const std::string& only, const CLI::App& sub) {
  SolverOptions o;
  if (sub.count("--seed")) o.seed = f.seed;
  if (sub.count("--k-max")) o.k_max = f.k_max;
  int failures = 0, ran = 0;
  json results = json::array();
  std::ostringstream os;
  for (const ReproCase& c : repro_cases()) {
    if (!only.empty() && c.id != only) continue;
    ++ran;
    const ReproOutcome r = run_repro_case(c, o);
    failures += r.pass ? 0 : 1;
    if (f.as_json)
      results.push_back(json{{"id", c.id}, {"pass", r.pass}, {"detail", r.detail}});
    else
      os << (r.pass ? "PASS " : "FAIL ") << c.id << "  " << r.detail << "\n";
    std::fprintf(stderr, "%s: %.2f s\n", c.id.c_str(), r.report.seconds);
  }
  if (ran == 0) throw ProblemError("repro: no case named '" + only + "'");
  if (f.as_json) os << json{{"command", "repro"}, {"results", results}, {"failures", failures}}.dump(2) << "\n";
  else os << (failures ? "repro: " + std::to_string(failures) + " failed\n" : std::string("repro: all passed\n"));
  emit(f, os.str());
  return failures ? kInconclusive : kOk;
}

void add_solver_flags(CLI::App* s, Flags& f) {
  s->add_option("--seed", f.seed, "seed for the random objective Theta")->capture_default_str();
  s->add_option("--k-max", f.k_max, "relaxation order cap per subproblem (0: d0 + 2)")->capture_default_str();
  s->add_option("--delta-init", f.delta_init, "initial gap for the next-equilibrium search")->capture_default_str();
  s->add_option("--omega-tol", f.omega_tol, "accuracy threshold on omega*")->capture_default_str();
  s->add_option("--rank-tol", f.rank_tol, "relative rank tolerance for flat truncation")->capture_default_str();
  s->add_option("--max-loops", f.max_loops, "outer loop limit")->capture_default_str();
  s->add_flag("--convex", f.convex, "declare the game convex (skip the cut loop)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nashpoly: Nash equilibria of polynomial games via Moment-SOS relaxations"};
  app.require_subcommand(1);
  Flags f;
  std::string problem, point, only;
  int order = 0;

  auto common = [&](CLI::App* s, bool solver) {
    s->add_option("problem", problem, "bundled game name or problem file")->required();
    s->add_option("--size", f.size, "block width of the scalable games");
    if (solver) add_solver_flags(s, f);
    s->add_flag("--json", f.as_json, "machine-readable report with full precision");
    s->add_option("-o,--output", f.output, "write the report to a file");
  };
  CLI::App* solve = app.add_subcommand("solve", "find one equilibrium or certify that none exists");
  common(solve, true);
  CLI::App* enumerate = app.add_subcommand("enumerate", "find all equilibria");
  common(enumerate, true);
  CLI::App* check = app.add_subcommand("check", "evaluate omega_i at a given point");
  common(check, true);
  check->add_option("--point", point, "comma-separated coordinates")->required();
  CLI::App* exp = app.add_subcommand("export-sdpa", "write the master relaxation in SDPA sparse format");
  common(exp, false);
  exp->add_option("--seed", f.seed, "seed for the random objective Theta")->capture_default_str();
  exp->add_option("--order", order, "relaxation order (default: minimum order)");
  CLI::App* dump = app.add_subcommand("dump", "write the canonical problem file");
  common(dump, false);
  CLI::App* repro = app.add_subcommand("repro", "run the bundled golden checks");
  repro->add_option("--only", only, "run a single case");
  repro->add_option("--seed", f.seed, "seed for the random objective Theta");
  repro->add_option("--k-max", f.k_max, "relaxation order cap per subproblem");
  repro->add_flag("--json", f.as_json, "machine-readable results");
  repro->add_option("-o,--output", f.output, "write the results to a file");
  CLI::App* list = app.add_subcommand("list", "list the bundled games");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (list->parsed()) {
      for (const auto& n : example_names()) std::cout << n << "  " << example_description(n) << "\n";
      return kOk;
    }
    if (repro->parsed()) return run_repro(f, only, *repro);
    const ProblemFile pf = load(problem, f.size);
    if (dump->parsed()) {
      emit(f, serialize_problem(pf));
      return kOk;
    }
    if (exp->parsed()) {
      SolverOptions o;
      pf.options.apply(o);
      if (exp->count("--seed")) o.seed = f.seed;
      return run_export(pf, o, order, f);
    }
    CLI::App* sub = solve->parsed() ? solve : enumerate->parsed() ? enumerate : check;
    const SolverOptions o = options_from(f, pf, *sub);
    if (check->parsed()) return run_check(pf, o, point, f);
    if (solve->parsed()) return report_run("solve", pf, o, find_one_ne(pf.problem, o), f);
    return report_run("enumerate", pf, o, enumerate_nes(pf.problem, o), f);
  } catch (const ProblemError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}
