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


#ifndef NASHPOLY_PROBLEM_IO_HPP
#define NASHPOLY_PROBLEM_IO_HPP

#include <optional>
#include <stdexcept>
#include <string>

#include "nashpoly/ne_solver.hpp"
#include "nashpoly/nep_model.hpp"

namespace nashpoly {

/// Solver settings stored in a problem file; unset fields keep the defaults.
struct OptionOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> k_max;
  std::optional<double> delta_init;
  std::optional<double> delta_shrink;
  std::optional<double> omega_tol;
  std::optional<double> feas_check_tol;
  std::optional<double> rank_tol;
  std::optional<int> max_outer_loops;
  std::optional<bool> convex;

  void apply(SolverOptions& opts) const;
  friend bool operator==(const OptionOverrides&, const OptionOverrides&) = default;
};

struct ProblemFile {
  std::string name;
  std::string description;
  NepProblem problem;
  OptionOverrides options;
};

/// Syntax errors carry a 1-based line and column; semantic errors carry
/// line 0 and name the offending field in the message.
class ProblemError : public std::runtime_error {
 public:
  ProblemError(const std::string& what, int line = 0, int column = 0)
      : std::runtime_error(what), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses and validates a JSON problem file (format "nashpoly-nep",
/// version 1). Throws ProblemError.
ProblemFile parse_problem(const std::string& text);

/// Canonical JSON form; parse_problem(serialize_problem(p)) reproduces p.
std::string serialize_problem(const ProblemFile& file);

/// Loads a bundled game by name, or else reads the file at `path_or_name`.
ProblemFile load_problem(const std::string& path_or_name);

/// Problem file for a bundled game.
ProblemFile bundled_problem_file(const std::string& name, int size = 0);

}  // namespace nashpoly

#endif  // NASHPOLY_PROBLEM_IO_HPP
