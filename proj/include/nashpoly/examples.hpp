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


#ifndef NASHPOLY_EXAMPLES_HPP
#define NASHPOLY_EXAMPLES_HPP

#include <string>
#include <vector>

#include "nashpoly/nep_model.hpp"

namespace nashpoly {

/// Names of the bundled games, in a stable order.
std::vector<std::string> example_names();

/// One-line description of a bundled game.
std::string example_description(const std::string& name);

/// Builds a bundled game. `size` sets the per-player width of the scalable
/// games (example_5_5, example_5_6); 0 selects the smallest size.
/// Throws std::invalid_argument for an unknown name.
NepProblem example_problem(const std::string& name, int size = 0);

}  // namespace nashpoly

#endif  // NASHPOLY_EXAMPLES_HPP
