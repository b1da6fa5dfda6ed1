// Copyright 2026 The mdlsynth Authors
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
#pragma once

#include <string>
#include <vector>

#include "mdlsynth/core.hpp"

namespace mdlsynth {

/// A local rewrite over a shared qubit support. The pattern gates need only
/// be adjacent after commuting through gates that commute with them.
struct RewriteRule {
  std::string name;
  Circuit pattern;
  Circuit replacement;
};

/// Throws kInvalidArgument unless U(pattern) equals U(replacement) up to a
/// global phase (elementwise to 1e-10) and the replacement is not longer.
void verify_rule(const RewriteRule& rule);

/// The fixed rule inventory, verified on first access:
///   H H -> (), CX CX -> () for identical control/target,
///   T^e -> canonical phase run for e = 1..8 (T T -> S, T^8 -> (), ...),
///   S S S S -> ().
const std::vector<RewriteRule>& rewrite_rules();

/// Shortest gate sequence for a diagonal run with total phase exponent e
/// (units of pi/4, S = 2, T = 1): (), T, S, S T, S S, S S T, S S S, S S S T.
std::vector<Gate> phase_run_gates(int exponent, int qubit);

/// Syntactic commutation used by the optimizer: disjoint supports; two
/// diagonal gates; a diagonal gate on the control of a CX.
bool gates_commute(Gate a, Gate b);

/// Greedy fixed-point application of the rule inventory, left to right,
/// first match. The result implements the same unitary (phase-exact for
/// this inventory), is never longer, and is a fixed point:
/// optimize(optimize(c)) == optimize(c).
Circuit optimize(const Circuit& c);

std::size_t t_count(const Circuit& c);

}  // namespace mdlsynth
