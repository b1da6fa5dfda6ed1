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
#include "mdlsynth/peephole.hpp"

#include <algorithm>
#include <cmath>

#include "mdlsynth/error.hpp"

namespace mdlsynth {

namespace {

int phase_exponent(Gate g) { return g.kind == GateKind::T ? 1 : 2; }

std::vector<RewriteRule> build_rules() {
  std::vector<RewriteRule> rules;
  rules.push_back({"h_h", Circuit(1, {Gate::h(0), Gate::h(0)}), Circuit(1)});
  rules.push_back({"cx_cx", Circuit(2, {Gate::cx(0, 1), Gate::cx(0, 1)}), Circuit(2)});
  rules.push_back({"s4", Circuit(1, std::vector<Gate>(4, Gate::s(0))), Circuit(1)});
  for (int e = 1; e <= 8; ++e) {
    rules.push_back({"t" + std::to_string(e),
                     Circuit(1, std::vector<Gate>(static_cast<std::size_t>(e), Gate::t(0))),
                     Circuit(1, phase_run_gates(e, 0))});
  }
  for (const auto& r : rules) verify_rule(r);
  return rules;
}

// Tries every rule whose first gate sits at index i. Returns true after a
// rewrite.
bool rewrite_at(std::vector<Gate>& gates, std::size_t i) {
  const Gate g = gates[i];
  if (!g.is_diagonal()) {
    // Involution cancellation: H H, CX CX.
    for (std::size_t k = i + 1; k < gates.size(); ++k) {
      if (gates[k] == g) {
        gates.erase(gates.begin() + static_cast<std::ptrdiff_t>(k));
        gates.erase(gates.begin() + static_cast<std::ptrdiff_t>(i));
        return true;
      }
      if (!gates_commute(g, gates[k])) return false;
    }
    return false;
  }
  // Diagonal run on qubit q: every S/T on q reachable from i by commutation.
  const int q = g.q0;
  std::vector<std::size_t> run{i};
  int exponent = phase_exponent(g);
  for (std::size_t k = i + 1; k < gates.size(); ++k) {
    const Gate h = gates[k];
    if (h.is_diagonal() && h.q0 == q) {
      run.push_back(k);
      exponent += phase_exponent(h);
    } else if (!gates_commute(g, h)) {
      break;
    }
  }
  const auto replacement = phase_run_gates(exponent % 8, q);
  if (replacement.size() >= run.size()) return false;
  for (auto it = run.rbegin(); it != run.rend(); ++it) {
    gates.erase(gates.begin() + static_cast<std::ptrdiff_t>(*it));
  }
  gates.insert(gates.begin() + static_cast<std::ptrdiff_t>(i), replacement.begin(),
               replacement.end());
  return true;
}

}  // namespace

void verify_rule(const RewriteRule& rule) {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::kInvalidArgument, "rewrite rule '" + rule.name + "': " + why);
  };
  if (rule.pattern.qubits() != rule.replacement.qubits()) fail("qubit counts differ");
  if (rule.replacement.size() > rule.pattern.size()) fail("replacement is longer");
  const Unitary a = circuit_unitary(rule.pattern);
  const Unitary b = circuit_unitary(rule.replacement);
  const Complex overlap = (a.matrix().adjoint() * b.matrix()).trace();
  if (std::abs(overlap) < 1e-12) fail("unitaries are orthogonal");
  const Complex phase = overlap / std::abs(overlap);
  const double err = (b.matrix() - phase * a.matrix()).cwiseAbs().maxCoeff();
  if (err > 1e-10) fail("unitaries differ beyond global phase (" + std::to_string(err) + ")");
}

const std::vector<RewriteRule>& rewrite_rules() {
  static const std::vector<RewriteRule> rules = build_rules();
  return rules;
}

std::vector<Gate> phase_run_gates(int exponent, int qubit) {
  const int e = ((exponent % 8) + 8) % 8;
  std::vector<Gate> out(static_cast<std::size_t>(e / 2), Gate::s(qubit));
  if (e % 2) out.push_back(Gate::t(qubit));
  return out;
}

bool gates_commute(Gate a, Gate b) {
  if (a == b) return true;
  const bool overlap = a.acts_on(b.q0) || (b.is_two_qubit() && a.acts_on(b.q1));
  if (!overlap) return true;
  if (a.is_diagonal() && b.is_diagonal()) return true;
  if (a.is_diagonal() && b.kind == GateKind::CX) return b.control() == a.q0;
  if (b.is_diagonal() && a.kind == GateKind::CX) return a.control() == b.q0;
  return false;
}

Circuit optimize(const Circuit& c) {
  (void)rewrite_rules();  // fail loudly if the inventory is unsound
  std::vector<Gate> gates(c.gates().begin(), c.gates().end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < gates.size();) {
      if (rewrite_at(gates, i)) {
        changed = true;
        // Re-examine the neighbourhood the rewrite may have exposed.
        i = i == 0 ? 0 : i - 1;
      } else {
        ++i;
      }
    }
  }
  return Circuit(c.qubits(), std::move(gates));
}

std::size_t t_count(const Circuit& c) {
  return static_cast<std::size_t>(std::count_if(
      c.gates().begin(), c.gates().end(),
      [](const Gate& g) { return g.kind == GateKind::T; }));
}

}  // namespace mdlsynth
