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

#include "mdlsynth/oracle.hpp"

#include <cmath>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "mdlsynth/error.hpp"
#include "mdlsynth/metrics.hpp"

namespace mdlsynth {
namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= h >> 31;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 29;
  return h;
}

std::uint64_t quantize(double x) {
  const long long q = std::llround(x * 1e6);
  return static_cast<std::uint64_t>(q);  // llround(-0.0) is 0
}

}  // namespace

CanonicalKey canonical_key(const Unitary& u) {
  const Unitary n = phase_normalize(u);
  std::uint64_t a = 0x243f6a8885a308d3ULL ^ static_cast<std::uint64_t>(u.qubits());
  std::uint64_t b = 0x13198a2e03707344ULL + static_cast<std::uint64_t>(u.qubits());
  const Complex* data = n.matrix().data();
  const Eigen::Index size = n.matrix().size();
  for (Eigen::Index i = 0; i < size; ++i) {
    const std::uint64_t re = quantize(data[i].real());
    const std::uint64_t im = quantize(data[i].imag());
    a = mix(a, re);
    a = mix(a, im);
    b = mix(b ^ 0xa4093822299f31d0ULL, im);
    b = mix(b, re);
  }
  return {a, b};
}

OracleResult exact_mdl(const Unitary& target, int max_depth, double threshold,
                       std::size_t state_budget) {
  if (max_depth < 0) throw Error(ErrorCode::kInvalidArgument, "max_depth must be >= 0");
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must lie in (0, 1]");
  }
  const int n = target.qubits();
  OracleResult out;
  out.states = 1;
  if (is_converged(target, threshold)) {
    out.circuit = Circuit(n);
    out.fidelity = fidelity_to_identity(target);
    return out;
  }

  // Residuals R = target U(C)^dagger; only the live frontier keeps matrices.
  struct Node {
    std::int32_t parent;
    Gate gate;
  };
  std::vector<Node> nodes{{-1, Gate{}}};
  std::vector<std::pair<Unitary, std::int32_t>> frontier{{target, 0}};
  std::unordered_set<CanonicalKey, CanonicalKeyHash> seen{canonical_key(target)};
  const std::vector<Gate> actions = action_set(n);

  auto witness = [&](std::int32_t node) {
    std::vector<Gate> gates;
    for (std::int32_t i = node; nodes[i].parent >= 0; i = nodes[i].parent) {
      gates.push_back(nodes[i].gate);
    }
    return Circuit(n, {gates.rbegin(), gates.rend()});
  };

  for (int depth = 1; depth <= max_depth; ++depth) {
    std::vector<std::pair<Unitary, std::int32_t>> next;
    for (const auto& [r, node] : frontier) {
      for (const Gate& g : actions) {
        Unitary child = r.right_multiplied(g, /*adjoint=*/true);
        if (!seen.insert(canonical_key(child)).second) continue;
        nodes.push_back({node, g});
        const auto id = static_cast<std::int32_t>(nodes.size() - 1);
        if (is_converged(child, threshold)) {
          out.circuit = witness(id);
          out.depth = depth;
          out.fidelity = fidelity_to_identity(child);
          out.states = seen.size();
          return out;
        }
        if (seen.size() > state_budget) {
          throw Error(ErrorCode::kBudgetExceeded,
                      "oracle state budget of " + std::to_string(state_budget) +
                          " exceeded at depth " + std::to_string(depth) +
                          " (frontier size " + std::to_string(frontier.size()) + ")");
        }
        if (depth < max_depth) next.emplace_back(std::move(child), id);
      }
    }
    frontier = std::move(next);
    out.depth = depth;
  }
  out.states = seen.size();
  return out;
}

LabelBoundReport verify_label_bound(std::span<const TrainingExample> examples, int qubits,
                                    int max_depth, double threshold) {
  LabelBoundReport rep;
  double gap_sum = 0.0;
  for (const TrainingExample& ex : examples) {
    ++rep.examples;
    const Unitary r = unflatten_features(ex.features, qubits);
    const OracleResult res = exact_mdl(r, max_depth, threshold);
    if (!res.found()) continue;
    ++rep.checked;
    const int gap = static_cast<int>(ex.label) - res.depth;
    if (gap < 0) ++rep.violations;
    ++rep.gap_histogram[gap];
    gap_sum += gap;
  }
  if (rep.checked > 0) rep.mean_gap = gap_sum / static_cast<double>(rep.checked);
  return rep;
}

}  // namespace mdlsynth
