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

// Exhaustive breadth-first synthesis for small registers. Used as ground
// truth for labels, for checking the beam search and in acceptance tests.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>

#include "mdlsynth/core.hpp"
#include "mdlsynth/datagen.hpp"

namespace mdlsynth {

/// 128-bit digest of a phase-normalized unitary with entries rounded to
/// six decimals. Equal for U and e^{i phi} U.
struct CanonicalKey {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;
};

struct CanonicalKeyHash {
  std::size_t operator()(const CanonicalKey& k) const noexcept {
    return static_cast<std::size_t>(k.lo ^ (k.hi * 0x9e3779b97f4a7c15ULL));
  }
};

CanonicalKey canonical_key(const Unitary& u);

inline constexpr std::size_t kDefaultStateBudget = 4'000'000;

struct OracleResult {
  /// Witness of minimum length; empty when nothing was found.
  std::optional<Circuit> circuit;
  /// Minimum gate count when found, otherwise the exhausted depth (so the
  /// minimum is certified to exceed it).
  int depth = 0;
  double fidelity = 0.0;
  std::size_t states = 0;

  bool found() const { return circuit.has_value(); }
};

/// Breadth-first search over gate sequences, deduplicated by CanonicalKey.
/// Throws kBudgetExceeded (with the frontier size) once more than
/// state_budget distinct states have been generated.
OracleResult exact_mdl(const Unitary& target, int max_depth, double threshold,
                       std::size_t state_budget = kDefaultStateBudget);

struct LabelBoundReport {
  std::size_t examples = 0;
  /// Examples whose exact minimum is at most max_depth.
  std::size_t checked = 0;
  std::size_t violations = 0;
  /// label - exact over the checked examples.
  std::map<int, std::size_t> gap_histogram;
  double mean_gap = 0.0;
};

/// Checks exact_mdl <= label on every example whose residual can be solved
/// within max_depth.
LabelBoundReport verify_label_bound(std::span<const TrainingExample> examples, int qubits,
                                    int max_depth, double threshold);

}  // namespace mdlsynth
