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

// Stochastic beam search guided by a learned description-length model, plus
// the multi-trial driver that cycles through qubit permutations and
// adjoint targets.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mdlsynth/core.hpp"
#include "mdlsynth/metrics.hpp"
#include "mdlsynth/nn.hpp"
#include "mdlsynth/rng.hpp"

namespace mdlsynth {

struct BeamCandidate {
  /// target U(circuit)^dagger: what is still left to apply.
  Unitary residual;
  Circuit circuit;
  /// Negated predicted description length of residual; higher is better.
  double score = 0.0;
};

struct SearchConfig {
  int beam_width = 10;
  int max_steps = 60;
  double temperature = 1.0;
  double threshold = kDefaultThreshold;
  int trials = 200;
  std::uint64_t seed = 0;
  bool permutation_trials = true;
  bool inverse_trials = true;
  int workers = 1;
  /// Trials run in waves of this size; later waves are capped at the best
  /// length found so far. 0 disables the cap.
  int prune_wave = 32;

  void validate() const;
};

struct TrialVariant {
  /// perm[q] is the qubit that original qubit q is relabeled to.
  std::vector<int> permutation;
  bool inverse = false;
};

struct TrialRecord {
  std::size_t index = 0;
  TrialVariant variant;
  bool success = false;
  /// Length found by the beam search before back-mapping and optimization.
  std::size_t raw_gates = 0;
  /// Optimized, back-mapped length.
  std::size_t gates = 0;
  double fidelity = 0.0;
  int steps = 0;
  int step_cap = 0;
};

struct SynthesisResult {
  std::optional<Circuit> circuit;
  double achieved_fidelity = 0.0;
  std::size_t trials_used = 0;
  /// Sum of beam steps over all trials.
  std::size_t steps_used = 0;
  double wall_time_s = 0.0;
  std::optional<std::size_t> best_trial;
  std::vector<TrialRecord> trials;

  bool success() const { return circuit.has_value(); }
  /// Index of the earliest successful trial, if any.
  std::optional<std::size_t> first_success() const;
};

/// One expansion per (beam member, action); scores come from a single batched
/// forward pass over phase-normalized residuals padded to the model width.
/// Throws kDimensionMismatch if the model cannot take the residuals.
std::vector<BeamCandidate> expand(std::span<const BeamCandidate> beam,
                                  std::span<const Gate> actions, const MlpModel& model);

/// The min(B, |candidates|) candidates with the largest score / tau + g, with
/// g standard Gumbel noise. Returned in descending order of that key.
std::vector<BeamCandidate> gumbel_top_b(std::vector<BeamCandidate> candidates, int beam_width,
                                        double temperature, Rng& rng);

struct TrialOutcome {
  std::optional<Circuit> circuit;
  double fidelity = 0.0;
  int steps = 0;
};

/// A single beam search over at most max_steps gates. Solutions are
/// harvested as soon as a beam member converges; among the members converged
/// at that step the shortest wins, then higher fidelity, then the smaller
/// circuit in lexicographic order.
TrialOutcome run_trial(const Unitary& target, const MlpModel& model, const SearchConfig& cfg,
                       Rng& rng);

/// P U P^dagger where P maps basis state of qubit q to qubit perm[q].
Unitary permute_target(const Unitary& target, std::span<const int> perm);
/// Relabels a circuit found for permute_target(target, perm) back onto the
/// original qubits.
Circuit unpermute_circuit(const Circuit& c, std::span<const int> perm);
Circuit adjoint_circuit(const Circuit& c);

/// Identity first, then the remaining permutations in lexicographic order;
/// each permutation is followed by its inverse variant when enabled.
std::vector<TrialVariant> trial_variants(int qubits, bool permutations, bool inverse);

/// Runs cfg.trials independent trials; trial i uses variant i mod |variants|
/// and the Gumbel stream derive_seed(seed, "gumbel", i). Returns the
/// shortest verified success after optimization (ties: higher fidelity, then
/// earlier trial). The result does not depend on cfg.workers.
SynthesisResult synthesize(const Unitary& target, const MlpModel& model,
                           const SearchConfig& cfg);

}  // namespace mdlsynth
