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

// Training-data generation: rejection-sampled Clifford+T circuits, curriculum
// cuts aligned with T gates, phase-normalized residual features and the
// binary dataset format.

#include <cstdint>
#include <deque>
#include <filesystem>
#include <span>
#include <vector>

#include "mdlsynth/core.hpp"
#include "mdlsynth/rng.hpp"

namespace mdlsynth {

inline constexpr double kPhaseThreshold = 1e-7;
inline constexpr int kDefaultMaxGates = 60;

struct IntRange {
  int lo = 0;
  int hi = 0;
  bool contains(int v) const { return lo <= v && v <= hi; }
};

struct SamplerConfig {
  int qubits = 2;
  IntRange t_count{0, 20};
  IntRange gate_count{3, 60};
  std::uint64_t seed = 0;
  int max_attempts = 10000;

  /// Throws kInvalidArgument on empty ranges or qubits outside [1, 5].
  void validate() const;
};

/// Draws k uniformly from cfg.t_count and returns an accepted circuit with
/// exactly k T gates (see sample_circuit_with_t_count).
Circuit sample_circuit(const SamplerConfig& cfg, Rng& rng);

/// Proposal: uniform random Clifford gates (H, S, CX on uniform qubits),
/// k T gates inserted at uniform positions, a uniform shuffle, then the
/// peephole optimizer. The proposal is accepted when optimization kept the
/// T-count at k and the optimized length lies in cfg.gate_count; otherwise
/// it is resampled. Throws kBudgetExceeded after cfg.max_attempts.
Circuit sample_circuit_with_t_count(const SamplerConfig& cfg, int k, Rng& rng);

/// Cut positions t in [0, |C|]: always 0; after the floor(k/2)-th T gate
/// when k >= 5; after the floor(3k/4)-th T gate when k >= 10.
std::vector<std::size_t> curriculum_cuts(const Circuit& c);

/// e^{-i theta} R where theta is the argument of the first row-major entry
/// with modulus above threshold.
Unitary phase_normalize(const Unitary& r, double threshold = kPhaseThreshold);

/// 2 * 4^n.
std::size_t feature_width(int qubits);

/// All 4^n real parts row-major, then all 4^n imaginary parts.
std::vector<double> flatten_features(const Unitary& u);
void flatten_features_into(const Unitary& u, std::span<double> out);
Unitary unflatten_features(std::span<const double> features, int qubits);

/// Model input for a residual: kron-pad to model_qubits, phase-normalize,
/// flatten.
void residual_features_into(const Unitary& r, int model_qubits, std::span<double> out);

struct TrainingExample {
  std::vector<double> features;
  std::uint16_t label = 0;

  friend bool operator==(const TrainingExample&, const TrainingExample&) = default;
};

struct ExampleOptions {
  bool curriculum = true;
  bool reoptimize_suffix = true;
};

/// One example per cut t: features of the phase-normalized residual
/// U(C) U(C_{1:t})^dagger and label |optimize(C_{t+1:})| (or |C| - t
/// without suffix re-optimization).
std::vector<TrainingExample> make_examples(const Circuit& c, ExampleOptions opts = {});

struct StreamConfig {
  SamplerConfig sampler;
  ExampleOptions examples;
};

/// Infinite example iterator for one worker, seeded from
/// derive_seed(sampler.seed, "datagen", worker).
class ExampleStream {
 public:
  explicit ExampleStream(StreamConfig cfg, std::uint64_t worker = 0);

  TrainingExample next();
  int qubits() const { return cfg_.sampler.qubits; }
  std::uint64_t circuits_sampled() const { return circuits_; }

 private:
  StreamConfig cfg_;
  Rng rng_;
  std::deque<TrainingExample> pending_;
  std::uint64_t circuits_ = 0;
};

/// Dataset file: "MDLD", u16 version, u8 qubits, u64 count, then per example
/// float32[2 * 4^n] features and a u16 label; trailing CRC32. Little-endian.
struct Dataset {
  int qubits = 1;
  std::vector<TrainingExample> examples;
};

void write_dataset(const Dataset& data, const std::filesystem::path& path);
Dataset read_dataset(const std::filesystem::path& path);

}  // namespace mdlsynth
