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

// Benchmark harnesses: structured reference circuits, random suites bucketed
// by T-count, and trial-budget sweeps. Reports serialize to JSON, CSV and
// SVG.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mdlsynth/core.hpp"
#include "mdlsynth/datagen.hpp"
#include "mdlsynth/nn.hpp"
#include "mdlsynth/search.hpp"

namespace mdlsynth {

struct StructuredTarget {
  std::string name;
  int qubits = 1;
  /// Reference construction, peephole-optimized.
  Circuit circuit;
  /// Published gate count, when one exists.
  std::optional<int> reference_gates;
};

/// Names: ghz_N, cluster_N, phase_gadget_N (N in 2..5) and perfect_513.
/// Throws kInvalidArgument for unknown names.
StructuredTarget build_structured(const std::string& name);
/// The structured rows with published counts, in table order.
std::vector<std::string> structured_catalog();

struct BenchTarget {
  std::string name;
  int bucket = 0;  // T-count of the reference
  Circuit reference;
  Unitary unitary;
};

struct RandomSuiteConfig {
  int qubits = 2;
  int per_bucket = 20;
  int t_min = 0;
  int t_max = 8;
  IntRange gate_count{1, 12};
  std::uint64_t seed = 0;
};

/// per_bucket optimized random circuits for every T-count in [t_min, t_max];
/// bucket k draws from derive_seed(seed, "suite", k).
std::vector<BenchTarget> random_suite(const RandomSuiteConfig& cfg);
std::vector<BenchTarget> structured_suite(std::span<const std::string> names);

struct TargetResult {
  std::string name;
  int qubits = 1;
  int bucket = 0;
  std::size_t reference_gates = 0;
  bool success = false;
  std::size_t gates = 0;
  std::size_t t_count = 0;
  double fidelity = 0.0;
  std::size_t trials_used = 0;
  std::optional<std::size_t> first_success;
  std::optional<int> oracle_mdl;
  std::string circuit;
  double wall_time_s = 0.0;
};

struct BucketSummary {
  int qubits = 1;
  int bucket = 0;
  std::size_t targets = 0;
  std::size_t successes = 0;
  double mean_gates = 0.0;  // over successes
};

struct BenchReport {
  SearchConfig search;
  std::vector<TargetResult> targets;
  std::vector<BucketSummary> buckets;
  double wall_time_s = 0.0;

  std::size_t successes() const;
  double success_rate() const;
};

struct SuiteOptions {
  /// When positive, also record the exact minimum up to this depth.
  int oracle_depth = 0;
};

BenchReport run_suite(std::span<const BenchTarget> targets, const MlpModel& model,
                      const SearchConfig& cfg, SuiteOptions opts = {});

struct BudgetPoint {
  int budget = 0;
  std::size_t successes = 0;
  std::size_t total = 0;
  double rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// Wilson score interval.
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t total, double z);
inline constexpr double kZ99 = 2.5758293035489;

/// A target counts as solved at budget b when any of its first b trials
/// succeeded. Budgets must be ascending and no larger than the trials run.
std::vector<BudgetPoint> budget_curve(const BenchReport& report, std::span<const int> budgets);

/// Runs the suite once with max(budgets) trials and reads off the curve.
std::vector<BudgetPoint> budget_sweep(std::span<const BenchTarget> targets, const MlpModel& model,
                                      SearchConfig cfg, std::span<const int> budgets,
                                      BenchReport* report = nullptr);

/// Wall times live under a single "timing" object so reports from identical
/// runs compare equal once it is removed.
nlohmann::json report_to_json(const BenchReport& report);
std::string report_to_csv(const BenchReport& report);
std::string budget_curve_to_csv(std::span<const BudgetPoint> curve);
nlohmann::json budget_curve_to_json(std::span<const BudgetPoint> curve);

std::string budget_curve_svg(std::span<const BudgetPoint> curve);
/// Success rate per (qubits, T-count) bucket.
std::string bucket_heatmap_svg(const BenchReport& report);

}  // namespace mdlsynth
