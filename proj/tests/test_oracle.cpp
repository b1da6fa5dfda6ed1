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

#include <gtest/gtest.h>

#include <cmath>

#include "mdlsynth/error.hpp"
#include "mdlsynth/metrics.hpp"
#include "mdlsynth/oracle.hpp"
#include "mdlsynth/peephole.hpp"
#include "test_util.hpp"

namespace mdlsynth {
namespace {

using testing::random_circuit;
using testing::random_unitary;

TEST(CanonicalKey, GlobalPhaseInvariant) {
  Rng rng(1);
  std::uniform_real_distribution<double> phase(0.0, 2 * M_PI);
  for (int i = 0; i < 100; ++i) {
    const Unitary u = random_unitary(1 + i % 3, rng);
    EXPECT_EQ(canonical_key(u), canonical_key(u.scaled(std::polar(1.0, phase(rng)))));
  }
  EXPECT_NE(canonical_key(gate_matrix(Gate::s(0), 1)), canonical_key(gate_matrix(Gate::t(0), 1)));
  EXPECT_NE(canonical_key(Unitary::identity(1)), canonical_key(Unitary::identity(2)));
}

TEST(CanonicalKey, ToleratesRoundoff) {
  Rng rng(2);
  const Circuit c = random_circuit(2, 30, rng);
  Unitary a = circuit_unitary(c);
  Unitary b = Unitary::identity(2);
  for (Gate g : c.gates()) b.left_multiply_in_place(g);
  EXPECT_EQ(canonical_key(a), canonical_key(b));
}

TEST(ExactMdl, SmallCases) {
  const OracleResult id = exact_mdl(Unitary::identity(2), 5, kDefaultThreshold);
  ASSERT_TRUE(id.found());
  EXPECT_EQ(id.depth, 0);
  EXPECT_TRUE(id.circuit->empty());

  const OracleResult s = exact_mdl(gate_matrix(Gate::s(0), 1), 5, kDefaultThreshold);
  ASSERT_TRUE(s.found());
  EXPECT_EQ(s.depth, 1);
  EXPECT_EQ(*s.circuit, Circuit(1, {Gate::s(0)}));

  const Unitary tdg = gate_matrix(Gate::t(0), 1).adjoint();
  const OracleResult t = exact_mdl(tdg, 6, kDefaultThreshold);
  ASSERT_TRUE(t.found());
  EXPECT_EQ(t.depth, 4);
  EXPECT_GE(avg_fidelity(circuit_unitary(*t.circuit), tdg), kDefaultThreshold);
}

TEST(ExactMdl, NotFoundCertifiesDepth) {
  Matrix d = Matrix::Identity(2, 2);
  d(1, 1) = std::polar(1.0, 0.3);
  const OracleResult r = exact_mdl(Unitary(1, d), 6, kDefaultThreshold);
  EXPECT_FALSE(r.found());
  EXPECT_EQ(r.depth, 6);
  EXPECT_GT(r.states, 1u);
}

TEST(ExactMdl, BudgetExceeded) {
  Rng rng(3);
  try {
    exact_mdl(random_unitary(2, rng), 8, kDefaultThreshold, 500);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBudgetExceeded);
    EXPECT_NE(std::string(e.what()).find("frontier"), std::string::npos);
  }
  EXPECT_THROW(exact_mdl(Unitary::identity(1), -1, 0.99), Error);
}

TEST(ExactMdl, OptimalAndBoundedByLabels) {
  Rng rng(4);
  for (int i = 0; i < 40; ++i) {
    const Circuit c = optimize(random_circuit(2, 6, rng));
    const Unitary u = circuit_unitary(c);
    const OracleResult r = exact_mdl(u, static_cast<int>(c.size()), kDefaultThreshold);
    ASSERT_TRUE(r.found());
    EXPECT_LE(r.depth, static_cast<int>(c.size()));
    EXPECT_EQ(r.circuit->size(), static_cast<std::size_t>(r.depth));
    EXPECT_GE(avg_fidelity(circuit_unitary(*r.circuit), u), kDefaultThreshold);
    // Breadth-first: nothing shorter exists.
    if (r.depth > 0) EXPECT_FALSE(exact_mdl(u, r.depth - 1, kDefaultThreshold).found());
  }
}

TEST(LabelBound, TrivialDatasets) {
  TrainingExample id{flatten_features(Unitary::identity(2)), 0};
  const std::vector<TrainingExample> ids(5, id);
  const LabelBoundReport a = verify_label_bound(ids, 2, 4, kDefaultThreshold);
  EXPECT_EQ(a.checked, 5u);
  EXPECT_EQ(a.violations, 0u);
  EXPECT_EQ(a.mean_gap, 0.0);

  std::vector<TrainingExample> singles;
  for (const Gate& g : action_set(2)) {
    singles.push_back({flatten_features(phase_normalize(gate_matrix(g, 2))), 1});
  }
  const LabelBoundReport b = verify_label_bound(singles, 2, 3, kDefaultThreshold);
  EXPECT_EQ(b.checked, singles.size());
  EXPECT_EQ(b.gap_histogram.at(0), singles.size());
}

TEST(LabelBound, SampledExamples) {
  SamplerConfig sc;
  sc.qubits = 2;
  sc.gate_count = {1, 8};
  sc.t_count = {0, 3};
  sc.seed = 5;
  Rng rng = make_rng(5, "datagen");
  std::vector<TrainingExample> data;
  while (data.size() < 60) {
    for (TrainingExample& e : make_examples(sample_circuit(sc, rng))) data.push_back(std::move(e));
  }
  data.resize(60);
  const LabelBoundReport r = verify_label_bound(data, 2, 6, kDefaultThreshold);
  EXPECT_EQ(r.examples, 60u);
  EXPECT_GT(r.checked, 30u);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_GE(r.mean_gap, 0.0);
}

}  // namespace
}  // namespace mdlsynth
