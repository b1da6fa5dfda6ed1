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

// End-to-end checks on a desk-scale two-qubit model. Training runs once for
// the whole suite.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <memory>

#include <json.hpp>

#include "mdlsynth/bench.hpp"
#include "mdlsynth/cli.hpp"
#include "mdlsynth/metrics.hpp"
#include "mdlsynth/oracle.hpp"
#include "mdlsynth/peephole.hpp"
#include "mdlsynth/search.hpp"
#include "test_util.hpp"

namespace mdlsynth {
namespace {

namespace fs = std::filesystem;

class DeskPipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    preset_ = std::make_unique<DeskPreset>(desk_preset(2, 7));
    validation_ = validation_examples(preset_->stream, 2000);
    StreamSource src(preset_->stream);
    result_ = std::make_unique<TrainResult>(
        train(src, std::span(validation_).first(1024), 2, preset_->train));
  }
  static void TearDownTestSuite() {
    result_.reset();
    preset_.reset();
  }

  static std::unique_ptr<DeskPreset> preset_;
  static std::vector<TrainingExample> validation_;
  static std::unique_ptr<TrainResult> result_;
};

std::unique_ptr<DeskPreset> DeskPipeline::preset_;
std::vector<TrainingExample> DeskPipeline::validation_;
std::unique_ptr<TrainResult> DeskPipeline::result_;

TEST_F(DeskPipeline, ModelRanksDescriptionLength) {
  const MlpModel& m = result_->model;
  const RegressionMetrics metrics = evaluate(m, validation_);
  const Eigen::VectorXd pred = predict_all(m, validation_);
  std::vector<double> p(pred.data(), pred.data() + pred.size()), labels;
  for (const auto& e : validation_) labels.push_back(e.label);
  const double rho = spearman_correlation(p, labels);
  RecordProperty("val_mae", std::to_string(metrics.mae));
  RecordProperty("spearman", std::to_string(rho));
  EXPECT_LE(metrics.mae, 1.5);
  EXPECT_GE(rho, 0.8);
  EXPECT_GE(result_->examples_consumed, 20000u);
  // Loss trend over training.
  ASSERT_FALSE(result_->loss_ema.empty());
  EXPECT_LT(result_->loss_ema.back(), result_->loss_ema[result_->loss_ema.size() / 20]);
}

TEST_F(DeskPipeline, ShortTargetsMatchOracle) {
  const MlpModel& m = result_->model;
  Rng rng(8);
  SearchConfig cfg;
  cfg.trials = 50;
  cfg.seed = 9;
  int solved = 0, optimal = 0;
  const int targets = 30;
  for (int i = 0; i < targets; ++i) {
    const Unitary u = circuit_unitary(testing::random_circuit(2, 4, rng));
    const SynthesisResult res = synthesize(u, m, cfg);
    if (!res.success()) continue;
    ++solved;
    EXPECT_GE(avg_fidelity(circuit_unitary(*res.circuit), u), cfg.threshold);
    const OracleResult o = exact_mdl(u, 4, cfg.threshold);
    ASSERT_TRUE(o.found());
    EXPECT_GE(res.circuit->size(), static_cast<std::size_t>(o.depth));
    if (res.circuit->size() == static_cast<std::size_t>(o.depth)) ++optimal;
  }
  EXPECT_GE(solved, 0.95 * targets);
  EXPECT_GE(optimal, 0.8 * solved);
}

TEST_F(DeskPipeline, SavedModelScoresIdentically) {
  const fs::path path = fs::temp_directory_path() / "mdlsynth_integration.mdlm";
  save_model(result_->model, path);
  const MlpModel back = load_model(path);
  const Eigen::VectorXd a = predict_all(result_->model, validation_);
  EXPECT_EQ(a, predict_all(back, validation_));
  fs::remove(path);
}

TEST(Quickstart, OneQubitSolvesEveryShallowTarget) {
  const fs::path dir = fs::temp_directory_path() / "mdlsynth_qs1";
  fs::remove_all(dir);
  QuickstartConfig cfg;
  cfg.qubits = 1;
  cfg.seed = 4;
  const nlohmann::json report = run_quickstart(cfg, dir);
  EXPECT_EQ(report["enumerated"]["successes"], report["enumerated"]["targets"]);
  // Distinct one-qubit unitaries (up to phase) with at most four gates,
  // counted by an independent breadth-first enumeration.
  EXPECT_EQ(report["enumerated"]["targets"].get<int>(), 43);
  EXPECT_GT(report["random"]["successes"].get<int>(), 0);
  for (const char* f : {"model.mdlm", "metrics.csv", "random.json", "random.csv", "sweep.csv",
                        "sweep.svg", "heatmap.svg", "enumerated.json", "quickstart.json"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  fs::remove_all(dir);
}

TEST(Quickstart, TrainingIsBitReproducibleAcrossWorkers) {
  DeskPreset p = desk_preset(2, 11);
  p.train.epochs = 2;
  p.train.steps_per_epoch = 40;
  p.train.cosine_t_max = 80;
  p.train.warmup_steps = 8;
  const auto val = validation_examples(p.stream, 64);
  ParallelStreamSource a(p.stream, 2), b(p.stream, 2);
  const TrainResult ra = train(a, val, 2, p.train);
  const TrainResult rb = train(b, val, 2, p.train);
  for (std::size_t l = 0; l < ra.model.layers().size(); ++l) {
    EXPECT_EQ(ra.model.layers()[l].weights, rb.model.layers()[l].weights);
    EXPECT_EQ(ra.model.layers()[l].bias, rb.model.layers()[l].bias);
  }
}

}  // namespace
}  // namespace mdlsynth
