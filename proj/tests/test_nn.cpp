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
#include <filesystem>
#include <fstream>

#include "mdlsynth/error.hpp"
#include "mdlsynth/nn.hpp"
#include "test_util.hpp"

namespace mdlsynth {
namespace {

namespace fs = std::filesystem;

fs::path temp_path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "mdlsynth_tests";
  fs::create_directories(dir);
  return dir / name;
}

Eigen::MatrixXd random_batch(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd b(rows, cols);
  for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = nd(rng);
  return b;
}

TEST(Forward, ZeroModelGivesLn2) {
  Rng rng(1);
  const std::vector<int> hidden{8};
  MlpModel m(1, hidden, rng);
  for (auto& l : m.layers()) {
    l.weights.setZero();
    l.bias.setZero();
  }
  const Eigen::VectorXd y = m.forward(random_batch(5, 8, rng));
  ASSERT_EQ(y.size(), 5);
  for (Eigen::Index i = 0; i < 5; ++i) EXPECT_NEAR(y(i), std::log(2.0), 1e-15);
}

TEST(Forward, ShapesDuplicatesAndPositivity) {
  Rng rng(2);
  const std::vector<int> hidden{16, 8};
  const MlpModel m(1, hidden, rng);
  Eigen::MatrixXd b = random_batch(1000, 8, rng) * 50.0;
  b.row(1) = b.row(0);
  const Eigen::VectorXd y = m.forward(b);
  EXPECT_EQ(y.size(), 1000);
  EXPECT_EQ(y(0), y(1));
  EXPECT_GT(y.minCoeff(), 0.0);
  EXPECT_THROW(m.forward(random_batch(2, 9, rng)), Error);
  EXPECT_EQ(m.layer_dims(), (std::vector<int>{8, 16, 8, 1}));
  EXPECT_EQ(m.parameter_count(), 8u * 16 + 16 + 16 * 8 + 8 + 8 + 1);
}

TEST(Gradients, PerfectFitHasZeroLossAndGradient) {
  Rng rng(3);
  const std::vector<int> hidden{8};
  const MlpModel m(1, hidden, rng);
  const Eigen::MatrixXd b = random_batch(6, 8, rng);
  const Eigen::VectorXd labels = m.forward(b);
  const LossAndGrad lg = loss_and_grad(m, b, labels);
  EXPECT_EQ(lg.loss, 0.0);
  EXPECT_EQ(global_norm(lg.grads), 0.0);
}

TEST(Gradients, SingleLayerClosedForm) {
  Rng rng(4);
  const MlpModel m(1, std::span<const int>{}, rng);
  const Eigen::MatrixXd x = random_batch(1, 8, rng);
  Eigen::VectorXd y(1);
  y << 2.5;
  const double z = (m.layers()[0].weights * x.row(0).transpose())(0) + m.layers()[0].bias(0);
  const double yhat = softplus(z);
  const LossAndGrad lg = loss_and_grad(m, x, y);
  const Eigen::RowVectorXd want = 2.0 * (yhat - 2.5) * logistic(z) * x.row(0);
  EXPECT_LT((lg.grads[0].weights - want).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(lg.grads[0].bias(0), 2.0 * (yhat - 2.5) * logistic(z), 1e-12);
}

TEST(Gradients, MatchFiniteDifferences) {
  Rng rng(5);
  const std::vector<int> hidden{32, 16, 8};
  const MlpModel m(2, hidden, rng);
  const Eigen::MatrixXd b = random_batch(20, 32, rng);
  Eigen::VectorXd labels(20);
  for (int i = 0; i < 20; ++i) labels(i) = i % 7;
  EXPECT_LE(gradient_check_error(m, b, labels), 1e-4);
}

TEST(Gradients, NonFiniteLossIsReported) {
  Rng rng(6);
  const std::vector<int> hidden{4};
  const MlpModel m(1, hidden, rng);
  Eigen::MatrixXd b = random_batch(2, 8, rng);
  b(0, 0) = std::numeric_limits<double>::quiet_NaN();
  try {
    loss_and_grad(m, b, Eigen::VectorXd::Zero(2));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFinite);
  }
}

TEST(AdamW, ZeroGradientLeavesParameters) {
  Rng rng(7);
  const std::vector<int> hidden{4};
  MlpModel m(1, hidden, rng);
  const MlpModel before = m;
  AdamWState st(m);
  TrainConfig cfg;
  adamw_step(m, st, zeros_like(m), 1e-3, cfg);
  for (std::size_t l = 0; l < m.layers().size(); ++l) {
    EXPECT_EQ(m.layers()[l].weights, before.layers()[l].weights);
  }
}

TEST(AdamW, FirstStepIsSignedLearningRate) {
  Rng rng(8);
  MlpModel m(1, std::span<const int>{}, rng);
  const MlpModel before = m;
  AdamWState st(m);
  TrainConfig cfg;
  cfg.grad_clip = 0.0;
  LayerBuffers g = zeros_like(m);
  for (Eigen::Index i = 0; i < g[0].weights.size(); ++i) g[0].weights.data()[i] = (i % 2 ? 0.3 : -0.02);
  adamw_step(m, st, g, 1e-2, cfg);
  for (Eigen::Index i = 0; i < g[0].weights.size(); ++i) {
    const double step = m.layers()[0].weights.data()[i] - before.layers()[0].weights.data()[i];
    EXPECT_NEAR(step, i % 2 ? -1e-2 : 1e-2, 1e-7);
  }
}

TEST(AdamW, ClipsByGlobalNorm) {
  Rng rng(9);
  MlpModel m(1, std::span<const int>{}, rng);
  AdamWState st(m);
  TrainConfig cfg;
  LayerBuffers g = zeros_like(m);
  g[0].weights(0, 0) = 6.0;
  g[0].bias(0) = 8.0;
  EXPECT_NEAR(global_norm(g), 10.0, 1e-12);
  EXPECT_NEAR(adamw_step(m, st, g, 1e-3, cfg), 0.1, 1e-12);
  // First moment after clipping: (1 - beta1) * 0.1 * g.
  EXPECT_NEAR(st.m[0].bias(0), 0.1 * 0.8, 1e-12);
  g[0].weights(0, 0) = std::nan("");
  EXPECT_THROW(adamw_step(m, st, g, 1e-3, cfg), Error);
}

TEST(Schedule, WarmupAndCosine) {
  TrainConfig cfg;
  EXPECT_EQ(lr_at(0, cfg), 0.0);
  EXPECT_NEAR(lr_at(cfg.warmup_steps, cfg), cfg.peak_lr, 1e-18);
  EXPECT_NEAR(lr_at(cfg.warmup_steps + cfg.cosine_t_max, cfg), cfg.lr_min, 1e-18);
  EXPECT_NEAR(lr_at(cfg.warmup_steps + cfg.cosine_t_max / 2, cfg), (cfg.peak_lr + cfg.lr_min) / 2,
              1e-15);
  EXPECT_EQ(lr_at(cfg.warmup_steps + cfg.cosine_t_max + 999, cfg), cfg.lr_min);
}

TEST(Replay, RingOverwritesOldest) {
  ReplayBuffer buf(3);
  for (int i = 0; i < 5; ++i) buf.push({{double(i)}, static_cast<std::uint16_t>(i)});
  EXPECT_EQ(buf.size(), 3u);
  std::vector<int> labels;
  for (std::size_t i = 0; i < 3; ++i) labels.push_back(buf[i].label);
  std::sort(labels.begin(), labels.end());
  EXPECT_EQ(labels, (std::vector<int>{2, 3, 4}));
}

TEST(Train, ConstantLabelsAreLearned) {
  std::vector<TrainingExample> data;
  Rng rng(10);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 500; ++i) {
    TrainingExample e;
    e.features.resize(feature_width(1));
    for (double& f : e.features) f = nd(rng);
    e.label = 5;
    data.push_back(e);
  }
  VectorSource src(data);
  TrainConfig cfg;
  cfg.hidden = {16, 8};
  cfg.batch_size = 32;
  cfg.grad_accumulation = 1;
  cfg.epochs = 4;
  cfg.steps_per_epoch = 500;
  cfg.warmup_steps = 100;
  cfg.cosine_t_max = 1900;
  cfg.peak_lr = 3e-3;
  const TrainResult r = train(src, std::span(data).first(100), 1, cfg);
  EXPECT_LT(evaluate(r.model, data).mae, 0.1);
  EXPECT_EQ(r.log.size(), 4u);
}

TEST(Train, EmptySourceIsAnError) {
  VectorSource empty({});
  TrainConfig cfg;
  cfg.hidden = {4};
  try {
    train(empty, {}, 1, cfg);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kStreamExhausted);
  }
}

TrainConfig small_stream_config() {
  TrainConfig cfg;
  cfg.hidden = {32, 16};
  cfg.batch_size = 32;
  cfg.grad_accumulation = 1;
  cfg.epochs = 1;
  cfg.steps_per_epoch = 2000;
  cfg.warmup_steps = 100;
  cfg.cosine_t_max = 1900;
  cfg.peak_lr = 1e-3;
  cfg.fresh_per_step = 8;
  cfg.replay_buffer = 2000;
  cfg.seed = 3;
  return cfg;
}

TEST(Train, LossEmaDecreasesOnStream) {
  StreamConfig sc;
  sc.sampler.qubits = 1;
  sc.sampler.t_count = {0, 4};
  sc.sampler.gate_count = {1, 12};
  StreamSource src(sc);
  const TrainResult r = train(src, {}, 1, small_stream_config());
  ASSERT_EQ(r.loss_ema.size(), 2000u);
  EXPECT_LT(r.loss_ema[1999], r.loss_ema[99]);
}

TEST(Train, BitReproducibleUnderSeed) {
  StreamConfig sc;
  sc.sampler.qubits = 1;
  sc.sampler.t_count = {0, 4};
  sc.sampler.gate_count = {1, 12};
  TrainConfig cfg = small_stream_config();
  cfg.steps_per_epoch = 200;
  cfg.cosine_t_max = 100;
  StreamSource a(sc), b(sc);
  const TrainResult ra = train(a, {}, 1, cfg);
  const TrainResult rb = train(b, {}, 1, cfg);
  for (std::size_t l = 0; l < ra.model.layers().size(); ++l) {
    EXPECT_EQ(ra.model.layers()[l].weights, rb.model.layers()[l].weights);
  }
  EXPECT_EQ(ra.loss_ema, rb.loss_ema);
}

TEST(Train, ParallelSourceIsDeterministic) {
  StreamConfig sc;
  sc.sampler.qubits = 2;
  sc.sampler.t_count = {0, 6};
  sc.sampler.gate_count = {1, 20};
  ParallelStreamSource a(sc, 3), b(sc, 3);
  for (int i = 0; i < 200; ++i) EXPECT_EQ(*a.next(), *b.next());
}

TEST(ModelFile, RoundTripAndErrors) {
  Rng rng(11);
  const std::vector<int> hidden{16, 8};
  MlpModel m(2, hidden, rng);
  m.round_to_float32();
  save_model(m, temp_path("m.mdlm"));
  const MlpModel back = load_model(temp_path("m.mdlm"));
  EXPECT_EQ(back.qubits(), 2);
  EXPECT_EQ(back.layer_dims(), m.layer_dims());
  const Eigen::MatrixXd b = random_batch(100, 32, rng);
  EXPECT_EQ(back.forward(b), m.forward(b));

  EXPECT_NO_THROW(check_model_compatible(back, 1));
  EXPECT_NO_THROW(check_model_compatible(back, 2));
  try {
    check_model_compatible(back, 3);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }

  std::ifstream in(temp_path("m.mdlm"), std::ios::binary);
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), {});
  bytes.resize(bytes.size() / 2);
  std::ofstream(temp_path("cut.mdlm"), std::ios::binary).write(bytes.data(), static_cast<long>(bytes.size()));
  try {
    load_model(temp_path("cut.mdlm"));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
}

TEST(Metrics, SpearmanAndCsv) {
  const std::vector<double> a{1, 2, 3, 4, 5}, b{2, 4, 6, 8, 100}, c{5, 4, 3, 2, 1};
  EXPECT_NEAR(spearman_correlation(a, b), 1.0, 1e-12);
  EXPECT_NEAR(spearman_correlation(a, c), -1.0, 1e-12);
  const std::vector<EpochMetrics> log{{1, 2.0, 3.0, 1.0, 0.5, 1e-3}};
  EXPECT_EQ(format_metrics_csv(log).substr(0, 42), "epoch,train_mse,val_mse,val_mae,val_r2,lr\n");
}

}  // namespace
}  // namespace mdlsynth
