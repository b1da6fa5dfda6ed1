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

// Feed-forward MDL regressor: rectified-linear hidden layers and a softplus
// output, trained by mean-squared error with AdamW, warmup + cosine learning
// rate and a replay buffer fed by an example source.

#include <Eigen/Dense>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "mdlsynth/datagen.hpp"
#include "mdlsynth/rng.hpp"

namespace mdlsynth {

struct DenseLayer {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd bias;     // out
};

/// Per-layer parameter-shaped buffers (gradients, optimizer moments).
using LayerBuffers = std::vector<DenseLayer>;

class MlpModel {
 public:
  /// He-normal weights, zero biases. Input width is 2 * 4^qubits.
  MlpModel(int qubits, std::span<const int> hidden, Rng& rng);
  /// Takes explicit layers; throws kDimensionMismatch unless they chain from
  /// the input width to a single output.
  MlpModel(int qubits, std::vector<DenseLayer> layers);

  int qubits() const { return qubits_; }
  int input_dim() const { return static_cast<int>(layers_.front().weights.cols()); }
  /// Input width, hidden widths, output width.
  std::vector<int> layer_dims() const;
  std::size_t parameter_count() const;

  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& layers() { return layers_; }

  /// One strictly positive prediction per row of batch (rows x input_dim).
  Eigen::VectorXd forward(const Eigen::MatrixXd& batch) const;
  double predict(std::span<const double> features) const;

  /// Rounds every parameter to the nearest float32, the on-disk precision.
  void round_to_float32();

 private:
  int qubits_;
  std::vector<DenseLayer> layers_;
};

double softplus(double z);
double logistic(double z);

LayerBuffers zeros_like(const MlpModel& model);
double global_norm(const LayerBuffers& buffers);

struct LossAndGrad {
  double loss = 0.0;
  LayerBuffers grads;
};

/// Mean squared error of forward(batch) against labels and its gradient by
/// backpropagation. Throws kDimensionMismatch on shape errors and
/// kNonFinite when the loss is not finite.
LossAndGrad loss_and_grad(const MlpModel& model, const Eigen::MatrixXd& batch,
                          const Eigen::VectorXd& labels);

/// Largest relative error between analytic gradients and central finite
/// differences with step h, over every parameter. Denominators are floored at
/// 1e-6 so parameters with vanishing gradients do not dominate.
double gradient_check_error(const MlpModel& model, const Eigen::MatrixXd& batch,
                            const Eigen::VectorXd& labels, double h = 1e-5);

struct TrainConfig {
  std::vector<int> hidden{1024, 512, 128};
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;
  double grad_clip = 1.0;
  double dropout = 0.0;  // only 0.0 is supported
  int batch_size = 256;
  int grad_accumulation = 5;
  long warmup_steps = 2000;
  long cosine_t_max = 20000;
  double lr_min = 1e-6;
  double peak_lr = 5e-4;
  int epochs = 200;
  int steps_per_epoch = 2000;
  int replay_buffer = 6000;
  int validation_size = 4096;
  /// Fresh examples pulled from the source into the replay buffer per
  /// optimizer step.
  int fresh_per_step = 256;
  std::uint64_t seed = 0;

  long total_steps() const { return static_cast<long>(epochs) * steps_per_epoch; }
  void validate() const;
};

struct AdamWState {
  explicit AdamWState(const MlpModel& model);
  LayerBuffers m;
  LayerBuffers v;
  long step = 0;
};

/// Clips grads to global norm cfg.grad_clip, then applies one AdamW update
/// (bias-corrected moments, decoupled weight decay). Returns the clipping
/// scale that was applied (1 when no clipping). Throws kNonFinite on
/// non-finite gradients.
double adamw_step(MlpModel& model, AdamWState& state, LayerBuffers grads, double lr,
                  const TrainConfig& cfg);

/// Linear warmup from 0 to peak_lr, then cosine decay to lr_min over
/// cosine_t_max steps, constant lr_min afterwards.
double lr_at(long step, const TrainConfig& cfg);

class ExampleSource {
 public:
  virtual ~ExampleSource() = default;
  /// nullopt once the source is exhausted.
  virtual std::optional<TrainingExample> next() = 0;
};

/// Wraps a single ExampleStream; optionally stops after `limit` examples.
class StreamSource : public ExampleSource {
 public:
  explicit StreamSource(StreamConfig cfg, std::optional<std::uint64_t> limit = std::nullopt);
  std::optional<TrainingExample> next() override;
  std::uint64_t produced() const { return produced_; }

 private:
  ExampleStream stream_;
  std::optional<std::uint64_t> limit_;
  std::uint64_t produced_ = 0;
};

/// Yields each example of a fixed collection once, in order.
class VectorSource : public ExampleSource {
 public:
  explicit VectorSource(std::vector<TrainingExample> examples);
  std::optional<TrainingExample> next() override;

 private:
  std::vector<TrainingExample> examples_;
  std::size_t pos_ = 0;
};

/// Several generator threads, each owning ExampleStream(cfg, worker) and a
/// bounded queue. next() drains the queues round-robin, so the sequence is
/// a deterministic function of (cfg, workers).
class ParallelStreamSource : public ExampleSource {
 public:
  ParallelStreamSource(StreamConfig cfg, int workers, std::size_t queue_capacity = 1024);
  ~ParallelStreamSource() override;
  ParallelStreamSource(const ParallelStreamSource&) = delete;
  ParallelStreamSource& operator=(const ParallelStreamSource&) = delete;

  std::optional<TrainingExample> next() override;

 private:
  struct Lane;
  std::vector<std::unique_ptr<Lane>> lanes_;
  std::vector<std::jthread> threads_;
  std::size_t cursor_ = 0;
};

/// Fixed-capacity ring; once full, each push overwrites the oldest entry.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);
  void push(TrainingExample ex);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  /// Uniform with replacement.
  const TrainingExample& sample(Rng& rng) const;
  const TrainingExample& operator[](std::size_t i) const { return items_[i]; }

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;
  std::vector<TrainingExample> items_;
};

struct RegressionMetrics {
  double mse = 0.0;
  double mae = 0.0;
  double r2 = 0.0;
};

RegressionMetrics evaluate(const MlpModel& model, std::span<const TrainingExample> examples);
Eigen::VectorXd predict_all(const MlpModel& model, std::span<const TrainingExample> examples);

/// Spearman rank correlation with average ranks for ties.
double spearman_correlation(std::span<const double> a, std::span<const double> b);

struct EpochMetrics {
  int epoch = 0;
  double train_mse = 0.0;
  double val_mse = 0.0;
  double val_mae = 0.0;
  double val_r2 = 0.0;
  double lr = 0.0;
};

struct TrainResult {
  MlpModel model;  // best validation MSE, rounded to float32
  std::vector<EpochMetrics> log;
  /// Exponential moving average of the training loss after each step.
  std::vector<double> loss_ema;
  std::uint64_t examples_consumed = 0;
};

using EpochCallback = std::function<void(const EpochMetrics&)>;

/// Trains a fresh model for cfg.total_steps() optimizer steps. Each step
/// pulls cfg.fresh_per_step examples into the replay buffer, then
/// accumulates cfg.grad_accumulation minibatches sampled uniformly from it.
/// Validation runs after every epoch. Throws kStreamExhausted if the source
/// cannot supply a first minibatch.
TrainResult train(ExampleSource& source, std::span<const TrainingExample> validation,
                  int qubits, const TrainConfig& cfg, const EpochCallback& on_epoch = {});

std::string format_metrics_csv(std::span<const EpochMetrics> log);

/// Model file: "MDLM", u16 version, u8 qubits, u8 layer count, then per
/// layer u32 rows, u32 cols, float32 weights row-major, float32 biases;
/// trailing CRC32. Little-endian.
void save_model(const MlpModel& model, const std::filesystem::path& path);
MlpModel load_model(const std::filesystem::path& path);

/// Throws kDimensionMismatch unless the model can score residuals of a
/// target_qubits register (directly or after identity padding).
void check_model_compatible(const MlpModel& model, int target_qubits);

}  // namespace mdlsynth
