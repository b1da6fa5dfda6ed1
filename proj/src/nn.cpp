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
#include "mdlsynth/nn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "mdlsynth/binary_io.hpp"
#include "mdlsynth/error.hpp"
#include "mdlsynth/log.hpp"

namespace mdlsynth {

namespace {

constexpr char kModelMagic[] = "MDLM";
constexpr std::uint16_t kModelVersion = 1;

void check_chain(int qubits, const std::vector<DenseLayer>& layers) {
  auto bad = [](const std::string& why) {
    throw Error(ErrorCode::kDimensionMismatch, "model layers: " + why);
  };
  if (qubits < 1 || qubits > kMaxQubits) bad("qubit count outside [1, 5]");
  if (layers.empty()) bad("no layers");
  Eigen::Index expected = static_cast<Eigen::Index>(feature_width(qubits));
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    if (layer.weights.cols() != expected) {
      bad("layer " + std::to_string(l) + " expects " + std::to_string(layer.weights.cols()) +
          " inputs, previous width is " + std::to_string(expected));
    }
    if (layer.bias.size() != layer.weights.rows()) {
      bad("layer " + std::to_string(l) + " bias length mismatch");
    }
    expected = layer.weights.rows();
  }
  if (expected != 1) bad("output width must be 1");
}

}  // namespace

double softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

double logistic(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

MlpModel::MlpModel(int qubits, std::span<const int> hidden, Rng& rng) : qubits_(qubits) {
  if (qubits < 1 || qubits > kMaxQubits) {
    throw Error(ErrorCode::kInvalidArgument, "model qubit count outside [1, 5]");
  }
  std::vector<int> dims{static_cast<int>(feature_width(qubits))};
  for (int h : hidden) {
    if (h < 1) throw Error(ErrorCode::kInvalidArgument, "hidden widths must be positive");
    dims.push_back(h);
  }
  dims.push_back(1);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    DenseLayer layer;
    const double scale = std::sqrt(2.0 / dims[l]);
    layer.weights = Eigen::MatrixXd(dims[l + 1], dims[l]);
    for (Eigen::Index i = 0; i < layer.weights.size(); ++i) {
      layer.weights.data()[i] = normal(rng) * scale;
    }
    layer.bias = Eigen::VectorXd::Zero(dims[l + 1]);
    layers_.push_back(std::move(layer));
  }
}

MlpModel::MlpModel(int qubits, std::vector<DenseLayer> layers)
    : qubits_(qubits), layers_(std::move(layers)) {
  check_chain(qubits_, layers_);
}

std::vector<int> MlpModel::layer_dims() const {
  std::vector<int> dims{input_dim()};
  for (const auto& l : layers_) dims.push_back(static_cast<int>(l.weights.rows()));
  return dims;
}

std::size_t MlpModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += static_cast<std::size_t>(l.weights.size() + l.bias.size());
  return n;
}

Eigen::VectorXd MlpModel::forward(const Eigen::MatrixXd& batch) const {
  if (batch.cols() != input_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "forward: batch width " + std::to_string(batch.cols()) +
                    " != model input " + std::to_string(input_dim()));
  }
  Eigen::MatrixXd a = batch;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Eigen::MatrixXd z = a * layers_[l].weights.transpose();
    z.rowwise() += layers_[l].bias.transpose();
    if (l + 1 < layers_.size()) {
      a = z.cwiseMax(0.0);
    } else {
      a = z.unaryExpr([](double v) { return softplus(v); });
    }
  }
  return a.col(0);
}

double MlpModel::predict(std::span<const double> features) const {
  Eigen::MatrixXd row(1, static_cast<Eigen::Index>(features.size()));
  for (std::size_t i = 0; i < features.size(); ++i) row(0, static_cast<Eigen::Index>(i)) = features[i];
  return forward(row)(0);
}

void MlpModel::round_to_float32() {
  auto round = [](double v) { return static_cast<double>(static_cast<float>(v)); };
  for (auto& l : layers_) {
    l.weights = l.weights.unaryExpr(round);
    l.bias = l.bias.unaryExpr(round);
  }
}

LayerBuffers zeros_like(const MlpModel& model) {
  LayerBuffers out;
  for (const auto& l : model.layers()) {
    out.push_back({Eigen::MatrixXd::Zero(l.weights.rows(), l.weights.cols()),
                   Eigen::VectorXd::Zero(l.bias.size())});
  }
  return out;
}

double global_norm(const LayerBuffers& buffers) {
  double sq = 0.0;
  for (const auto& b : buffers) sq += b.weights.squaredNorm() + b.bias.squaredNorm();
  return std::sqrt(sq);
}

LossAndGrad loss_and_grad(const MlpModel& model, const Eigen::MatrixXd& batch,
                          const Eigen::VectorXd& labels) {
  if (batch.rows() != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "loss_and_grad: batch/label count mismatch");
  }
  if (batch.cols() != model.input_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "loss_and_grad: batch width mismatch");
  }
  if (batch.rows() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "loss_and_grad: empty batch");
  }
  const auto& layers = model.layers();
  const std::size_t depth = layers.size();
  const double rows = static_cast<double>(batch.rows());

  // Forward pass, keeping pre-activations.
  std::vector<Eigen::MatrixXd> inputs(depth);
  std::vector<Eigen::MatrixXd> pre(depth);
  Eigen::MatrixXd a = batch;
  for (std::size_t l = 0; l < depth; ++l) {
    inputs[l] = a;
    pre[l] = a * layers[l].weights.transpose();
    pre[l].rowwise() += layers[l].bias.transpose();
    if (l + 1 < depth) a = pre[l].cwiseMax(0.0);
  }
  const Eigen::VectorXd z = pre.back().col(0);
  const Eigen::VectorXd pred = z.unaryExpr([](double v) { return softplus(v); });
  const Eigen::VectorXd err = pred - labels;

  LossAndGrad out;
  out.loss = err.squaredNorm() / rows;
  if (!std::isfinite(out.loss)) {
    throw Error(ErrorCode::kNonFinite, "loss_and_grad: non-finite loss");
  }

  // delta = dL/dz for the current layer, one row per example.
  Eigen::MatrixXd delta =
      (2.0 / rows) * err.cwiseProduct(z.unaryExpr([](double v) { return logistic(v); }));
  out.grads.resize(depth);
  for (std::size_t l = depth; l-- > 0;) {
    out.grads[l].weights = delta.transpose() * inputs[l];
    out.grads[l].bias = delta.colwise().sum().transpose();
    if (l > 0) {
      Eigen::MatrixXd back = delta * layers[l].weights;
      delta = back.cwiseProduct(
          pre[l - 1].unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; }));
    }
  }
  return out;
}

void TrainConfig::validate() const {
  auto bad = [](const std::string& why) {
    throw Error(ErrorCode::kInvalidArgument, "train config: " + why);
  };
  if (hidden.empty()) bad("at least one hidden layer is required");
  for (int h : hidden) {
    if (h < 1) bad("hidden widths must be positive");
  }
  if (!(beta1 >= 0 && beta1 < 1) || !(beta2 >= 0 && beta2 < 1)) bad("betas must lie in [0, 1)");
  if (!(eps > 0)) bad("eps must be positive");
  if (weight_decay < 0) bad("weight_decay must be non-negative");
  if (grad_clip < 0) bad("grad_clip must be non-negative (0 disables)");
  if (dropout != 0.0) bad("dropout is not supported (must be 0)");
  if (batch_size < 1 || grad_accumulation < 1) bad("batch size and accumulation must be positive");
  if (warmup_steps < 0 || cosine_t_max < 1) bad("schedule lengths must be positive");
  if (!(peak_lr > 0) || lr_min < 0 || lr_min > peak_lr) bad("need 0 <= lr_min <= peak_lr, peak_lr > 0");
  if (epochs < 1 || steps_per_epoch < 1) bad("epochs and steps_per_epoch must be positive");
  if (warmup_steps > total_steps()) bad("warmup exceeds the total step count");
  if (replay_buffer < 1 || validation_size < 0 || fresh_per_step < 0) bad("buffer sizes must be positive");
}

AdamWState::AdamWState(const MlpModel& model) : m(zeros_like(model)), v(zeros_like(model)) {}

double gradient_check_error(const MlpModel& model, const Eigen::MatrixXd& batch,
                            const Eigen::VectorXd& labels, double h) {
  const LossAndGrad lg = loss_and_grad(model, batch, labels);
  MlpModel probe = model;
  double worst = 0.0;
  auto check = [&](double& param, double analytic) {
    const double saved = param;
    param = saved + h;
    const double up = loss_and_grad(probe, batch, labels).loss;
    param = saved - h;
    const double down = loss_and_grad(probe, batch, labels).loss;
    param = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
    worst = std::max(worst, std::abs(analytic - numeric) / denom);
  };
  for (std::size_t l = 0; l < probe.layers().size(); ++l) {
    DenseLayer& layer = probe.layers()[l];
    for (Eigen::Index i = 0; i < layer.weights.size(); ++i) {
      check(layer.weights.data()[i], lg.grads[l].weights.data()[i]);
    }
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) {
      check(layer.bias.data()[i], lg.grads[l].bias.data()[i]);
    }
  }
  return worst;
}

double adamw_step(MlpModel& model, AdamWState& state, LayerBuffers grads, double lr,
                  const TrainConfig& cfg) {
  auto& layers = model.layers();
  if (grads.size() != layers.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "adamw_step: gradient layer count mismatch");
  }
  const double norm = global_norm(grads);
  if (!std::isfinite(norm)) throw Error(ErrorCode::kNonFinite, "adamw_step: non-finite gradient");
  double scale = 1.0;
  if (cfg.grad_clip > 0 && norm > cfg.grad_clip) scale = cfg.grad_clip / norm;

  ++state.step;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  auto update = [&](auto& param, auto& g, auto& m, auto& v) {
    g *= scale;
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
    param *= (1.0 - lr * cfg.weight_decay);
    param.array() -= lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + cfg.eps);
  };
  for (std::size_t l = 0; l < layers.size(); ++l) {
    update(layers[l].weights, grads[l].weights, state.m[l].weights, state.v[l].weights);
    update(layers[l].bias, grads[l].bias, state.m[l].bias, state.v[l].bias);
  }
  return scale;
}

double lr_at(long step, const TrainConfig& cfg) {
  if (step < 0) step = 0;
  if (step < cfg.warmup_steps) {
    return cfg.peak_lr * static_cast<double>(step) / static_cast<double>(cfg.warmup_steps);
  }
  const long s = step - cfg.warmup_steps;
  if (s >= cfg.cosine_t_max) return cfg.lr_min;
  const double c = std::cos(std::numbers::pi * static_cast<double>(s) /
                            static_cast<double>(cfg.cosine_t_max));
  return cfg.lr_min + (cfg.peak_lr - cfg.lr_min) * (1.0 + c) / 2.0;
}

StreamSource::StreamSource(StreamConfig cfg, std::optional<std::uint64_t> limit)
    : stream_(std::move(cfg)), limit_(limit) {}

std::optional<TrainingExample> StreamSource::next() {
  if (limit_ && produced_ >= *limit_) return std::nullopt;
  ++produced_;
  return stream_.next();
}

VectorSource::VectorSource(std::vector<TrainingExample> examples)
    : examples_(std::move(examples)) {}

std::optional<TrainingExample> VectorSource::next() {
  if (pos_ >= examples_.size()) return std::nullopt;
  return examples_[pos_++];
}

struct ParallelStreamSource::Lane {
  std::mutex mu;
  std::condition_variable not_empty;
  std::condition_variable not_full;
  std::deque<TrainingExample> queue;
  std::exception_ptr failure;
  std::size_t capacity = 0;
};

ParallelStreamSource::ParallelStreamSource(StreamConfig cfg, int workers,
                                           std::size_t queue_capacity) {
  if (workers < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one worker");
  cfg.sampler.validate();
  for (int w = 0; w < workers; ++w) {
    lanes_.push_back(std::make_unique<Lane>());
    lanes_.back()->capacity = std::max<std::size_t>(queue_capacity, 1);
  }
  for (int w = 0; w < workers; ++w) {
    Lane* lane = lanes_[static_cast<std::size_t>(w)].get();
    threads_.emplace_back([lane, cfg, w](std::stop_token stop) {
      ExampleStream stream(cfg, static_cast<std::uint64_t>(w));
      while (!stop.stop_requested()) {
        TrainingExample ex;
        try {
          ex = stream.next();
        } catch (...) {
          std::lock_guard lock(lane->mu);
          lane->failure = std::current_exception();
          lane->not_empty.notify_all();
          return;
        }
        std::unique_lock lock(lane->mu);
        lane->not_full.wait(lock, [&] {
          return stop.stop_requested() || lane->queue.size() < lane->capacity;
        });
        if (stop.stop_requested()) return;
        lane->queue.push_back(std::move(ex));
        lane->not_empty.notify_one();
      }
    });
  }
}

ParallelStreamSource::~ParallelStreamSource() {
  for (auto& t : threads_) t.request_stop();
  for (auto& lane : lanes_) {
    std::lock_guard lock(lane->mu);
    lane->not_full.notify_all();
  }
  threads_.clear();  // joins
}

std::optional<TrainingExample> ParallelStreamSource::next() {
  Lane& lane = *lanes_[cursor_];
  cursor_ = (cursor_ + 1) % lanes_.size();
  std::unique_lock lock(lane.mu);
  lane.not_empty.wait(lock, [&] { return !lane.queue.empty() || lane.failure; });
  if (lane.queue.empty()) std::rethrow_exception(lane.failure);
  TrainingExample ex = std::move(lane.queue.front());
  lane.queue.pop_front();
  lane.not_full.notify_one();
  return ex;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw Error(ErrorCode::kInvalidArgument, "replay buffer capacity must be positive");
  items_.reserve(capacity);
}

void ReplayBuffer::push(TrainingExample ex) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(ex));
  } else {
    items_[head_] = std::move(ex);
    head_ = (head_ + 1) % capacity_;
  }
}

const TrainingExample& ReplayBuffer::sample(Rng& rng) const {
  std::uniform_int_distribution<std::size_t> pick(0, items_.size() - 1);
  return items_[pick(rng)];
}

namespace {

Eigen::MatrixXd to_batch(std::span<const TrainingExample* const> rows, Eigen::Index width) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), width);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<Eigen::Index>(rows[r]->features.size()) != width) {
      throw Error(ErrorCode::kDimensionMismatch, "example feature width does not match the model");
    }
    for (Eigen::Index c = 0; c < width; ++c) {
      x(static_cast<Eigen::Index>(r), c) = rows[r]->features[static_cast<std::size_t>(c)];
    }
  }
  return x;
}

}  // namespace

Eigen::VectorXd predict_all(const MlpModel& model, std::span<const TrainingExample> examples) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(examples.size()));
  constexpr std::size_t kChunk = 1024;
  for (std::size_t start = 0; start < examples.size(); start += kChunk) {
    const std::size_t end = std::min(examples.size(), start + kChunk);
    std::vector<const TrainingExample*> rows;
    for (std::size_t i = start; i < end; ++i) rows.push_back(&examples[i]);
    out.segment(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(end - start)) =
        model.forward(to_batch(rows, model.input_dim()));
  }
  return out;
}

RegressionMetrics evaluate(const MlpModel& model, std::span<const TrainingExample> examples) {
  RegressionMetrics m;
  if (examples.empty()) return m;
  const Eigen::VectorXd pred = predict_all(model, examples);
  const double n = static_cast<double>(examples.size());
  double mean = 0.0;
  for (const auto& ex : examples) mean += ex.label;
  mean /= n;
  double ss_res = 0.0, ss_tot = 0.0, abs_sum = 0.0;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const double y = examples[i].label;
    const double e = pred(static_cast<Eigen::Index>(i)) - y;
    ss_res += e * e;
    abs_sum += std::abs(e);
    ss_tot += (y - mean) * (y - mean);
  }
  m.mse = ss_res / n;
  m.mae = abs_sum / n;
  m.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 0.0;
  return m;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "spearman_correlation: need two equal-length samples");
  }
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double cov = 0, va = 0, vb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va == 0 || vb == 0) return 0.0;
  return cov / std::sqrt(va * vb);
}

TrainResult train(ExampleSource& source, std::span<const TrainingExample> validation,
                  int qubits, const TrainConfig& cfg, const EpochCallback& on_epoch) {
  cfg.validate();
  Rng init_rng = make_rng(cfg.seed, "init");
  MlpModel model(qubits, cfg.hidden, init_rng);
  const std::size_t width = feature_width(qubits);
  for (const auto& ex : validation) {
    if (ex.features.size() != width) {
      throw Error(ErrorCode::kDimensionMismatch, "validation example width does not match the model");
    }
  }
  Rng shuffle_rng = make_rng(cfg.seed, "training-shuffle");

  TrainResult result{model, {}, {}, 0};
  ReplayBuffer buffer(static_cast<std::size_t>(cfg.replay_buffer));
  bool exhausted = false;
  auto pull = [&](std::size_t n) {
    for (std::size_t i = 0; i < n && !exhausted; ++i) {
      auto ex = source.next();
      if (!ex) {
        exhausted = true;
        break;
      }
      if (ex->features.size() != width) {
        throw Error(ErrorCode::kDimensionMismatch, "training example width does not match the model");
      }
      buffer.push(std::move(*ex));
      ++result.examples_consumed;
    }
  };
  pull(buffer.capacity());
  if (buffer.size() == 0) {
    throw Error(ErrorCode::kStreamExhausted, "train: example source yielded no examples");
  }

  AdamWState opt(model);
  double best_val = std::numeric_limits<double>::infinity();
  double ema = 0.0;
  double epoch_loss = 0.0;
  std::vector<const TrainingExample*> rows(static_cast<std::size_t>(cfg.batch_size));
  Eigen::VectorXd labels(cfg.batch_size);
  const long total = cfg.total_steps();
  for (long step = 0; step < total; ++step) {
    pull(static_cast<std::size_t>(cfg.fresh_per_step));
    LayerBuffers grads = zeros_like(model);
    double loss = 0.0;
    for (int micro = 0; micro < cfg.grad_accumulation; ++micro) {
      for (int r = 0; r < cfg.batch_size; ++r) {
        rows[static_cast<std::size_t>(r)] = &buffer.sample(shuffle_rng);
        labels(r) = rows[static_cast<std::size_t>(r)]->label;
      }
      LossAndGrad lg = loss_and_grad(model, to_batch(rows, model.input_dim()), labels);
      loss += lg.loss / cfg.grad_accumulation;
      for (std::size_t l = 0; l < grads.size(); ++l) {
        grads[l].weights += lg.grads[l].weights / cfg.grad_accumulation;
        grads[l].bias += lg.grads[l].bias / cfg.grad_accumulation;
      }
    }
    const double lr = lr_at(step + 1, cfg);
    adamw_step(model, opt, std::move(grads), lr, cfg);
    ema = step == 0 ? loss : 0.98 * ema + 0.02 * loss;
    result.loss_ema.push_back(ema);
    epoch_loss += loss;

    if ((step + 1) % cfg.steps_per_epoch == 0) {
      EpochMetrics em;
      em.epoch = static_cast<int>((step + 1) / cfg.steps_per_epoch);
      em.train_mse = epoch_loss / cfg.steps_per_epoch;
      em.lr = lr;
      epoch_loss = 0.0;
      if (!validation.empty()) {
        const auto vm = evaluate(model, validation);
        em.val_mse = vm.mse;
        em.val_mae = vm.mae;
        em.val_r2 = vm.r2;
      } else {
        em.val_mse = em.train_mse;
      }
      if (em.val_mse < best_val) {
        best_val = em.val_mse;
        result.model = model;
      }
      result.log.push_back(em);
      std::ostringstream msg;
      msg << "epoch=" << em.epoch << " train_mse=" << em.train_mse << " val_mse=" << em.val_mse
          << " val_mae=" << em.val_mae << " val_r2=" << em.val_r2 << " lr=" << em.lr;
      log::info(msg.str());
      if (on_epoch) on_epoch(em);
    }
  }
  result.model.round_to_float32();
  return result;
}

std::string format_metrics_csv(std::span<const EpochMetrics> log) {
  std::ostringstream out;
  out.precision(10);
  out << "epoch,train_mse,val_mse,val_mae,val_r2,lr\n";
  for (const auto& m : log) {
    out << m.epoch << ',' << m.train_mse << ',' << m.val_mse << ',' << m.val_mae << ','
        << m.val_r2 << ',' << m.lr << '\n';
  }
  return out.str();
}

void save_model(const MlpModel& model, const std::filesystem::path& path) {
  binary::Writer w;
  w.bytes({kModelMagic, 4});
  w.u16(kModelVersion);
  w.u8(static_cast<std::uint8_t>(model.qubits()));
  w.u8(static_cast<std::uint8_t>(model.layers().size()));
  for (const auto& l : model.layers()) {
    w.u32(static_cast<std::uint32_t>(l.weights.rows()));
    w.u32(static_cast<std::uint32_t>(l.weights.cols()));
    for (Eigen::Index r = 0; r < l.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weights.cols(); ++c) w.f32(static_cast<float>(l.weights(r, c)));
    }
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) w.f32(static_cast<float>(l.bias(r)));
  }
  w.seal();
  w.save(path);
}

MlpModel load_model(const std::filesystem::path& path) {
  const std::string what = "model '" + path.string() + "'";
  auto r = binary::Reader::load(path, what);
  if (r.bytes(4) != std::string_view(kModelMagic, 4)) {
    throw Error(ErrorCode::kParse, what + ": bad magic");
  }
  if (const auto v = r.u16(); v != kModelVersion) {
    throw Error(ErrorCode::kParse, what + ": unsupported version " + std::to_string(v));
  }
  const int qubits = r.u8();
  const int count = r.u8();
  std::vector<DenseLayer> layers;
  for (int l = 0; l < count; ++l) {
    const std::uint32_t rows = r.u32();
    const std::uint32_t cols = r.u32();
    if (static_cast<std::uint64_t>(rows) * cols * 4 > r.remaining()) {
      throw Error(ErrorCode::kParse, what + ": layer " + std::to_string(l) + " is truncated");
    }
    DenseLayer layer{Eigen::MatrixXd(rows, cols), Eigen::VectorXd(rows)};
    for (Eigen::Index i = 0; i < layer.weights.rows(); ++i) {
      for (Eigen::Index j = 0; j < layer.weights.cols(); ++j) layer.weights(i, j) = r.f32();
    }
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias(i) = r.f32();
    layers.push_back(std::move(layer));
  }
  r.finish();
  return MlpModel(qubits, std::move(layers));
}

void check_model_compatible(const MlpModel& model, int target_qubits) {
  if (target_qubits < 1 || target_qubits > model.qubits()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "a " + std::to_string(model.qubits()) + "-qubit model (input width " +
                    std::to_string(model.input_dim()) + ") cannot score " +
                    std::to_string(target_qubits) + "-qubit residuals (width " +
                    std::to_string(feature_width(std::clamp(target_qubits, 1, kMaxQubits))) +
                    ", padded width " + std::to_string(feature_width(model.qubits())) + ")");
  }
}

}  // namespace mdlsynth
