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
#include "mdlsynth/datagen.hpp"

#include <algorithm>
#include <cmath>

#include "mdlsynth/binary_io.hpp"
#include "mdlsynth/error.hpp"
#include "mdlsynth/peephole.hpp"

namespace mdlsynth {

namespace {

constexpr char kDatasetMagic[] = "MDLD";
constexpr std::uint16_t kDatasetVersion = 1;

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

Gate random_clifford_gate(int qubits, Rng& rng) {
  const int kinds = qubits >= 2 ? 3 : 2;
  switch (uniform_int(rng, 0, kinds - 1)) {
    case 0: return Gate::h(uniform_int(rng, 0, qubits - 1));
    case 1: return Gate::s(uniform_int(rng, 0, qubits - 1));
    default: {
      const int c = uniform_int(rng, 0, qubits - 1);
      int t = uniform_int(rng, 0, qubits - 2);
      if (t >= c) ++t;
      return Gate::cx(c, t);
    }
  }
}

}  // namespace

void SamplerConfig::validate() const {
  auto bad = [](const std::string& why) {
    throw Error(ErrorCode::kInvalidArgument, "sampler config: " + why);
  };
  if (qubits < 1 || qubits > kMaxQubits) bad("qubits outside [1, 5]");
  if (t_count.lo < 0 || t_count.lo > t_count.hi) bad("empty or negative T-count range");
  if (gate_count.lo < 0 || gate_count.lo > gate_count.hi) bad("empty gate-count range");
  if (gate_count.hi > 65535) bad("gate count exceeds label range");
  if (max_attempts < 1) bad("max_attempts must be positive");
}

Circuit sample_circuit(const SamplerConfig& cfg, Rng& rng) {
  cfg.validate();
  const int k = uniform_int(rng, cfg.t_count.lo, cfg.t_count.hi);
  return sample_circuit_with_t_count(cfg, k, rng);
}

Circuit sample_circuit_with_t_count(const SamplerConfig& cfg, int k, Rng& rng) {
  cfg.validate();
  const int min_len = std::max(cfg.gate_count.lo, k);
  if (k < 0 || min_len > cfg.gate_count.hi) {
    throw Error(ErrorCode::kBudgetExceeded,
                "infeasible sampler request: T-count " + std::to_string(k) +
                    " with gate counts in [" + std::to_string(cfg.gate_count.lo) +
                    ", " + std::to_string(cfg.gate_count.hi) + "]");
  }
  std::vector<Gate> gates;
  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    const int length = uniform_int(rng, min_len, cfg.gate_count.hi);
    gates.clear();
    for (int i = 0; i < length - k; ++i) gates.push_back(random_clifford_gate(cfg.qubits, rng));
    for (int i = 0; i < k; ++i) {
      const auto pos = uniform_int(rng, 0, static_cast<int>(gates.size()));
      gates.insert(gates.begin() + pos, Gate::t(uniform_int(rng, 0, cfg.qubits - 1)));
    }
    std::shuffle(gates.begin(), gates.end(), rng);
    Circuit opt = optimize(Circuit(cfg.qubits, gates));
    if (t_count(opt) == static_cast<std::size_t>(k) &&
        cfg.gate_count.contains(static_cast<int>(opt.size()))) {
      return opt;
    }
  }
  throw Error(ErrorCode::kBudgetExceeded,
              "rejection budget of " + std::to_string(cfg.max_attempts) +
                  " attempts exhausted for T-count " + std::to_string(k) +
                  " with gate counts in [" + std::to_string(cfg.gate_count.lo) + ", " +
                  std::to_string(cfg.gate_count.hi) + "]");
}

std::vector<std::size_t> curriculum_cuts(const Circuit& c) {
  std::vector<std::size_t> t_positions;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].kind == GateKind::T) t_positions.push_back(i);
  }
  const std::size_t k = t_positions.size();
  std::vector<std::size_t> cuts{0};
  if (k >= 5) cuts.push_back(t_positions[k / 2 - 1] + 1);
  if (k >= 10) cuts.push_back(t_positions[(3 * k) / 4 - 1] + 1);
  return cuts;
}

Unitary phase_normalize(const Unitary& r, double threshold) {
  const Matrix& m = r.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const Complex z = m(i, j);
      const double mod = std::abs(z);
      if (mod > threshold) {
        Unitary out = r.scaled(std::conj(z) / mod);
        // Pin the reference entry exactly onto the non-negative real axis.
        Matrix fixed = out.matrix();
        fixed(i, j) = Complex(mod, 0.0);
        return Unitary(r.qubits(), std::move(fixed));
      }
    }
  }
  throw Error(ErrorCode::kInvalidArgument,
              "phase_normalize: no entry exceeds threshold " + std::to_string(threshold));
}

std::size_t feature_width(int qubits) {
  return std::size_t{2} << (2 * qubits);
}

void flatten_features_into(const Unitary& u, std::span<double> out) {
  const std::size_t n = static_cast<std::size_t>(u.dim() * u.dim());
  if (out.size() != 2 * n) {
    throw Error(ErrorCode::kDimensionMismatch, "feature buffer has wrong width");
  }
  const Complex* data = u.matrix().data();  // row-major
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = data[i].real();
    out[n + i] = data[i].imag();
  }
}

std::vector<double> flatten_features(const Unitary& u) {
  std::vector<double> out(feature_width(u.qubits()));
  flatten_features_into(u, out);
  return out;
}

Unitary unflatten_features(std::span<const double> features, int qubits) {
  if (qubits < 1 || qubits > kMaxQubits || features.size() != feature_width(qubits)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature vector of length " + std::to_string(features.size()) +
                    " does not describe a " + std::to_string(qubits) + "-qubit unitary");
  }
  const Eigen::Index d = Eigen::Index{1} << qubits;
  const std::size_t n = static_cast<std::size_t>(d * d);
  Matrix m(d, d);
  Complex* data = m.data();
  for (std::size_t i = 0; i < n; ++i) data[i] = Complex(features[i], features[n + i]);
  return Unitary(qubits, std::move(m));
}

void residual_features_into(const Unitary& r, int model_qubits, std::span<double> out) {
  if (r.qubits() == model_qubits) {
    flatten_features_into(phase_normalize(r), out);
  } else {
    flatten_features_into(phase_normalize(kron_pad(r, model_qubits)), out);
  }
}

std::vector<TrainingExample> make_examples(const Circuit& c, ExampleOptions opts) {
  const std::vector<std::size_t> cuts =
      opts.curriculum ? curriculum_cuts(c) : std::vector<std::size_t>{0};
  const Unitary target = circuit_unitary(c);
  std::vector<TrainingExample> out;
  out.reserve(cuts.size());
  for (std::size_t t : cuts) {
    const Unitary r = residual(circuit_unitary(c.slice(0, t)), target);
    TrainingExample ex;
    ex.features = flatten_features(phase_normalize(r));
    const std::size_t label =
        opts.reoptimize_suffix ? optimize(c.slice(t, c.size())).size() : c.size() - t;
    ex.label = static_cast<std::uint16_t>(label);
    out.push_back(std::move(ex));
  }
  return out;
}

ExampleStream::ExampleStream(StreamConfig cfg, std::uint64_t worker)
    : cfg_(std::move(cfg)), rng_(derive_seed(cfg_.sampler.seed, "datagen", worker)) {
  cfg_.sampler.validate();
}

TrainingExample ExampleStream::next() {
  while (pending_.empty()) {
    const Circuit c = sample_circuit(cfg_.sampler, rng_);
    ++circuits_;
    for (auto& ex : make_examples(c, cfg_.examples)) pending_.push_back(std::move(ex));
  }
  TrainingExample ex = std::move(pending_.front());
  pending_.pop_front();
  return ex;
}

void write_dataset(const Dataset& data, const std::filesystem::path& path) {
  if (data.qubits < 1 || data.qubits > kMaxQubits) {
    throw Error(ErrorCode::kInvalidArgument, "dataset qubit count outside [1, 5]");
  }
  const std::size_t width = feature_width(data.qubits);
  binary::Writer w;
  w.bytes({kDatasetMagic, 4});
  w.u16(kDatasetVersion);
  w.u8(static_cast<std::uint8_t>(data.qubits));
  w.u64(data.examples.size());
  for (const auto& ex : data.examples) {
    if (ex.features.size() != width) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "example feature length " + std::to_string(ex.features.size()) +
                      " does not match the " + std::to_string(data.qubits) +
                      "-qubit header (" + std::to_string(width) + ")");
    }
    for (double v : ex.features) w.f32(static_cast<float>(v));
    w.u16(ex.label);
  }
  w.seal();
  w.save(path);
}

Dataset read_dataset(const std::filesystem::path& path) {
  auto r = binary::Reader::load(path, "dataset '" + path.string() + "'");
  if (r.bytes(4) != std::string_view(kDatasetMagic, 4)) {
    throw Error(ErrorCode::kParse, "dataset '" + path.string() + "': bad magic");
  }
  if (const auto v = r.u16(); v != kDatasetVersion) {
    throw Error(ErrorCode::kParse, "dataset '" + path.string() +
                                       "': unsupported version " + std::to_string(v));
  }
  Dataset data;
  data.qubits = r.u8();
  if (data.qubits < 1 || data.qubits > kMaxQubits) {
    throw Error(ErrorCode::kParse, "dataset '" + path.string() + "': bad qubit count");
  }
  const std::uint64_t count = r.u64();
  const std::size_t width = feature_width(data.qubits);
  const std::size_t record = width * 4 + 2;
  if (count > r.remaining() / record || r.remaining() != count * record) {
    throw Error(ErrorCode::kParse,
                "dataset '" + path.string() + "': payload size does not match " +
                    std::to_string(count) + " examples of " +
                    std::to_string(data.qubits) + "-qubit features");
  }
  data.examples.resize(count);
  for (auto& ex : data.examples) {
    ex.features.resize(width);
    for (auto& v : ex.features) v = r.f32();
    ex.label = r.u16();
  }
  r.finish();
  return data;
}

}  // namespace mdlsynth
