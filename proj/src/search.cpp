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

#include "mdlsynth/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>
#include <unordered_set>

#include "mdlsynth/datagen.hpp"
#include "mdlsynth/error.hpp"
#include "mdlsynth/log.hpp"
#include "mdlsynth/oracle.hpp"
#include "mdlsynth/peephole.hpp"

namespace mdlsynth {

void SearchConfig::validate() const {
  auto bad = [](const std::string& m) { throw Error(ErrorCode::kInvalidArgument, m); };
  if (beam_width < 1) bad("beam width must be >= 1");
  if (max_steps < 1) bad("max steps must be >= 1");
  if (!(temperature > 0.0) || !std::isfinite(temperature)) bad("temperature must be > 0");
  if (!(threshold > 0.0 && threshold <= 1.0)) bad("threshold must lie in (0, 1]");
  if (trials < 1) bad("trials must be >= 1");
  if (workers < 1) bad("workers must be >= 1");
  if (prune_wave < 0) bad("prune wave must be >= 0");
}

std::optional<std::size_t> SynthesisResult::first_success() const {
  for (const TrialRecord& t : trials) {
    if (t.success) return t.index;
  }
  return std::nullopt;
}

namespace {

std::vector<BeamCandidate> expand_impl(std::span<const BeamCandidate> beam,
                                       std::span<const Gate> actions, const MlpModel& model,
                                       bool dedup) {
  std::vector<BeamCandidate> out;
  if (beam.empty()) return out;
  const int n = beam.front().residual.qubits();
  check_model_compatible(model, n);
  out.reserve(beam.size() * actions.size());
  std::unordered_set<CanonicalKey, CanonicalKeyHash> seen;
  for (const BeamCandidate& parent : beam) {
    for (const Gate& g : actions) {
      Unitary r = parent.residual.right_multiplied(g, /*adjoint=*/true);
      // All children share one length, so the first occurrence is kept.
      if (dedup && !seen.insert(canonical_key(r)).second) continue;
      Circuit c = parent.circuit;
      c.append(g);
      out.push_back({std::move(r), std::move(c), 0.0});
    }
  }
  if (out.empty()) return out;

  const std::size_t width = feature_width(model.qubits());
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows(
      static_cast<Eigen::Index>(out.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < out.size(); ++i) {
    residual_features_into(out[i].residual, model.qubits(),
                           std::span<double>(rows.row(static_cast<Eigen::Index>(i)).data(), width));
  }
  const Eigen::VectorXd mdl = model.forward(rows);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].score = -mdl(static_cast<Eigen::Index>(i));
  return out;
}

bool better_solution(const TrialOutcome& a, const TrialOutcome& b) {
  if (a.circuit->size() != b.circuit->size()) return a.circuit->size() < b.circuit->size();
  if (a.fidelity != b.fidelity) return a.fidelity > b.fidelity;
  return *a.circuit < *b.circuit;
}

}  // namespace

std::vector<BeamCandidate> expand(std::span<const BeamCandidate> beam,
                                  std::span<const Gate> actions, const MlpModel& model) {
  return expand_impl(beam, actions, model, /*dedup=*/false);
}

std::vector<BeamCandidate> gumbel_top_b(std::vector<BeamCandidate> candidates, int beam_width,
                                        double temperature, Rng& rng) {
  if (!(temperature > 0.0)) throw Error(ErrorCode::kInvalidArgument, "temperature must be > 0");
  const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(std::max(beam_width, 0)),
                                                 candidates.size());
  std::vector<double> key(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double g = -std::log(-std::log(uniform_open01(rng)));
    key[i] = candidates[i].score / temperature + g;
  }
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return key[a] != key[b] ? key[a] > key[b] : a < b;
                    });
  std::vector<BeamCandidate> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) out.push_back(std::move(candidates[order[i]]));
  return out;
}

TrialOutcome run_trial(const Unitary& target, const MlpModel& model, const SearchConfig& cfg,
                       Rng& rng) {
  check_model_compatible(model, target.qubits());
  const std::vector<Gate> actions = action_set(target.qubits());
  std::vector<BeamCandidate> beam{{target, Circuit(target.qubits()), 0.0}};
  TrialOutcome best;
  for (int t = 0;; ++t) {
    best.steps = t;
    for (const BeamCandidate& b : beam) {
      if (!is_converged(b.residual, cfg.threshold)) continue;
      TrialOutcome sol{b.circuit, fidelity_to_identity(b.residual), t};
      if (!best.circuit || better_solution(sol, best)) best = std::move(sol);
    }
    if (best.circuit || t >= cfg.max_steps) return best;
    std::vector<BeamCandidate> cand = expand_impl(beam, actions, model, /*dedup=*/true);
    if (cand.empty()) return best;
    beam = gumbel_top_b(std::move(cand), cfg.beam_width, cfg.temperature, rng);
  }
}

Unitary permute_target(const Unitary& target, std::span<const int> perm) {
  const int n = target.qubits();
  std::vector<int> check(perm.begin(), perm.end());
  std::sort(check.begin(), check.end());
  std::vector<int> iota(static_cast<std::size_t>(n));
  std::iota(iota.begin(), iota.end(), 0);
  if (check != iota) {
    throw Error(ErrorCode::kInvalidArgument,
                "permutation is not a permutation of [0, " + std::to_string(n) + ")");
  }
  const Eigen::Index d = target.dim();
  std::vector<Eigen::Index> map(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) {
    Eigen::Index j = 0;
    for (int q = 0; q < n; ++q) {
      if ((i >> (n - 1 - q)) & 1) j |= Eigen::Index{1} << (n - 1 - perm[static_cast<std::size_t>(q)]);
    }
    map[static_cast<std::size_t>(i)] = j;
  }
  Matrix m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      m(map[static_cast<std::size_t>(r)], map[static_cast<std::size_t>(c)]) = target(r, c);
    }
  }
  return Unitary(n, std::move(m));
}

Circuit unpermute_circuit(const Circuit& c, std::span<const int> perm) {
  if (perm.size() != static_cast<std::size_t>(c.qubits())) {
    throw Error(ErrorCode::kInvalidArgument, "permutation size does not match the register");
  }
  std::vector<int> inv(perm.size(), -1);
  for (std::size_t q = 0; q < perm.size(); ++q) {
    const int p = perm[q];
    if (p < 0 || p >= c.qubits() || inv[static_cast<std::size_t>(p)] != -1) {
      throw Error(ErrorCode::kInvalidArgument, "invalid permutation");
    }
    inv[static_cast<std::size_t>(p)] = static_cast<int>(q);
  }
  std::vector<Gate> gates;
  gates.reserve(c.size());
  for (Gate g : c.gates()) {
    g.q0 = static_cast<std::uint8_t>(inv[g.q0]);
    if (g.is_two_qubit()) g.q1 = static_cast<std::uint8_t>(inv[g.q1]);
    gates.push_back(g);
  }
  return Circuit(c.qubits(), std::move(gates));
}

Circuit adjoint_circuit(const Circuit& c) {
  Circuit out(c.qubits());
  for (auto it = c.gates().rbegin(); it != c.gates().rend(); ++it) {
    const Gate g = *it;
    switch (g.kind) {
      case GateKind::H:
      case GateKind::CX:
        out.append(g);
        break;
      case GateKind::S:
        for (int i = 0; i < 3; ++i) out.append(Gate::s(g.q0));
        break;
      case GateKind::T:
        for (int i = 0; i < 3; ++i) out.append(Gate::s(g.q0));
        out.append(Gate::t(g.q0));
        break;
    }
  }
  return out;
}

std::vector<TrialVariant> trial_variants(int qubits, bool permutations, bool inverse) {
  std::vector<int> perm(static_cast<std::size_t>(qubits));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<TrialVariant> out;
  do {
    out.push_back({perm, false});
    if (inverse) out.push_back({perm, true});
  } while (permutations && std::next_permutation(perm.begin(), perm.end()));
  return out;
}

SynthesisResult synthesize(const Unitary& target, const MlpModel& model,
                           const SearchConfig& cfg) {
  cfg.validate();
  check_model_compatible(model, target.qubits());
  const auto start = std::chrono::steady_clock::now();

  const std::vector<TrialVariant> variants =
      trial_variants(target.qubits(), cfg.permutation_trials, cfg.inverse_trials);
  std::vector<Unitary> variant_targets;
  for (const TrialVariant& v : variants) {
    Unitary u = permute_target(target, v.permutation);
    variant_targets.push_back(v.inverse ? u.adjoint() : u);
  }

  const auto trials = static_cast<std::size_t>(cfg.trials);
  SynthesisResult res;
  res.trials.resize(trials);
  std::vector<std::optional<Circuit>> circuits(trials);

  auto run_one = [&](std::size_t i, int cap) {
    const std::size_t vi = i % variants.size();
    SearchConfig local = cfg;
    local.max_steps = cap;
    Rng rng = make_rng(cfg.seed, "gumbel", i);
    const TrialOutcome out = run_trial(variant_targets[vi], model, local, rng);
    TrialRecord& rec = res.trials[i];
    rec.index = i;
    rec.variant = variants[vi];
    rec.steps = out.steps;
    rec.step_cap = cap;
    if (!out.circuit) return;
    rec.raw_gates = out.circuit->size();
    Circuit mapped = variants[vi].inverse ? adjoint_circuit(*out.circuit) : *out.circuit;
    mapped = optimize(unpermute_circuit(mapped, variants[vi].permutation));
    // Verify against the original target, independent of the search loop.
    rec.fidelity = avg_fidelity(circuit_unitary(mapped), target);
    rec.gates = mapped.size();
    rec.success = rec.fidelity >= cfg.threshold;
    if (rec.success) circuits[i] = std::move(mapped);
  };

  const std::size_t wave =
      cfg.prune_wave > 0 ? static_cast<std::size_t>(cfg.prune_wave) : trials;
  for (std::size_t begin = 0; begin < trials; begin += wave) {
    const std::size_t end = std::min(trials, begin + wave);
    int cap = cfg.max_steps;
    if (cfg.prune_wave > 0 && res.best_trial) {
      cap = std::min<int>(cap, static_cast<int>(res.trials[*res.best_trial].gates));
    }
    std::atomic<std::size_t> next{begin};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
      for (std::size_t i = next++; i < end; i = next++) {
        try {
          run_one(i, cap);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
          next = end;
        }
      }
    };
    const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), end - begin);
    if (nthreads <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < nthreads; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    for (std::size_t i = begin; i < end; ++i) {
      const TrialRecord& rec = res.trials[i];
      res.steps_used += static_cast<std::size_t>(rec.steps);
      if (!rec.success) continue;
      if (!res.best_trial) {
        res.best_trial = i;
        continue;
      }
      const TrialRecord& cur = res.trials[*res.best_trial];
      if (rec.gates < cur.gates || (rec.gates == cur.gates && rec.fidelity > cur.fidelity)) {
        res.best_trial = i;
      }
    }
  }

  res.trials_used = trials;
  if (res.best_trial) {
    res.circuit = circuits[*res.best_trial];
    res.achieved_fidelity = res.trials[*res.best_trial].fidelity;
  }
  res.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  log::debug("synthesize: " + std::to_string(trials) + " trials, " +
             (res.success() ? "best " + std::to_string(res.circuit->size()) + " gates"
                            : std::string("no solution")));
  return res;
}

}  // namespace mdlsynth
