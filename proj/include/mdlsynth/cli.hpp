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

// Command-line front end and the end-to-end pipelines behind it.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mdlsynth/datagen.hpp"
#include "mdlsynth/nn.hpp"

namespace mdlsynth {

/// Sampler and trainer settings sized for a single laptop core.
struct DeskPreset {
  StreamConfig stream;
  TrainConfig train;
};

DeskPreset desk_preset(int qubits, std::uint64_t seed);

/// n held-out examples from a stream seeded independently of training.
std::vector<TrainingExample> validation_examples(StreamConfig cfg, std::size_t n);

struct QuickstartConfig {
  int qubits = 2;
  std::uint64_t seed = 0;
  int workers = 1;
  int epochs = 6;
  int steps_per_epoch = 200;
  int trials = 40;
  int per_bucket = 5;
  int t_max = 4;
};

/// Generates data, trains a model, runs the random and structured suites and
/// writes every artifact under out_dir. Returns the summary report; wall
/// times sit under its "timing" key only.
nlohmann::json run_quickstart(const QuickstartConfig& cfg, const std::filesystem::path& out_dir);

/// Resolves a relative output path inside out_dir, creating parent
/// directories. Throws kInvalidArgument for paths that escape it.
std::filesystem::path confined_path(const std::filesystem::path& out_dir,
                                    const std::filesystem::path& relative);

/// Exit codes: 0 ok, 1 operational error, 2 usage error.
int run_cli(int argc, char** argv);

}  // namespace mdlsynth
