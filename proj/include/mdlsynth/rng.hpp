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

#include <cstdint>
#include <random>
#include <string_view>

namespace mdlsynth {

using Rng = std::mt19937_64;

/// Child seed for a named substream, e.g. derive_seed(seed, "gumbel", trial).
/// Streams with different (name, index) are decorrelated; the mapping is
/// stable across runs and platforms.
std::uint64_t derive_seed(std::uint64_t parent, std::string_view stream,
                          std::uint64_t index = 0);

inline Rng make_rng(std::uint64_t parent, std::string_view stream,
                    std::uint64_t index = 0) {
  return Rng(derive_seed(parent, stream, index));
}

/// Uniform double in the open interval (0, 1).
double uniform_open01(Rng& rng);

}  // namespace mdlsynth
