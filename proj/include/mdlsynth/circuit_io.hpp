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

// Text interchange formats.
//
// Circuit (.circ):
//   QUBITS <n>
//   H <q> | S <q> | T <q> | CX <control> <target>
// one gate per line; '#' starts a comment; blank lines are ignored.
//
// Unitary (.mat):
//   UNITARY <n>
//   4^n lines of "<re> <im>" in row-major order.

#include <filesystem>
#include <string>
#include <string_view>

#include "mdlsynth/core.hpp"

namespace mdlsynth {

Circuit parse_circuit(std::string_view text);
std::string format_circuit(const Circuit& c);
Circuit read_circuit_file(const std::filesystem::path& path);
void write_circuit_file(const Circuit& c, const std::filesystem::path& path);

Unitary parse_unitary(std::string_view text);
std::string format_unitary(const Unitary& u);
Unitary read_unitary_file(const std::filesystem::path& path);
void write_unitary_file(const Unitary& u, const std::filesystem::path& path);

/// Loads a synthesis target: '.mat' files are read as unitaries, anything
/// else as a circuit whose unitary becomes the target.
Unitary read_target_file(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace mdlsynth
