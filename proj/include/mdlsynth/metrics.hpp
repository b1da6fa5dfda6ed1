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

#include "mdlsynth/core.hpp"

namespace mdlsynth {

inline constexpr double kDefaultThreshold = 0.99;

/// Frobenius norm ||U - V||_F. Not invariant under global phase.
double hs_distance(const Unitary& u, const Unitary& v);

/// Spectral norm ||U - V||_2 (largest singular value), via the eigenvalues
/// of the Hermitian matrix (U - V)^dagger (U - V).
double worst_case_distance(const Unitary& u, const Unitary& v);

/// Average gate fidelity (|Tr(U^dagger V)|^2 + D) / (D (D + 1)), D = 2^n.
/// Invariant under global phase of either argument.
double avg_fidelity(const Unitary& u, const Unitary& v);

/// avg_fidelity(r, I) computed from the trace alone.
double fidelity_to_identity(const Unitary& r);

/// True iff avg_fidelity(r, I) >= threshold.
bool is_converged(const Unitary& r, double threshold);

}  // namespace mdlsynth
