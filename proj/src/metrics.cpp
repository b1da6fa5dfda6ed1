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
#include "mdlsynth/metrics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "mdlsynth/error.hpp"

namespace mdlsynth {

namespace {

void check_same_dims(const Unitary& u, const Unitary& v, const char* op) {
  if (u.qubits() != v.qubits()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(op) + ": " + std::to_string(u.qubits()) + "- vs " +
                    std::to_string(v.qubits()) + "-qubit operands");
  }
}

double fidelity_from_trace(Complex tr, double d) {
  return (std::norm(tr) + d) / (d * (d + 1.0));
}

}  // namespace

double hs_distance(const Unitary& u, const Unitary& v) {
  check_same_dims(u, v, "hs_distance");
  return (u.matrix() - v.matrix()).norm();
}

double worst_case_distance(const Unitary& u, const Unitary& v) {
  check_same_dims(u, v, "worst_case_distance");
  const Matrix diff = u.matrix() - v.matrix();
  const Matrix gram = diff.adjoint() * diff;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotConverged,
                "worst_case_distance: eigenvalue iteration did not converge");
  }
  // Rounding can push a zero eigenvalue slightly negative.
  return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

double avg_fidelity(const Unitary& u, const Unitary& v) {
  check_same_dims(u, v, "avg_fidelity");
  // Tr(U^dagger V) = sum_ij conj(U_ij) V_ij.
  const Complex tr = (u.matrix().conjugate().cwiseProduct(v.matrix())).sum();
  return fidelity_from_trace(tr, static_cast<double>(u.dim()));
}

double fidelity_to_identity(const Unitary& r) {
  return fidelity_from_trace(r.trace(), static_cast<double>(r.dim()));
}

bool is_converged(const Unitary& r, double threshold) {
  return fidelity_to_identity(r) >= threshold;
}

}  // namespace mdlsynth
