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

#include <Eigen/QR>
#include <random>

#include "mdlsynth/core.hpp"
#include "mdlsynth/rng.hpp"

namespace mdlsynth::testing {

inline Unitary random_unitary(int n, Rng& rng) {
  std::normal_distribution<double> nd;
  const Eigen::Index d = Eigen::Index{1} << n;
  Matrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = Complex(nd(rng), nd(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(a);
  return Unitary(n, qr.householderQ() * Matrix::Identity(d, d));
}

inline Gate random_gate(int n, Rng& rng) {
  std::uniform_int_distribution<int> kind(0, n >= 2 ? 3 : 2);
  std::uniform_int_distribution<int> q(0, n - 1);
  switch (kind(rng)) {
    case 0: return Gate::h(q(rng));
    case 1: return Gate::s(q(rng));
    case 2: return Gate::t(q(rng));
    default: {
      const int c = q(rng);
      int t = q(rng);
      while (t == c) t = q(rng);
      return Gate::cx(c, t);
    }
  }
}

inline Circuit random_circuit(int n, int length, Rng& rng) {
  Circuit c(n);
  for (int i = 0; i < length; ++i) c.append(random_gate(n, rng));
  return c;
}

inline double max_abs_diff(const Unitary& a, const Unitary& b) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

}  // namespace mdlsynth::testing
