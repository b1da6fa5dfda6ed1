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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mdlsynth/core.hpp"
#include "mdlsynth/error.hpp"
#include "mdlsynth/rng.hpp"
#include "test_util.hpp"

namespace mdlsynth {
namespace {

using testing::max_abs_diff;
using testing::random_circuit;

Matrix m2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

TEST(GateMatrix, TOnOneQubit) {
  const Unitary t = gate_matrix(Gate::t(0), 1);
  const Unitary want(1, m2(1, 0, 0, std::polar(1.0, std::numbers::pi / 4)));
  EXPECT_LT(max_abs_diff(t, want), 1e-15);
}

TEST(GateMatrix, TSquaredIsS) {
  const Unitary tt = gate_matrix(Gate::t(0), 1) * gate_matrix(Gate::t(0), 1);
  EXPECT_LT(max_abs_diff(tt, gate_matrix(Gate::s(0), 1)), 1e-15);
}

TEST(GateMatrix, CxIsInvolution) {
  const Unitary cx = gate_matrix(Gate::cx(0, 1), 2);
  EXPECT_LT(max_abs_diff(cx * cx, Unitary::identity(2)), 1e-15);
}

TEST(GateMatrix, CxControlIsMostSignificant) {
  // |10> -> |11> with qubit 0 as the leading tensor factor.
  const Unitary cx = gate_matrix(Gate::cx(0, 1), 2);
  EXPECT_EQ(cx(3, 2), Complex(1.0));
  EXPECT_EQ(cx(0, 0), Complex(1.0));
  const Unitary rev = gate_matrix(Gate::cx(1, 0), 2);
  EXPECT_EQ(rev(3, 1), Complex(1.0));
}

TEST(GateMatrix, InvalidQubitsRejected) {
  EXPECT_EQ(code_of([] { gate_matrix(Gate::h(2), 2); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { gate_matrix(Gate::cx(1, 1), 2); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { Circuit(2, {Gate::cx(0, 2)}); }), ErrorCode::kInvalidArgument);
}

TEST(CircuitUnitary, EmptyIsIdentity) {
  EXPECT_EQ(circuit_unitary(Circuit(2)).matrix(), Unitary::identity(2).matrix());
}

TEST(CircuitUnitary, GhzPreparation) {
  const double r = 1.0 / std::numbers::sqrt2;
  Matrix h(2, 2);
  h << r, r, r, -r;
  Matrix hi = Matrix::Zero(4, 4);
  hi.block(0, 0, 2, 2) = h(0, 0) * Matrix::Identity(2, 2);
  hi.block(0, 2, 2, 2) = h(0, 1) * Matrix::Identity(2, 2);
  hi.block(2, 0, 2, 2) = h(1, 0) * Matrix::Identity(2, 2);
  hi.block(2, 2, 2, 2) = h(1, 1) * Matrix::Identity(2, 2);
  Matrix cx = Matrix::Zero(4, 4);
  cx(0, 0) = cx(1, 1) = cx(2, 3) = cx(3, 2) = 1.0;
  const Unitary want(2, cx * hi);
  const Unitary got = circuit_unitary(Circuit(2, {Gate::h(0), Gate::cx(0, 1)}));
  EXPECT_LT(max_abs_diff(got, want), 1e-15);
}

TEST(CircuitUnitary, LaterGatesMultiplyOnTheLeft) {
  const Unitary h = gate_matrix(Gate::h(0), 1);
  const Unitary t = gate_matrix(Gate::t(0), 1);
  const Unitary got = circuit_unitary(Circuit(1, {Gate::h(0), Gate::t(0)}));
  EXPECT_LT(max_abs_diff(got, t * h), 1e-15);
  EXPECT_GT(max_abs_diff(got, h * t), 1e-3);
}

TEST(CircuitUnitary, UnitarityOfRandomCircuits) {
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const int n = 1 + i % 5;
    EXPECT_LE(circuit_unitary(random_circuit(n, 40, rng)).unitarity_error(), 1e-10);
  }
}

TEST(Unitary, RowAndColumnUpdatesMatchProducts) {
  Rng rng(3);
  const Unitary u = circuit_unitary(random_circuit(3, 20, rng));
  for (const Gate& g : action_set(3)) {
    const Unitary m = gate_matrix(g, 3);
    EXPECT_LT(max_abs_diff(u.left_multiplied(g), m * u), 1e-14);
    EXPECT_LT(max_abs_diff(u.left_multiplied(g, true), m.adjoint() * u), 1e-14);
    EXPECT_LT(max_abs_diff(u.right_multiplied(g), u * m), 1e-14);
    EXPECT_LT(max_abs_diff(u.right_multiplied(g, true), u * m.adjoint()), 1e-14);
  }
}

TEST(Unitary, RejectsWrongShape) {
  EXPECT_EQ(code_of([] { Unitary(2, Matrix::Identity(2, 2)); }), ErrorCode::kDimensionMismatch);
}

TEST(Residual, Endpoints) {
  Rng rng(11);
  const Unitary u = circuit_unitary(random_circuit(2, 10, rng));
  EXPECT_LT(max_abs_diff(residual(u, u), Unitary::identity(2)), 1e-12);
  EXPECT_LT(max_abs_diff(residual(Unitary::identity(2), u), u), 1e-15);
  EXPECT_EQ(code_of([&] { residual(Unitary::identity(1), u); }), ErrorCode::kDimensionMismatch);
}

TEST(Residual, TelescopesOverEveryCut) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Circuit c = random_circuit(2, 15, rng);
    const Unitary target = circuit_unitary(c);
    for (std::size_t t = 0; t <= c.size(); ++t) {
      const Unitary prefix = circuit_unitary(c.slice(0, t));
      const Unitary r = residual(prefix, target);
      EXPECT_LT(max_abs_diff(r, circuit_unitary(c.slice(t, c.size()))), 1e-12);
      EXPECT_LT(max_abs_diff(r * prefix, target), 1e-12);
    }
  }
}

TEST(Residual, CommittingAGateIsARightMultiplication) {
  Rng rng(9);
  const Circuit c = random_circuit(3, 12, rng);
  const Unitary target = circuit_unitary(c);
  Unitary r = target;
  for (const Gate& g : c.gates()) r.right_multiply_in_place(g, true);
  EXPECT_LT(max_abs_diff(r, Unitary::identity(3)), 1e-12);
}

TEST(KronPad, Examples) {
  EXPECT_EQ(kron_pad(Unitary::identity(1), 2).matrix(), Unitary::identity(2).matrix());
  const Unitary x(1, m2(0, 1, 1, 0));
  const Unitary padded = kron_pad(x, 2);
  Matrix want = Matrix::Zero(4, 4);
  want(0, 2) = want(1, 3) = want(2, 0) = want(3, 1) = 1.0;
  EXPECT_EQ(padded.matrix(), want);
  EXPECT_EQ(code_of([] { kron_pad(Unitary::identity(3), 2); }), ErrorCode::kInvalidArgument);
}

TEST(KronPad, Homomorphism) {
  Rng rng(2);
  for (int i = 0; i < 10; ++i) {
    const Unitary u = testing::random_unitary(2, rng);
    const Unitary v = testing::random_unitary(2, rng);
    EXPECT_LT(max_abs_diff(kron_pad(u * v, 4), kron_pad(u, 4) * kron_pad(v, 4)), 1e-13);
  }
}

TEST(KronPad, GateOnLeadingQubitsEmbeds) {
  const Circuit c(2, {Gate::h(0), Gate::cx(0, 1), Gate::t(1)});
  const Circuit wide(4, {Gate::h(0), Gate::cx(0, 1), Gate::t(1)});
  EXPECT_LT(max_abs_diff(kron_pad(circuit_unitary(c), 4), circuit_unitary(wide)), 1e-14);
}

TEST(ActionSet, SizesAndOrder) {
  EXPECT_EQ(action_set(2).size(), 8u);
  EXPECT_EQ(action_set(5).size(), 35u);
  const auto a = action_set(2);
  EXPECT_EQ(a[0], Gate::h(0));
  EXPECT_EQ(a[2], Gate::t(0));
  EXPECT_EQ(a[6], Gate::cx(0, 1));
  EXPECT_EQ(a[7], Gate::cx(1, 0));
}

TEST(Rng, DerivedStreamsAreStableAndDistinct) {
  EXPECT_EQ(derive_seed(1, "gumbel", 3), derive_seed(1, "gumbel", 3));
  EXPECT_NE(derive_seed(1, "gumbel", 3), derive_seed(1, "gumbel", 4));
  EXPECT_NE(derive_seed(1, "gumbel", 3), derive_seed(1, "datagen", 3));
  EXPECT_NE(derive_seed(1, "gumbel", 3), derive_seed(2, "gumbel", 3));
  Rng rng(0);
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform_open01(rng);
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

}  // namespace
}  // namespace mdlsynth
