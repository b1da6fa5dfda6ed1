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

// Clifford+T gate alphabet, circuits and dense unitaries.
//
// Qubit ordering: qubit 0 is the most significant tensor factor, i.e. the
// leftmost operand of every Kronecker product. Basis index bit (n - 1 - q)
// holds the value of qubit q.

#include <Eigen/Dense>
#include <compare>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mdlsynth {

using Complex = std::complex<double>;
using Matrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr int kMaxQubits = 5;

enum class GateKind : std::uint8_t { H = 0, S = 1, T = 2, CX = 3 };

std::string_view gate_kind_name(GateKind kind);

struct Gate {
  GateKind kind = GateKind::H;
  /// Target of H/S/T, control of CX.
  std::uint8_t q0 = 0;
  /// Target of CX; unused (0) for single-qubit gates.
  std::uint8_t q1 = 0;

  static Gate h(int q) { return {GateKind::H, narrow(q), 0}; }
  static Gate s(int q) { return {GateKind::S, narrow(q), 0}; }
  static Gate t(int q) { return {GateKind::T, narrow(q), 0}; }
  static Gate cx(int control, int target) {
    return {GateKind::CX, narrow(control), narrow(target)};
  }

  bool is_two_qubit() const { return kind == GateKind::CX; }
  bool is_diagonal() const { return kind == GateKind::S || kind == GateKind::T; }
  bool acts_on(int q) const {
    return q0 == q || (is_two_qubit() && q1 == q);
  }
  int control() const { return q0; }
  int target() const { return is_two_qubit() ? q1 : q0; }

  /// Throws kInvalidArgument unless the gate is valid on an n-qubit register.
  void validate(int qubits) const;

  std::string to_string() const;

  friend bool operator==(const Gate&, const Gate&) = default;
  friend auto operator<=>(const Gate&, const Gate&) = default;

 private:
  static std::uint8_t narrow(int q) {
    return static_cast<std::uint8_t>(q < 0 || q > 255 ? 255 : q);
  }
};

class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int qubits, std::vector<Gate> gates = {});

  int qubits() const { return qubits_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }
  std::span<const Gate> gates() const { return gates_; }
  const Gate& operator[](std::size_t i) const { return gates_[i]; }

  void append(Gate g);
  void append(const Circuit& other);

  /// Gates [begin, end) as a circuit on the same register.
  Circuit slice(std::size_t begin, std::size_t end) const;

  friend bool operator==(const Circuit&, const Circuit&) = default;
  /// Lexicographic over (qubits, gates).
  friend auto operator<=>(const Circuit& a, const Circuit& b) {
    if (auto c = a.qubits_ <=> b.qubits_; c != 0) return c;
    return std::lexicographical_compare_three_way(
        a.gates_.begin(), a.gates_.end(), b.gates_.begin(), b.gates_.end());
  }

 private:
  int qubits_ = 1;
  std::vector<Gate> gates_;
};

/// Dense 2^n x 2^n complex matrix. No global phase is tracked.
class Unitary {
 public:
  Unitary() : Unitary(identity(1)) {}
  /// Throws kDimensionMismatch unless entries is 2^n x 2^n.
  Unitary(int qubits, Matrix entries);

  static Unitary identity(int qubits);

  int qubits() const { return qubits_; }
  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  Complex operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

  Unitary adjoint() const { return Unitary(qubits_, m_.adjoint()); }
  Complex trace() const { return m_.trace(); }

  /// max_{ij} |(U^dagger U - I)_{ij}|.
  double unitarity_error() const;

  /// Returns G U (or G^dagger U when adjoint is set) using row operations.
  Unitary left_multiplied(Gate g, bool adjoint = false) const;
  void left_multiply_in_place(Gate g, bool adjoint = false);

  /// Returns U G (or U G^dagger) using column operations.
  Unitary right_multiplied(Gate g, bool adjoint = false) const;
  void right_multiply_in_place(Gate g, bool adjoint = false);

  Unitary scaled(Complex factor) const { return Unitary(qubits_, m_ * factor); }

  friend Unitary operator*(const Unitary& a, const Unitary& b);

 private:
  int qubits_ = 1;
  Matrix m_;
};

/// Full 2^n operator of g: the base matrix Kronecker-embedded at its qubit.
Unitary gate_matrix(Gate g, int qubits);

/// U(C) = G_m ... G_1.
Unitary circuit_unitary(const Circuit& c);

/// What remains to be applied after a committed prefix:
/// R = target prefix^dagger, so that R prefix = target. For a circuit C split
/// at t, residual(U(C_{1:t}), U(C)) = U(C_{t+1:}). Committing one more gate G
/// maps R to R G^dagger.
Unitary residual(const Unitary& prefix, const Unitary& target);

/// u (x) I on (total - u.qubits()) trailing qubits.
Unitary kron_pad(const Unitary& u, int total_qubits);

/// All single-qubit gates (H, S, T per qubit) followed by CX on every ordered
/// pair: 3n + n(n - 1) actions in a fixed order.
std::vector<Gate> action_set(int qubits);

}  // namespace mdlsynth
