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
#include "mdlsynth/core.hpp"

#include <cmath>
#include <numbers>

#include "mdlsynth/error.hpp"

namespace mdlsynth {

namespace {

void check_qubit_count(int qubits) {
  if (qubits < 1 || qubits > kMaxQubits) {
    throw Error(ErrorCode::kInvalidArgument,
                "qubit count " + std::to_string(qubits) + " outside [1, " +
                    std::to_string(kMaxQubits) + "]");
  }
}

const Complex kI{0.0, 1.0};
const Complex kT = std::polar(1.0, std::numbers::pi / 4);
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

}  // namespace

std::string_view gate_kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::T: return "T";
    case GateKind::CX: return "CX";
  }
  return "?";
}

void Gate::validate(int qubits) const {
  auto bad = [&](const std::string& why) {
    throw Error(ErrorCode::kInvalidArgument,
                "invalid gate " + to_string() + " on " +
                    std::to_string(qubits) + " qubits: " + why);
  };
  if (q0 >= qubits) bad("qubit index out of range");
  if (is_two_qubit()) {
    if (q1 >= qubits) bad("target index out of range");
    if (q0 == q1) bad("control equals target");
  }
}

std::string Gate::to_string() const {
  std::string s(gate_kind_name(kind));
  s += ' ';
  s += std::to_string(q0);
  if (is_two_qubit()) {
    s += ' ';
    s += std::to_string(q1);
  }
  return s;
}

Circuit::Circuit(int qubits, std::vector<Gate> gates)
    : qubits_(qubits), gates_(std::move(gates)) {
  check_qubit_count(qubits);
  for (const Gate& g : gates_) g.validate(qubits_);
}

void Circuit::append(Gate g) {
  g.validate(qubits_);
  gates_.push_back(g);
}

void Circuit::append(const Circuit& other) {
  if (other.qubits_ != qubits_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cannot append a " + std::to_string(other.qubits_) +
                    "-qubit circuit to a " + std::to_string(qubits_) +
                    "-qubit circuit");
  }
  gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
}

Circuit Circuit::slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > gates_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "circuit slice out of range");
  }
  Circuit out;
  out.qubits_ = qubits_;
  out.gates_.assign(gates_.begin() + static_cast<std::ptrdiff_t>(begin),
                    gates_.begin() + static_cast<std::ptrdiff_t>(end));
  return out;
}

Unitary::Unitary(int qubits, Matrix entries)
    : qubits_(qubits), m_(std::move(entries)) {
  check_qubit_count(qubits);
  const Eigen::Index d = Eigen::Index{1} << qubits;
  if (m_.rows() != d || m_.cols() != d) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected a " + std::to_string(d) + "x" + std::to_string(d) +
                    " matrix for " + std::to_string(qubits) + " qubits, got " +
                    std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()));
  }
}

Unitary Unitary::identity(int qubits) {
  check_qubit_count(qubits);
  const Eigen::Index d = Eigen::Index{1} << qubits;
  return Unitary(qubits, Matrix::Identity(d, d));
}

double Unitary::unitarity_error() const {
  Matrix e = m_.adjoint() * m_ - Matrix::Identity(dim(), dim());
  return e.cwiseAbs().maxCoeff();
}

void Unitary::left_multiply_in_place(Gate g, bool adjoint) {
  g.validate(qubits_);
  const Eigen::Index d = dim();
  const Eigen::Index mask0 = Eigen::Index{1} << (qubits_ - 1 - g.q0);
  switch (g.kind) {
    case GateKind::H: {
      const double r = kInvSqrt2;
      for (Eigen::Index row = 0; row < d; ++row) {
        if (row & mask0) continue;
        auto a = m_.row(row);
        auto b = m_.row(row | mask0);
        for (Eigen::Index c = 0; c < d; ++c) {
          const Complex x = a(c), y = b(c);
          a(c) = (x + y) * r;
          b(c) = (x - y) * r;
        }
      }
      break;
    }
    case GateKind::S:
    case GateKind::T: {
      Complex phase = g.kind == GateKind::S ? kI : kT;
      if (adjoint) phase = std::conj(phase);
      for (Eigen::Index row = 0; row < d; ++row) {
        if (row & mask0) m_.row(row) *= phase;
      }
      break;
    }
    case GateKind::CX: {
      const Eigen::Index mask1 = Eigen::Index{1} << (qubits_ - 1 - g.q1);
      for (Eigen::Index row = 0; row < d; ++row) {
        if ((row & mask0) && !(row & mask1)) m_.row(row).swap(m_.row(row | mask1));
      }
      break;
    }
  }
}

Unitary Unitary::left_multiplied(Gate g, bool adjoint) const {
  Unitary out = *this;
  out.left_multiply_in_place(g, adjoint);
  return out;
}

void Unitary::right_multiply_in_place(Gate g, bool adjoint) {
  g.validate(qubits_);
  const Eigen::Index d = dim();
  const Eigen::Index mask0 = Eigen::Index{1} << (qubits_ - 1 - g.q0);
  switch (g.kind) {
    case GateKind::H: {
      const double r = kInvSqrt2;
      for (Eigen::Index row = 0; row < d; ++row) {
        for (Eigen::Index c = 0; c < d; ++c) {
          if (c & mask0) continue;
          const Complex x = m_(row, c), y = m_(row, c | mask0);
          m_(row, c) = (x + y) * r;
          m_(row, c | mask0) = (x - y) * r;
        }
      }
      break;
    }
    case GateKind::S:
    case GateKind::T: {
      Complex phase = g.kind == GateKind::S ? kI : kT;
      if (adjoint) phase = std::conj(phase);
      for (Eigen::Index c = 0; c < d; ++c) {
        if (c & mask0) m_.col(c) *= phase;
      }
      break;
    }
    case GateKind::CX: {
      // CX is a real symmetric permutation: U CX swaps the same columns that
      // CX U swaps rows.
      const Eigen::Index mask1 = Eigen::Index{1} << (qubits_ - 1 - g.q1);
      for (Eigen::Index c = 0; c < d; ++c) {
        if ((c & mask0) && !(c & mask1)) m_.col(c).swap(m_.col(c | mask1));
      }
      break;
    }
  }
}

Unitary Unitary::right_multiplied(Gate g, bool adjoint) const {
  Unitary out = *this;
  out.right_multiply_in_place(g, adjoint);
  return out;
}

Unitary operator*(const Unitary& a, const Unitary& b) {
  if (a.qubits_ != b.qubits_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cannot multiply " + std::to_string(a.qubits_) + "- and " +
                    std::to_string(b.qubits_) + "-qubit unitaries");
  }
  return Unitary(a.qubits_, a.m_ * b.m_);
}

Unitary gate_matrix(Gate g, int qubits) {
  check_qubit_count(qubits);
  g.validate(qubits);
  Matrix full;
  if (g.kind == GateKind::CX) {
    // |0><0|_c (x) I + |1><1|_c (x) X_t, built directly on basis states.
    const Eigen::Index d = Eigen::Index{1} << qubits;
    const Eigen::Index cm = Eigen::Index{1} << (qubits - 1 - g.q0);
    const Eigen::Index tm = Eigen::Index{1} << (qubits - 1 - g.q1);
    full = Matrix::Zero(d, d);
    for (Eigen::Index col = 0; col < d; ++col) {
      const Eigen::Index row = (col & cm) ? (col ^ tm) : col;
      full(row, col) = 1.0;
    }
    return Unitary(qubits, std::move(full));
  }
  Matrix base(2, 2);
  switch (g.kind) {
    case GateKind::H:
      base << 1.0, 1.0, 1.0, -1.0;
      base *= kInvSqrt2;
      break;
    case GateKind::S:
      base << 1.0, 0.0, 0.0, kI;
      break;
    case GateKind::T:
      base << 1.0, 0.0, 0.0, kT;
      break;
    case GateKind::CX:
      break;
  }
  full = Matrix::Identity(1, 1);
  for (int q = 0; q < qubits; ++q) {
    const Matrix factor = q == g.q0 ? base : Matrix::Identity(2, 2);
    Matrix next(full.rows() * 2, full.cols() * 2);
    for (Eigen::Index r = 0; r < full.rows(); ++r) {
      for (Eigen::Index c = 0; c < full.cols(); ++c) {
        next.block(2 * r, 2 * c, 2, 2) = full(r, c) * factor;
      }
    }
    full = std::move(next);
  }
  return Unitary(qubits, std::move(full));
}

Unitary circuit_unitary(const Circuit& c) {
  Unitary u = Unitary::identity(c.qubits());
  for (const Gate& g : c.gates()) u.left_multiply_in_place(g);
  return u;
}

Unitary residual(const Unitary& prefix, const Unitary& target) {
  if (prefix.qubits() != target.qubits()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "residual: prefix has " + std::to_string(prefix.qubits()) +
                    " qubits, target has " + std::to_string(target.qubits()));
  }
  return Unitary(target.qubits(), target.matrix() * prefix.matrix().adjoint());
}

Unitary kron_pad(const Unitary& u, int total_qubits) {
  check_qubit_count(total_qubits);
  if (u.qubits() > total_qubits) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot pad a " + std::to_string(u.qubits()) +
                    "-qubit unitary down to " + std::to_string(total_qubits));
  }
  const Eigen::Index k = Eigen::Index{1} << (total_qubits - u.qubits());
  if (k == 1) return u;
  const Eigen::Index d = u.dim();
  Matrix out = Matrix::Zero(d * k, d * k);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      const Complex v = u(r, c);
      if (v == Complex{}) continue;
      for (Eigen::Index i = 0; i < k; ++i) out(r * k + i, c * k + i) = v;
    }
  }
  return Unitary(total_qubits, std::move(out));
}

std::vector<Gate> action_set(int qubits) {
  check_qubit_count(qubits);
  std::vector<Gate> actions;
  actions.reserve(static_cast<std::size_t>(3 * qubits + qubits * (qubits - 1)));
  for (int q = 0; q < qubits; ++q) {
    actions.push_back(Gate::h(q));
    actions.push_back(Gate::s(q));
    actions.push_back(Gate::t(q));
  }
  for (int c = 0; c < qubits; ++c) {
    for (int t = 0; t < qubits; ++t) {
      if (c != t) actions.push_back(Gate::cx(c, t));
    }
  }
  return actions;
}

}  // namespace mdlsynth
