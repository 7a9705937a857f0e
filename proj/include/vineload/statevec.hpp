// Copyright 2026 The vineload Authors
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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "vineload/errors.hpp"

namespace vineload {

// Widest register the dense simulator accepts unless a caller overrides it.
inline constexpr int kDefaultMaxQubits = 26;

// Qubits are numbered 0..n-1 with qubit 0 the most significant bit of a
// basis index, so feature register r (0-based) spans qubits r*k .. r*k+k-1.
inline std::uint64_t qubit_mask(int n_qubits, int qubit) {
  return std::uint64_t{1} << (n_qubits - 1 - qubit);
}

enum class GateKind { RY, CRY };

struct GateOp {
  GateKind kind = GateKind::RY;
  int control = -1;  // unused for RY
  int target = 0;
  int param_slot = 0;

  static GateOp ry(int target, int slot) { return {GateKind::RY, -1, target, slot}; }
  static GateOp cry(int control, int target, int slot) {
    return {GateKind::CRY, control, target, slot};
  }
  bool operator==(const GateOp&) const = default;
};

// A run of gates with absolute parameter slots [param_begin, param_end).
struct CircuitFragment {
  std::vector<GateOp> ops;
  int param_begin = 0;
  int param_end = 0;

  int n_params() const { return param_end - param_begin; }
};

// Ordered RY/CRY gate list over a fixed register. Slots below `frozen_below`
// are held fixed during training.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  int n_params() const { return n_params_; }
  int frozen_below() const { return frozen_below_; }
  const std::vector<GateOp>& ops() const { return ops_; }

  void add(const GateOp& op);
  // Appends a fragment; its slots must start at the current parameter count.
  void append(const CircuitFragment& fragment);
  void freeze_below(int boundary);
  // Reserves `count` fresh slots, returning the first.
  int allocate_params(int count);

  std::size_t count(GateKind kind) const;
  // ops[begin, end) with the same parameter vector layout and frozen boundary.
  Circuit slice(std::size_t begin, std::size_t end) const;
  bool operator==(const Circuit&) const = default;

 private:
  void check(const GateOp& op) const;

  int n_qubits_ = 0;
  std::vector<GateOp> ops_;
  int n_params_ = 0;
  int frozen_below_ = 0;
};

// Unit-norm amplitude vector over n qubits, templated on the scalar so the
// same kernels serve double and float (or an autodiff type) alike.
template <typename Scalar>
class BasicState {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicState() = default;

  static BasicState uniform(int n_qubits, int max_qubits = kDefaultMaxQubits) {
    check_width(n_qubits, max_qubits);
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    BasicState s;
    s.n_qubits_ = n_qubits;
    s.amps_ = Vector::Constant(dim, Scalar(1) / std::sqrt(Scalar(dim)));
    return s;
  }

  static BasicState basis(int n_qubits, std::uint64_t index,
                          int max_qubits = kDefaultMaxQubits) {
    check_width(n_qubits, max_qubits);
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    if (index >= static_cast<std::uint64_t>(dim)) {
      throw std::out_of_range("basis index outside register");
    }
    BasicState s;
    s.n_qubits_ = n_qubits;
    s.amps_ = Vector::Zero(dim);
    s.amps_(static_cast<Eigen::Index>(index)) = Scalar(1);
    return s;
  }

  // Takes ownership of `amps`; length must be a power of two and the norm 1.
  static BasicState from_amplitudes(Vector amps, Scalar tolerance = Scalar(1e-10)) {
    const Eigen::Index dim = amps.size();
    if (dim < 2 || (dim & (dim - 1)) != 0) {
      throw LengthMismatchError("amplitude vector length is not a power of two >= 2");
    }
    if (std::abs(amps.norm() - Scalar(1)) > tolerance) {
      throw std::invalid_argument("amplitude vector is not normalised");
    }
    BasicState s;
    s.n_qubits_ = 0;
    while ((Eigen::Index{1} << s.n_qubits_) < dim) ++s.n_qubits_;
    s.amps_ = std::move(amps);
    return s;
  }

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return amps_.size(); }
  const Vector& amps() const { return amps_; }
  Vector& amps() { return amps_; }

  // |this> (x) |+>: appends one least-significant qubit in the plus state.
  BasicState extended_with_plus() const {
    BasicState s;
    s.n_qubits_ = n_qubits_ + 1;
    s.amps_.resize(2 * dim());
    const Scalar h = Scalar(1) / std::sqrt(Scalar(2));
    for (Eigen::Index i = 0; i < dim(); ++i) {
      s.amps_(2 * i) = h * amps_(i);
      s.amps_(2 * i + 1) = h * amps_(i);
    }
    return s;
  }

 private:
  static void check_width(int n_qubits, int max_qubits) {
    if (n_qubits < 1) throw std::invalid_argument("register needs at least one qubit");
    if (n_qubits > max_qubits) {
      throw CapacityError("register of " + std::to_string(n_qubits) +
                          " qubits exceeds the limit of " + std::to_string(max_qubits));
    }
  }

  int n_qubits_ = 0;
  Vector amps_;
};

using RealState = BasicState<double>;

// Rotates every amplitude pair that differs only in `target`, restricted to
// indices whose `control_mask` bits are all set.
template <typename Derived>
void rotate_pairs(Eigen::DenseBase<Derived>& amps, int n_qubits, std::uint64_t control_mask,
                  int target, typename Derived::Scalar cos_half,
                  typename Derived::Scalar sin_half) {
  const std::uint64_t stride = qubit_mask(n_qubits, target);
  const std::uint64_t dim = static_cast<std::uint64_t>(amps.size());
  for (std::uint64_t base = 0; base < dim; base += 2 * stride) {
    for (std::uint64_t i = base; i < base + stride; ++i) {
      if ((i & control_mask) != control_mask) continue;
      const auto a = amps(static_cast<Eigen::Index>(i));
      const auto b = amps(static_cast<Eigen::Index>(i + stride));
      amps(static_cast<Eigen::Index>(i)) = cos_half * a - sin_half * b;
      amps(static_cast<Eigen::Index>(i + stride)) = sin_half * a + cos_half * b;
    }
  }
}

template <typename Derived>
void apply_ry(Eigen::DenseBase<Derived>& amps, int n_qubits, int target,
              typename Derived::Scalar theta) {
  using std::cos, std::sin;
  rotate_pairs(amps, n_qubits, 0, target, cos(theta / 2), sin(theta / 2));
}

template <typename Derived>
void apply_cry(Eigen::DenseBase<Derived>& amps, int n_qubits, int control, int target,
               typename Derived::Scalar theta) {
  using std::cos, std::sin;
  if (control == target) throw InvalidGateError("controlled rotation with control == target");
  rotate_pairs(amps, n_qubits, qubit_mask(n_qubits, control), target, cos(theta / 2),
               sin(theta / 2));
}

template <typename Derived>
void apply_gate(Eigen::DenseBase<Derived>& amps, int n_qubits, const GateOp& op,
                typename Derived::Scalar theta) {
  if (op.kind == GateKind::RY) {
    apply_ry(amps, n_qubits, op.target, theta);
  } else {
    apply_cry(amps, n_qubits, op.control, op.target, theta);
  }
}

template <typename Scalar>
void apply_ry(BasicState<Scalar>& state, int target, Scalar theta) {
  if (target < 0 || target >= state.n_qubits()) throw std::out_of_range("qubit out of range");
  apply_ry(state.amps(), state.n_qubits(), target, theta);
}

template <typename Scalar>
void apply_cry(BasicState<Scalar>& state, int control, int target, Scalar theta) {
  if (target < 0 || target >= state.n_qubits() || control < 0 || control >= state.n_qubits()) {
    throw std::out_of_range("qubit out of range");
  }
  apply_cry(state.amps(), state.n_qubits(), control, target, theta);
}

// Applies ops[begin, end) of `circuit` in order.
template <typename Scalar>
void apply_circuit(const Circuit& circuit,
                   const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& params,
                   BasicState<Scalar>& state, std::size_t begin = 0,
                   std::size_t end = static_cast<std::size_t>(-1)) {
  if (params.size() != circuit.n_params()) {
    throw LengthMismatchError("parameter vector has " + std::to_string(params.size()) +
                              " entries, circuit expects " +
                              std::to_string(circuit.n_params()));
  }
  if (state.n_qubits() != circuit.n_qubits()) {
    throw LengthMismatchError("state and circuit widths differ");
  }
  const auto& ops = circuit.ops();
  end = std::min(end, ops.size());
  for (std::size_t i = begin; i < end; ++i) {
    apply_gate(state.amps(), state.n_qubits(), ops[i], params(ops[i].param_slot));
  }
}

RealState run(const Circuit& circuit, const Eigen::VectorXd& params, const RealState& input);

// |<state|target>|^2 for real vectors.
double fidelity(const RealState& state, const Eigen::VectorXd& target_amps);

Eigen::VectorXd born_probs(const RealState& state);

// Gradient of the linear functional <cotangent| U(params) |input>, by a
// reverse sweep that replays inverse gates from `output`, which must equal
// run(circuit, params, input). Frozen slots report 0.
Eigen::VectorXd adjoint_gradient(const Circuit& circuit, const Eigen::VectorXd& params,
                                 RealState output, Eigen::VectorXd cotangent);

// dF/dparams for F = <psi|target>^2 with psi = U(params)|input>.
Eigen::VectorXd grad_fidelity(const Circuit& circuit, const Eigen::VectorXd& params,
                              const RealState& input, const Eigen::VectorXd& target_amps);

// Flat (bitstring, amplitude) listing, most significant qubit first.
std::vector<std::pair<std::string, double>> export_amplitudes(const RealState& state);

std::string bitstring(std::uint64_t index, int n_bits);

}  // namespace vineload
