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

#include "vineload/statevec.hpp"

#include <algorithm>

namespace vineload {

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("circuit needs at least one qubit");
}

void Circuit::check(const GateOp& op) const {
  auto valid = [&](int q) { return q >= 0 && q < n_qubits_; };
  if (!valid(op.target)) throw InvalidGateError("gate target outside register");
  if (op.kind == GateKind::CRY) {
    if (!valid(op.control)) throw InvalidGateError("gate control outside register");
    if (op.control == op.target) {
      throw InvalidGateError("controlled rotation with control == target");
    }
  }
  if (op.param_slot < 0) throw InvalidGateError("negative parameter slot");
}

void Circuit::add(const GateOp& op) {
  check(op);
  ops_.push_back(op);
  n_params_ = std::max(n_params_, op.param_slot + 1);
}

void Circuit::append(const CircuitFragment& fragment) {
  if (fragment.param_begin != n_params_) {
    throw LengthMismatchError("fragment slots start at " + std::to_string(fragment.param_begin) +
                              ", circuit has " + std::to_string(n_params_) + " parameters");
  }
  for (const auto& op : fragment.ops) {
    check(op);
    if (op.param_slot < fragment.param_begin || op.param_slot >= fragment.param_end) {
      throw InvalidGateError("fragment gate uses a slot outside its range");
    }
  }
  ops_.insert(ops_.end(), fragment.ops.begin(), fragment.ops.end());
  n_params_ = fragment.param_end;
}

void Circuit::freeze_below(int boundary) {
  if (boundary < 0 || boundary > n_params_) throw std::out_of_range("freeze boundary");
  frozen_below_ = boundary;
}

int Circuit::allocate_params(int count) {
  const int first = n_params_;
  n_params_ += count;
  return first;
}

std::size_t Circuit::count(GateKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(ops_.begin(), ops_.end(), [&](const GateOp& op) { return op.kind == kind; }));
}

Circuit Circuit::slice(std::size_t begin, std::size_t end) const {
  Circuit out(n_qubits_);
  end = std::min(end, ops_.size());
  if (begin < end) out.ops_.assign(ops_.begin() + static_cast<std::ptrdiff_t>(begin),
                                   ops_.begin() + static_cast<std::ptrdiff_t>(end));
  out.n_params_ = n_params_;
  out.frozen_below_ = frozen_below_;
  return out;
}

RealState run(const Circuit& circuit, const Eigen::VectorXd& params, const RealState& input) {
  RealState out = input;
  apply_circuit(circuit, params, out);
  return out;
}

double fidelity(const RealState& state, const Eigen::VectorXd& target_amps) {
  if (target_amps.size() != state.dim()) {
    throw LengthMismatchError("target length differs from state dimension");
  }
  const double overlap = state.amps().dot(target_amps);
  return overlap * overlap;
}

Eigen::VectorXd born_probs(const RealState& state) { return state.amps().array().square(); }

namespace {

// <lam| dU/dtheta |psi> for one gate. dRY(theta)/dtheta = RY(theta + pi) / 2,
// and a CRY contributes only on its control-1 subspace.
double gate_derivative_overlap(const Eigen::VectorXd& lam, const Eigen::VectorXd& psi,
                               int n_qubits, const GateOp& op, double theta) {
  const std::uint64_t stride = qubit_mask(n_qubits, op.target);
  const std::uint64_t cmask = op.kind == GateKind::CRY ? qubit_mask(n_qubits, op.control) : 0;
  const double c = 0.5 * std::cos(theta / 2);
  const double s = 0.5 * std::sin(theta / 2);
  const auto dim = static_cast<std::uint64_t>(psi.size());
  double acc = 0.0;
  for (std::uint64_t base = 0; base < dim; base += 2 * stride) {
    for (std::uint64_t i = base; i < base + stride; ++i) {
      if ((i & cmask) != cmask) continue;
      const auto i0 = static_cast<Eigen::Index>(i);
      const auto i1 = static_cast<Eigen::Index>(i + stride);
      const double a = psi(i0), b = psi(i1);
      acc += lam(i0) * (-s * a - c * b) + lam(i1) * (c * a - s * b);
    }
  }
  return acc;
}

}  // namespace

Eigen::VectorXd adjoint_gradient(const Circuit& circuit, const Eigen::VectorXd& params,
                                 RealState output, Eigen::VectorXd cotangent) {
  if (params.size() != circuit.n_params()) {
    throw LengthMismatchError("parameter vector length differs from circuit");
  }
  if (cotangent.size() != output.dim() || output.n_qubits() != circuit.n_qubits()) {
    throw LengthMismatchError("cotangent/state/circuit dimensions differ");
  }
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(circuit.n_params());
  const auto& ops = circuit.ops();
  const int frozen = circuit.frozen_below();
  // Nothing left to differentiate before the first trainable gate.
  std::size_t first = ops.size();
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].param_slot >= frozen) {
      first = i;
      break;
    }
  }
  const int n = circuit.n_qubits();
  auto& psi = output.amps();
  for (std::size_t i = ops.size(); i-- > first;) {
    const GateOp& op = ops[i];
    const double theta = params(op.param_slot);
    apply_gate(psi, n, op, -theta);
    if (op.param_slot >= frozen) {
      grad(op.param_slot) += gate_derivative_overlap(cotangent, psi, n, op, theta);
    }
    apply_gate(cotangent, n, op, -theta);
  }
  return grad;
}

Eigen::VectorXd grad_fidelity(const Circuit& circuit, const Eigen::VectorXd& params,
                              const RealState& input, const Eigen::VectorXd& target_amps) {
  RealState out = run(circuit, params, input);
  if (target_amps.size() != out.dim()) {
    throw LengthMismatchError("target length differs from state dimension");
  }
  const double overlap = out.amps().dot(target_amps);
  return 2.0 * overlap * adjoint_gradient(circuit, params, std::move(out), target_amps);
}

std::string bitstring(std::uint64_t index, int n_bits) {
  std::string s(static_cast<std::size_t>(n_bits), '0');
  for (int b = 0; b < n_bits; ++b) {
    if (index & (std::uint64_t{1} << (n_bits - 1 - b))) s[static_cast<std::size_t>(b)] = '1';
  }
  return s;
}

std::vector<std::pair<std::string, double>> export_amplitudes(const RealState& state) {
  std::vector<std::pair<std::string, double>> rows;
  rows.reserve(static_cast<std::size_t>(state.dim()));
  for (Eigen::Index i = 0; i < state.dim(); ++i) {
    rows.emplace_back(bitstring(static_cast<std::uint64_t>(i), state.n_qubits()),
                      state.amps()(i));
  }
  return rows;
}

}  // namespace vineload
