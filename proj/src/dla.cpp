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

#include "vineload/dla.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <set>
#include <stdexcept>

#include "vineload/ansatz.hpp"

namespace vineload {

namespace {

void check_width(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxClosureQubits) {
    throw CapacityError("dense closure supports 1.." + std::to_string(kMaxClosureQubits) +
                        " qubits");
  }
}

// Rotation generator on `target`, restricted to indices whose control bit is set.
Eigen::MatrixXd rotation_generator(int n_qubits, std::uint64_t control_mask, int target) {
  check_width(n_qubits);
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  const std::uint64_t t = qubit_mask(n_qubits, target);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);
  for (std::uint64_t x = 0; x < static_cast<std::uint64_t>(dim); ++x) {
    if ((x & t) || (x & control_mask) != control_mask) continue;
    // -iY maps |0> -> |1> and |1> -> -|0>.
    g(static_cast<Eigen::Index>(x | t), static_cast<Eigen::Index>(x)) = 1.0;
    g(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x | t)) = -1.0;
  }
  return g;
}

}  // namespace

GeneratorSet::GeneratorSet(int n) : n_qubits(n) { check_width(n); }

void GeneratorSet::add(Eigen::MatrixXd matrix, std::string label) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  if (matrix.rows() != dim || matrix.cols() != dim) {
    throw LengthMismatchError("generator " + label + " has the wrong size");
  }
  if ((matrix + matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("generator " + label + " is not skew-symmetric");
  }
  matrices.push_back(std::move(matrix));
  labels.push_back(std::move(label));
}

Eigen::MatrixXd y_generator(int n_qubits, int qubit) {
  return rotation_generator(n_qubits, 0, qubit);
}

Eigen::MatrixXd cy_generator(int n_qubits, int control, int target) {
  if (control == target) throw InvalidGateError("controlled generator with control == target");
  return rotation_generator(n_qubits, qubit_mask(n_qubits, control), target);
}

GeneratorSet generators_of(const Circuit& circuit) {
  GeneratorSet gens(circuit.n_qubits());
  std::set<std::pair<int, int>> seen;
  for (const auto& op : circuit.ops()) {
    const int control = op.kind == GateKind::CRY ? op.control : -1;
    if (!seen.insert({control, op.target}).second) continue;
    if (control < 0) {
      gens.add(y_generator(circuit.n_qubits(), op.target), "Y" + std::to_string(op.target));
    } else {
      gens.add(cy_generator(circuit.n_qubits(), control, op.target),
               "CY" + std::to_string(control) + "," + std::to_string(op.target));
    }
  }
  return gens;
}

GeneratorSet ring_generators(int kappa) {
  Circuit c(kappa);
  c.append(build_sorb(0, kappa, 1, 0));
  return generators_of(c);
}

GeneratorSet univariate_generators(int k) {
  Circuit c(k);
  c.append(build_univariate(0, k, 1, 0).fragment);
  return generators_of(c);
}

GeneratorSet beb_generators(int k) {
  Circuit c(2 * k);
  c.append(build_beb(0, 1, k, 1, 0));
  return generators_of(c);
}

ClosureResult lie_closure(const GeneratorSet& gens, int max_dim) {
  check_width(gens.n_qubits);
  constexpr double kRankTol = 1e-9;
  const Eigen::Index dim = Eigen::Index{1} << gens.n_qubits;
  const Eigen::Index len = dim * dim;
  const Eigen::Index capacity =
      std::min<Eigen::Index>(static_cast<Eigen::Index>(max_dim) + 1, len);

  ClosureResult result;
  Eigen::MatrixXd q(len, std::max<Eigen::Index>(capacity, 1));
  int rank = 0;
  std::deque<int> pending;

  // Orthonormalises `m` against the basis; returns true if it added a direction.
  auto try_add = [&](const Eigen::MatrixXd& m) {
    const double scale = m.norm();
    if (scale < kRankTol) return false;
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(m.data(), len) / scale;
    for (int pass = 0; pass < 2 && rank > 0; ++pass) {
      const Eigen::VectorXd coeff = q.leftCols(rank).transpose() * v;
      v.noalias() -= q.leftCols(rank) * coeff;
    }
    const double residual = v.norm();
    if (residual < kRankTol) return false;
    if (rank + 1 > max_dim) {
      result.max_dim_exceeded = true;
      return false;
    }
    q.col(rank) = v / residual;
    pending.push_back(rank);
    ++rank;
    return true;
  };

  for (const auto& g : gens.matrices) {
    try_add(g);
    if (result.max_dim_exceeded) break;
  }
  while (!pending.empty() && !result.max_dim_exceeded) {
    const int i = pending.front();
    pending.pop_front();
    const Eigen::MatrixXd h = Eigen::Map<const Eigen::MatrixXd>(q.col(i).data(), dim, dim);
    for (const auto& g : gens.matrices) {
      try_add(g * h - h * g);
      if (result.max_dim_exceeded) break;
    }
  }

  result.dimension = rank;
  result.basis.reserve(static_cast<std::size_t>(rank));
  for (int i = 0; i < rank; ++i) {
    result.basis.emplace_back(Eigen::Map<const Eigen::MatrixXd>(q.col(i).data(), dim, dim));
  }
  return result;
}

long so_dimension(int n_qubits) {
  const long n = 1L << n_qubits;
  return n * (n - 1) / 2;
}

std::vector<TheoremCheck> verify_theorems(int k, bool include_large) {
  if (k < 1 || 2 * k > kMaxClosureQubits) {
    throw std::invalid_argument("verify_theorems needs 1 <= k <= 3");
  }
  std::vector<TheoremCheck> checks;
  auto run_check = [&](std::string name, const GeneratorSet& gens) {
    const auto start = std::chrono::steady_clock::now();
    TheoremCheck c;
    c.name = std::move(name);
    c.n_qubits = gens.n_qubits;
    c.expected = so_dimension(gens.n_qubits);
    const auto closure = lie_closure(gens, static_cast<int>(c.expected));
    c.found = closure.dimension;
    c.max_dim_exceeded = closure.max_dim_exceeded;
    c.passed = !c.max_dim_exceeded && c.found == c.expected;
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    checks.push_back(std::move(c));
  };
  for (int kappa = 1; kappa <= std::min(k, 3); ++kappa) {
    run_check("ring kappa=" + std::to_string(kappa), ring_generators(kappa));
  }
  run_check("hierarchical k=" + std::to_string(k), univariate_generators(k));
  if (2 * k <= 4 || include_large) {
    run_check("beb k=" + std::to_string(k), beb_generators(k));
  }
  return checks;
}

}  // namespace vineload
