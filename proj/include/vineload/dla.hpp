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

#include <string>
#include <vector>

#include <Eigen/Core>

#include "vineload/statevec.hpp"

namespace vineload {

// Largest register the dense closure accepts.
inline constexpr int kMaxClosureQubits = 6;

// Real skew-symmetric 2^m x 2^m matrices: -iY and -iCY, the generators of
// RY and CRY.
struct GeneratorSet {
  int n_qubits = 0;
  std::vector<Eigen::MatrixXd> matrices;
  std::vector<std::string> labels;

  explicit GeneratorSet(int n_qubits = 1);
  // Rejects matrices of the wrong size or not skew-symmetric within 1e-12.
  void add(Eigen::MatrixXd matrix, std::string label);
};

Eigen::MatrixXd y_generator(int n_qubits, int qubit);
Eigen::MatrixXd cy_generator(int n_qubits, int control, int target);

// One generator per distinct gate of `circuit` (shared slots do not matter).
GeneratorSet generators_of(const Circuit& circuit);

// Generator sets of the ansatz blocks on a minimal register.
GeneratorSet ring_generators(int kappa);
GeneratorSet univariate_generators(int k);
GeneratorSet beb_generators(int k);  // m = 2k qubits

struct ClosureResult {
  int dimension = 0;
  bool max_dim_exceeded = false;
  std::vector<Eigen::MatrixXd> basis;  // orthonormal in the Frobenius inner product
};

// Real span of the nested commutators of the generators, grown until no new
// direction appears (rank tolerance 1e-9) or `max_dim` is passed.
ClosureResult lie_closure(const GeneratorSet& gens, int max_dim);

// dim so(2^m) = 2^(m-1) (2^m - 1).
long so_dimension(int n_qubits);

struct TheoremCheck {
  std::string name;
  int n_qubits = 0;
  long expected = 0;
  long found = 0;
  bool max_dim_exceeded = false;
  bool passed = false;
  double seconds = 0.0;
};

// Ring closures for kappa <= min(k, 3), the hierarchical set for k, and the
// BEB set for k when 2k <= 4 (2k <= 6 with `include_large`).
std::vector<TheoremCheck> verify_theorems(int k, bool include_large = false);

}  // namespace vineload
