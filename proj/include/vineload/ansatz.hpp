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

#include "vineload/statevec.hpp"
#include "vineload/vine.hpp"

namespace vineload {

enum class BlockKind { SORB, UNIVARIATE, BEB };

struct BlockSpec {
  BlockKind kind = BlockKind::SORB;
  std::vector<int> registers;  // one register, or two distinct ones for BEB
  int k = 1;                   // qubits per register (kappa for a bare SORB)
  int layers = 1;
};

// Special-orthogonal ring block on qubits first_qubit .. first_qubit+kappa-1.
// Each layer: adjacent CRYs on even pairs, then odd pairs, then the wrap CRY
// from the last qubit back to the first, then one RY per qubit. kappa == 1
// degenerates to a single RY per layer. Slots are assigned sequentially.
CircuitFragment build_sorb(int first_qubit, int kappa, int layers, int param_offset);

struct UnivariateFragment {
  CircuitFragment fragment;
  // Stage j (1-based) is a ring over the j most significant qubits of the
  // register; stages[j-1] holds its gates and slots.
  std::vector<CircuitFragment> stages;
};

// Hierarchical loader for feature register `reg` (0-based) of width k.
UnivariateFragment build_univariate(int reg, int k, int layers, int param_offset);

// Bivariate entangling block between registers r and q. Each layer: ring on
// r, ring on q, cross CRY(r_j -> q_j) for every bit j, then RY on all 2k qubits.
CircuitFragment build_beb(int r, int q, int k, int layers, int param_offset);

CircuitFragment build_block(const BlockSpec& spec, int param_offset);

struct BlockBoundary {
  std::string label;  // "U<r>" for marginals, "T<tree>_<edge>" (1-based) for BEBs
  int param_begin = 0;
  int param_end = 0;
  std::size_t op_begin = 0;
  std::size_t op_end = 0;
  bool operator==(const BlockBoundary&) const = default;
};

struct VineCircuit {
  Circuit circuit;
  std::vector<BlockBoundary> blocks;
};

// Univariate loaders for every register followed by one BEB per vine edge,
// trees in order.
VineCircuit build_vine_circuit(const VineStructure& vine, int k, int layers_uni,
                               int layers_biv);

std::string beb_label(std::size_t tree, std::size_t edge);

struct Schedule {
  // rounds[tree][round] lists edge indices of that tree sharing the round.
  std::vector<std::vector<std::vector<int>>> rounds;
  int beb_rounds = 0;
  int block_depth = 0;  // beb_rounds plus one round for the univariate stage
};

// First-fit edge colouring per tree: two BEBs share a round iff their
// register pairs are disjoint.
Schedule schedule_blocks(const VineStructure& vine);

struct ResourceReport {
  long n_trees = 0;
  long n_edges = 0;
  long n_nodes = 0;
  long n_params = 0;
  long n_ry = 0;
  long n_cry = 0;
  long formula_params = 0;
  long formula_ry = 0;
  long formula_cry = 0;
  // Rings over a single qubit have no wrap CRY; each such ring-layer drops
  // one CRY and one parameter relative to the closed-form counts.
  long degenerate_ring_correction = 0;
  int beb_rounds = 0;
  int block_depth = 0;
};

ResourceReport resource_report(int d, int k, int layers_uni, int layers_biv,
                               const VineStructure& vine);

}  // namespace vineload
