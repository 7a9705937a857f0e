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

#include "vineload/ansatz.hpp"

#include <algorithm>
#include <stdexcept>

namespace vineload {

namespace {

void ring_layer(std::vector<GateOp>& ops, int first, int kappa, int& slot) {
  if (kappa == 1) {
    ops.push_back(GateOp::ry(first, slot++));
    return;
  }
  for (int parity = 0; parity < 2; ++parity) {
    for (int j = parity; j + 1 < kappa; j += 2) {
      ops.push_back(GateOp::cry(first + j, first + j + 1, slot++));
    }
  }
  ops.push_back(GateOp::cry(first + kappa - 1, first, slot++));
  for (int j = 0; j < kappa; ++j) ops.push_back(GateOp::ry(first + j, slot++));
}

void check_positive(int value, const char* what) {
  if (value < 1) throw std::invalid_argument(std::string(what) + " must be >= 1");
}

}  // namespace

CircuitFragment build_sorb(int first_qubit, int kappa, int layers, int param_offset) {
  check_positive(kappa, "kappa");
  check_positive(layers, "layers");
  CircuitFragment f;
  f.param_begin = param_offset;
  int slot = param_offset;
  for (int l = 0; l < layers; ++l) ring_layer(f.ops, first_qubit, kappa, slot);
  f.param_end = slot;
  return f;
}

UnivariateFragment build_univariate(int reg, int k, int layers, int param_offset) {
  check_positive(k, "k");
  UnivariateFragment u;
  u.fragment.param_begin = param_offset;
  int slot = param_offset;
  for (int j = 1; j <= k; ++j) {
    CircuitFragment stage = build_sorb(reg * k, j, layers, slot);
    slot = stage.param_end;
    u.fragment.ops.insert(u.fragment.ops.end(), stage.ops.begin(), stage.ops.end());
    u.stages.push_back(std::move(stage));
  }
  u.fragment.param_end = slot;
  return u;
}

CircuitFragment build_beb(int r, int q, int k, int layers, int param_offset) {
  if (r == q) throw std::invalid_argument("BEB registers must differ");
  check_positive(k, "k");
  check_positive(layers, "layers");
  const int r1 = r * k;
  const int q1 = q * k;
  CircuitFragment f;
  f.param_begin = param_offset;
  int slot = param_offset;
  for (int l = 0; l < layers; ++l) {
    ring_layer(f.ops, r1, k, slot);
    ring_layer(f.ops, q1, k, slot);
    for (int j = 0; j < k; ++j) f.ops.push_back(GateOp::cry(r1 + j, q1 + j, slot++));
    for (int j = 0; j < k; ++j) f.ops.push_back(GateOp::ry(r1 + j, slot++));
    for (int j = 0; j < k; ++j) f.ops.push_back(GateOp::ry(q1 + j, slot++));
  }
  f.param_end = slot;
  return f;
}

CircuitFragment build_block(const BlockSpec& spec, int param_offset) {
  switch (spec.kind) {
    case BlockKind::SORB:
      if (spec.registers.size() != 1) throw std::invalid_argument("SORB takes one register");
      return build_sorb(spec.registers[0] * spec.k, spec.k, spec.layers, param_offset);
    case BlockKind::UNIVARIATE:
      if (spec.registers.size() != 1) {
        throw std::invalid_argument("univariate block takes one register");
      }
      return build_univariate(spec.registers[0], spec.k, spec.layers, param_offset).fragment;
    case BlockKind::BEB:
      if (spec.registers.size() != 2) throw std::invalid_argument("BEB takes two registers");
      return build_beb(spec.registers[0], spec.registers[1], spec.k, spec.layers,
                       param_offset);
  }
  throw std::invalid_argument("unknown block kind");
}

std::string beb_label(std::size_t tree, std::size_t edge) {
  return "T" + std::to_string(tree + 1) + "_" + std::to_string(edge + 1);
}

VineCircuit build_vine_circuit(const VineStructure& vine, int k, int layers_uni,
                               int layers_biv) {
  validate(vine);
  VineCircuit vc{Circuit(vine.d * k), {}};
  auto push = [&](const CircuitFragment& f, std::string label) {
    const std::size_t op_begin = vc.circuit.ops().size();
    vc.circuit.append(f);
    vc.blocks.push_back({std::move(label), f.param_begin, f.param_end, op_begin,
                         vc.circuit.ops().size()});
  };
  for (int r = 0; r < vine.d; ++r) {
    push(build_univariate(r, k, layers_uni, vc.circuit.n_params()).fragment,
         "U" + std::to_string(r));
  }
  for (std::size_t t = 0; t < vine.trees.size(); ++t) {
    for (std::size_t e = 0; e < vine.trees[t].size(); ++e) {
      const auto [x, y] = edge_feature_pair(vine.trees[t][e]);
      push(build_beb(x, y, k, layers_biv, vc.circuit.n_params()), beb_label(t, e));
    }
  }
  return vc;
}

Schedule schedule_blocks(const VineStructure& vine) {
  validate(vine);
  Schedule s;
  for (const auto& tree : vine.trees) {
    std::vector<std::vector<int>> rounds;
    std::vector<std::vector<int>> busy;  // registers used per round
    for (int i = 0; i < static_cast<int>(tree.size()); ++i) {
      const auto [x, y] = edge_feature_pair(tree[static_cast<std::size_t>(i)]);
      std::size_t r = 0;
      for (; r < rounds.size(); ++r) {
        const auto& used = busy[r];
        if (std::find(used.begin(), used.end(), x) == used.end() &&
            std::find(used.begin(), used.end(), y) == used.end()) {
          break;
        }
      }
      if (r == rounds.size()) {
        rounds.emplace_back();
        busy.emplace_back();
      }
      rounds[r].push_back(i);
      busy[r].push_back(x);
      busy[r].push_back(y);
    }
    s.beb_rounds += static_cast<int>(rounds.size());
    s.rounds.push_back(std::move(rounds));
  }
  s.block_depth = s.beb_rounds + 1;
  return s;
}

ResourceReport resource_report(int d, int k, int layers_uni, int layers_biv,
                               const VineStructure& vine) {
  if (vine.d != d) throw std::invalid_argument("vine dimension differs from d");
  const VineCircuit vc = build_vine_circuit(vine, k, layers_uni, layers_biv);
  const Schedule schedule = schedule_blocks(vine);
  ResourceReport r;
  r.n_trees = static_cast<long>(vine.trees.size());
  r.n_edges = static_cast<long>(vine.n_edges());
  for (std::size_t t = 0; t < vine.trees.size(); ++t) {
    r.n_nodes += static_cast<long>(vine.trees[t].size()) + 1;
  }
  r.n_params = vc.circuit.n_params();
  r.n_ry = static_cast<long>(vc.circuit.count(GateKind::RY));
  r.n_cry = static_cast<long>(vc.circuit.count(GateKind::CRY));

  const long D = d, K = k, Lu = layers_uni, Lb = layers_biv;
  r.formula_params = Lu * (K + 1) * K * D + 7 * Lb * K * D * (D - 1) / 2;
  r.formula_ry = Lu * K * (K + 1) * D / 2 + 2 * Lb * K * D * (D - 1);
  r.formula_cry = Lu * K * (K + 1) * D / 2 + 3 * Lb * K * D * (D - 1) / 2;
  r.degenerate_ring_correction = Lu * D + (k == 1 ? 2 * Lb * r.n_edges : 0);
  r.beb_rounds = schedule.beb_rounds;
  r.block_depth = schedule.block_depth;
  return r;
}

}  // namespace vineload
