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

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "vineload/errors.hpp"

namespace vineload {

// Features are numbered 0..d-1 throughout.
//
// An edge of tree T_j joins two nodes of T_j. For T_1 the nodes are features;
// for j >= 2 they are indices into the edge list of T_{j-1}. set_v and set_w
// are the (sorted) feature sets carried by the two nodes, so the conditioned
// pair is their symmetric difference and the conditioning set their
// intersection.
struct VineEdge {
  int x = 0;
  int y = 0;
  std::vector<int> conditioning;
  std::array<int, 2> nodes{0, 0};
  std::vector<int> set_v;
  std::vector<int> set_w;

  // {x, y} union conditioning, sorted.
  std::vector<int> constraint_set() const;
  bool operator==(const VineEdge&) const = default;
};

struct VineStructure {
  int d = 0;
  std::vector<std::vector<VineEdge>> trees;

  std::size_t n_edges() const;
  bool operator==(const VineStructure&) const = default;
};

struct PseudoObservations {
  Eigen::MatrixXd u;
  std::vector<int> degenerate_columns;  // constant columns, flagged not fatal
};

// Column-wise rank / (n + 1), ties receiving their average rank.
PseudoObservations pseudo_obs(const Eigen::MatrixXd& samples);

// Tie-corrected Kendall tau-b, O(n log n). Throws DataError when either
// vector is constant.
double kendall_tau(const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y);

// Pairwise tau-b of the pseudo-observations. Pairs involving a constant
// column get 0. Unit diagonal.
Eigen::MatrixXd tau_matrix(const Eigen::MatrixXd& samples);

// |tau| with zero diagonal, the edge weights used for structure selection.
Eigen::MatrixXd dependence_weights(const Eigen::MatrixXd& tau);

// Prim's algorithm maximising total weight over the complete graph. Ties go
// to the lexicographically smallest (min-index, max-index) edge. Edges are
// returned as (smaller, larger) in the order they were added.
std::vector<std::pair<int, int>> first_tree_mst(const Eigen::MatrixXd& weights);

VineStructure build_dvine(const std::vector<int>& order);

// Greedy Hamiltonian path maximising the summed |tau| of neighbours.
std::vector<int> dvine_order(const Eigen::MatrixXd& tau);

// Star trees: T_j is rooted at roots[j-1]. `roots` lists d-1 or d features.
VineStructure build_cvine(int d, const std::vector<int>& roots);

// T_1 = first_tree_mst; later trees are maximum spanning trees over the
// proximity-admissible node pairs weighted by |tau| of the conditioned pair.
VineStructure build_rvine_greedy(const Eigen::MatrixXd& tau);

std::pair<int, int> edge_feature_pair(const std::vector<int>& set_v,
                                      const std::vector<int>& set_w);
std::pair<int, int> edge_feature_pair(const VineEdge& edge);

// Throws StructureError describing the first violated rule.
void validate(const VineStructure& vine);
std::optional<std::string> validation_error(const VineStructure& vine);

// A conditioned pair plus conditioning set, as stored in vine files.
struct EdgeLabel {
  int x = 0;
  int y = 0;
  std::vector<int> conditioning;
};

// Rebuilds node links and node sets from per-tree edge labels, then validates.
VineStructure vine_from_labels(int d, const std::vector<std::vector<EdgeLabel>>& trees);

}  // namespace vineload
