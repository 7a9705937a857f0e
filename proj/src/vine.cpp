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

#include "vineload/vine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <string>

namespace vineload {

std::vector<int> VineEdge::constraint_set() const {
  std::vector<int> s = conditioning;
  s.push_back(x);
  s.push_back(y);
  std::sort(s.begin(), s.end());
  return s;
}

std::size_t VineStructure::n_edges() const {
  std::size_t n = 0;
  for (const auto& t : trees) n += t.size();
  return n;
}

PseudoObservations pseudo_obs(const Eigen::MatrixXd& samples) {
  const Eigen::Index n = samples.rows();
  if (n < 2) throw DataError("pseudo-observations need at least two samples");
  PseudoObservations out;
  out.u.resize(n, samples.cols());
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  for (Eigen::Index c = 0; c < samples.cols(); ++c) {
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return samples(a, c) < samples(b, c); });
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && samples(idx[j + 1], c) == samples(idx[i], c)) ++j;
      // 1-based ranks i+1 .. j+1 share their mean.
      const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t t = i; t <= j; ++t) out.u(idx[t], c) = rank / static_cast<double>(n + 1);
      i = j + 1;
    }
    if (samples.col(c).maxCoeff() == samples.col(c).minCoeff()) {
      out.degenerate_columns.push_back(static_cast<int>(c));
    }
  }
  return out;
}

namespace {

std::int64_t tie_pairs(const std::vector<double>& sorted) {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const auto t = static_cast<std::int64_t>(j - i + 1);
    total += t * (t - 1) / 2;
    i = j + 1;
  }
  return total;
}

// Sorts `v` ascending and returns the number of strict inversions.
std::int64_t count_inversions(std::vector<double>& v) {
  std::vector<double> buf(v.size());
  std::int64_t swaps = 0;
  for (std::size_t width = 1; width < v.size(); width *= 2) {
    for (std::size_t lo = 0; lo < v.size(); lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, v.size());
      const std::size_t hi = std::min(lo + 2 * width, v.size());
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (v[j] < v[i]) {
          swaps += static_cast<std::int64_t>(mid - i);
          buf[k++] = v[j++];
        } else {
          buf[k++] = v[i++];
        }
      }
      while (i < mid) buf[k++] = v[i++];
      while (j < hi) buf[k++] = v[j++];
    }
    std::swap(v, buf);
  }
  return swaps;
}

}  // namespace

double kendall_tau(const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size()) throw LengthMismatchError("kendall_tau: vector lengths differ");
  const auto n = static_cast<std::size_t>(x.size());
  if (n < 2) throw DataError("kendall_tau needs at least two observations");

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const auto ia = static_cast<Eigen::Index>(a), ib = static_cast<Eigen::Index>(b);
    return x(ia) < x(ib) || (x(ia) == x(ib) && y(ia) < y(ib));
  });

  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = x(static_cast<Eigen::Index>(idx[i]));
    ys[i] = y(static_cast<Eigen::Index>(idx[i]));
  }
  const std::int64_t tied_x = tie_pairs(xs);
  std::int64_t tied_xy = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && xs[j + 1] == xs[i] && ys[j + 1] == ys[i]) ++j;
    const auto t = static_cast<std::int64_t>(j - i + 1);
    tied_xy += t * (t - 1) / 2;
    i = j + 1;
  }
  const std::int64_t discordant = count_inversions(ys);
  const std::int64_t tied_y = tie_pairs(ys);
  const auto total = static_cast<std::int64_t>(n * (n - 1) / 2);
  if (tied_x == total || tied_y == total) {
    throw DataError("kendall_tau undefined for a constant vector");
  }
  const double numer =
      static_cast<double>(total - tied_x - tied_y + tied_xy - 2 * discordant);
  const double denom = std::sqrt(static_cast<double>(total - tied_x) *
                                 static_cast<double>(total - tied_y));
  return std::clamp(numer / denom, -1.0, 1.0);
}

Eigen::MatrixXd tau_matrix(const Eigen::MatrixXd& samples) {
  const auto obs = pseudo_obs(samples);
  const Eigen::Index d = samples.cols();
  Eigen::MatrixXd tau = Eigen::MatrixXd::Identity(d, d);
  auto degenerate = [&](Eigen::Index c) {
    return std::find(obs.degenerate_columns.begin(), obs.degenerate_columns.end(),
                     static_cast<int>(c)) != obs.degenerate_columns.end();
  };
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const double t =
          degenerate(i) || degenerate(j) ? 0.0 : kendall_tau(obs.u.col(i), obs.u.col(j));
      tau(i, j) = tau(j, i) = t;
    }
  }
  return tau;
}

Eigen::MatrixXd dependence_weights(const Eigen::MatrixXd& tau) {
  Eigen::MatrixXd w = tau.cwiseAbs();
  w.diagonal().setZero();
  return w;
}

namespace {

using PairWeight = std::function<std::optional<double>(int, int)>;

// Prim over n vertices; `weight(u, v)` returns nullopt for inadmissible pairs.
std::vector<std::pair<int, int>> max_spanning_tree(int n, const PairWeight& weight) {
  std::vector<std::pair<int, int>> edges;
  if (n <= 1) return edges;
  std::vector<bool> in_tree(static_cast<std::size_t>(n), false);
  in_tree[0] = true;
  for (int step = 1; step < n; ++step) {
    std::optional<std::pair<int, int>> best;
    double best_w = 0.0;
    for (int u = 0; u < n; ++u) {
      if (!in_tree[static_cast<std::size_t>(u)]) continue;
      for (int v = 0; v < n; ++v) {
        if (in_tree[static_cast<std::size_t>(v)]) continue;
        const auto w = weight(u, v);
        if (!w) continue;
        const std::pair<int, int> e{std::min(u, v), std::max(u, v)};
        if (!best || *w > best_w || (*w == best_w && e < *best)) {
          best = e;
          best_w = *w;
        }
      }
    }
    if (!best) throw StructureError("admissible graph is disconnected");
    edges.push_back(*best);
    in_tree[static_cast<std::size_t>(best->first)] = true;
    in_tree[static_cast<std::size_t>(best->second)] = true;
  }
  return edges;
}

std::vector<int> set_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<int> set_intersection(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VineEdge make_edge(std::vector<int> set_v, std::vector<int> set_w, std::array<int, 2> nodes) {
  VineEdge e;
  const auto [x, y] = edge_feature_pair(set_v, set_w);
  e.x = x;
  e.y = y;
  e.conditioning = set_intersection(set_v, set_w);
  e.nodes = nodes;
  e.set_v = std::move(set_v);
  e.set_w = std::move(set_w);
  return e;
}

VineEdge first_tree_edge(int a, int b) { return make_edge({a}, {b}, {a, b}); }

VineEdge higher_tree_edge(const std::vector<VineEdge>& prev, int a, int b) {
  return make_edge(prev[static_cast<std::size_t>(a)].constraint_set(),
                   prev[static_cast<std::size_t>(b)].constraint_set(), {a, b});
}

void check_permutation(const std::vector<int>& order, int d) {
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < static_cast<int>(sorted.size()); ++i) {
    if (sorted[static_cast<std::size_t>(i)] != i || i >= d) {
      throw std::invalid_argument("expected a permutation of 0.." + std::to_string(d - 1));
    }
  }
}

void check_weights(const Eigen::MatrixXd& w) {
  if (w.rows() != w.cols() || w.rows() < 1) throw std::invalid_argument("weights must be square");
  if ((w - w.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("weights must be symmetric");
  }
}

}  // namespace

std::vector<std::pair<int, int>> first_tree_mst(const Eigen::MatrixXd& weights) {
  check_weights(weights);
  return max_spanning_tree(static_cast<int>(weights.rows()),
                           [&](int u, int v) -> std::optional<double> { return weights(u, v); });
}

VineStructure build_dvine(const std::vector<int>& order) {
  const int d = static_cast<int>(order.size());
  if (d < 2) throw std::invalid_argument("a vine needs at least two features");
  check_permutation(order, d);
  VineStructure vine;
  vine.d = d;
  std::vector<VineEdge> t1;
  for (int i = 0; i + 1 < d; ++i) {
    t1.push_back(first_tree_edge(order[static_cast<std::size_t>(i)],
                                 order[static_cast<std::size_t>(i + 1)]));
  }
  vine.trees.push_back(std::move(t1));
  for (int j = 2; j < d; ++j) {
    const auto& prev = vine.trees.back();
    std::vector<VineEdge> tree;
    for (int i = 0; i + 1 < static_cast<int>(prev.size()); ++i) {
      tree.push_back(higher_tree_edge(prev, i, i + 1));
    }
    vine.trees.push_back(std::move(tree));
  }
  return vine;
}

std::vector<int> dvine_order(const Eigen::MatrixXd& tau) {
  check_weights(tau);
  const int d = static_cast<int>(tau.rows());
  if (d < 2) throw std::invalid_argument("ordering needs at least two features");
  const Eigen::MatrixXd w = dependence_weights(tau);
  int bi = 0, bj = 1;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      if (w(i, j) > w(bi, bj)) {
        bi = i;
        bj = j;
      }
    }
  }
  std::vector<int> path{bi, bj};
  std::vector<bool> used(static_cast<std::size_t>(d), false);
  used[static_cast<std::size_t>(bi)] = used[static_cast<std::size_t>(bj)] = true;
  auto best_next = [&](int end) {
    int best = -1;
    for (int v = 0; v < d; ++v) {
      if (used[static_cast<std::size_t>(v)]) continue;
      if (best < 0 || w(end, v) > w(end, best)) best = v;
    }
    return best;
  };
  while (static_cast<int>(path.size()) < d) {
    const int front = best_next(path.front());
    const int back = best_next(path.back());
    if (w(path.front(), front) > w(path.back(), back)) {
      path.insert(path.begin(), front);
      used[static_cast<std::size_t>(front)] = true;
    } else {
      path.push_back(back);
      used[static_cast<std::size_t>(back)] = true;
    }
  }
  return path;
}

VineStructure build_cvine(int d, const std::vector<int>& roots) {
  if (d < 2) throw std::invalid_argument("a vine needs at least two features");
  if (static_cast<int>(roots.size()) != d - 1 && static_cast<int>(roots.size()) != d) {
    throw std::invalid_argument("C-vine needs d-1 or d root features");
  }
  std::vector<int> full = roots;
  if (static_cast<int>(full.size()) == d - 1) {
    for (int v = 0; v < d; ++v) {
      if (std::find(full.begin(), full.end(), v) == full.end()) full.push_back(v);
    }
  }
  check_permutation(full, d);

  VineStructure vine;
  vine.d = d;
  std::vector<VineEdge> t1;
  for (int v = 0; v < d; ++v) {
    if (v != full[0]) t1.push_back(first_tree_edge(full[0], v));
  }
  vine.trees.push_back(std::move(t1));
  for (int j = 2; j < d; ++j) {
    const auto& prev = vine.trees.back();
    const int root = full[static_cast<std::size_t>(j - 1)];
    int hub = -1;
    for (int i = 0; i < static_cast<int>(prev.size()); ++i) {
      const auto& e = prev[static_cast<std::size_t>(i)];
      if (e.y == root || e.x == root) hub = i;
    }
    std::vector<VineEdge> tree;
    for (int i = 0; i < static_cast<int>(prev.size()); ++i) {
      if (i != hub) tree.push_back(higher_tree_edge(prev, hub, i));
    }
    vine.trees.push_back(std::move(tree));
  }
  return vine;
}

VineStructure build_rvine_greedy(const Eigen::MatrixXd& tau) {
  check_weights(tau);
  const int d = static_cast<int>(tau.rows());
  if (d < 2) throw std::invalid_argument("a vine needs at least two features");
  const Eigen::MatrixXd w = dependence_weights(tau);
  VineStructure vine;
  vine.d = d;
  std::vector<VineEdge> t1;
  for (const auto& [a, b] : first_tree_mst(w)) t1.push_back(first_tree_edge(a, b));
  vine.trees.push_back(std::move(t1));
  for (int j = 2; j < d; ++j) {
    const auto& prev = vine.trees.back();
    const int n = static_cast<int>(prev.size());
    auto admissible = [&](int a, int b) -> std::optional<double> {
      const auto& ea = prev[static_cast<std::size_t>(a)];
      const auto& eb = prev[static_cast<std::size_t>(b)];
      const bool share = ea.nodes[0] == eb.nodes[0] || ea.nodes[0] == eb.nodes[1] ||
                         ea.nodes[1] == eb.nodes[0] || ea.nodes[1] == eb.nodes[1];
      if (!share) return std::nullopt;
      const auto [x, y] = edge_feature_pair(ea.constraint_set(), eb.constraint_set());
      return w(x, y);
    };
    std::vector<VineEdge> tree;
    for (const auto& [a, b] : max_spanning_tree(n, admissible)) {
      tree.push_back(higher_tree_edge(prev, a, b));
    }
    vine.trees.push_back(std::move(tree));
  }
  if (auto err = validation_error(vine)) throw StructureError("internal: " + *err);
  return vine;
}

std::pair<int, int> edge_feature_pair(const std::vector<int>& set_v,
                                      const std::vector<int>& set_w) {
  std::vector<int> only_v, only_w;
  for (int f : set_v) {
    if (std::find(set_w.begin(), set_w.end(), f) == set_w.end()) only_v.push_back(f);
  }
  for (int f : set_w) {
    if (std::find(set_v.begin(), set_v.end(), f) == set_v.end()) only_w.push_back(f);
  }
  if (only_v.size() != 1 || only_w.size() != 1) {
    throw StructureError("node sets do not differ in exactly two features");
  }
  return {only_v.front(), only_w.front()};
}

std::pair<int, int> edge_feature_pair(const VineEdge& edge) {
  return edge_feature_pair(edge.set_v, edge.set_w);
}

namespace {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      a = parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
    }
    return a;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[static_cast<std::size_t>(a)] = b;
    return true;
  }
};

}  // namespace

std::optional<std::string> validation_error(const VineStructure& vine) {
  const int d = vine.d;
  if (d < 2) return "vine needs d >= 2";
  if (static_cast<int>(vine.trees.size()) != d - 1) {
    return "expected " + std::to_string(d - 1) + " trees, found " +
           std::to_string(vine.trees.size());
  }
  for (int j = 1; j < d; ++j) {
    const auto& tree = vine.trees[static_cast<std::size_t>(j - 1)];
    const std::string where = "tree " + std::to_string(j);
    if (static_cast<int>(tree.size()) != d - j) {
      return where + ": expected " + std::to_string(d - j) + " edges";
    }
    const int n_nodes = d - j + 1;
    DisjointSets sets(n_nodes);
    for (std::size_t i = 0; i < tree.size(); ++i) {
      const auto& e = tree[i];
      const std::string at = where + " edge " + std::to_string(i);
      const auto [a, b] = e.nodes;
      if (a < 0 || b < 0 || a >= n_nodes || b >= n_nodes || a == b) return at + ": bad nodes";
      if (!sets.unite(a, b)) return at + ": closes a cycle";
      std::vector<int> sv, sw;
      if (j == 1) {
        sv = {a};
        sw = {b};
      } else {
        const auto& prev = vine.trees[static_cast<std::size_t>(j - 2)];
        const auto& pa = prev[static_cast<std::size_t>(a)];
        const auto& pb = prev[static_cast<std::size_t>(b)];
        const bool share = pa.nodes[0] == pb.nodes[0] || pa.nodes[0] == pb.nodes[1] ||
                           pa.nodes[1] == pb.nodes[0] || pa.nodes[1] == pb.nodes[1];
        if (!share) return at + ": violates the proximity condition";
        sv = pa.constraint_set();
        sw = pb.constraint_set();
      }
      if (e.set_v != sv || e.set_w != sw) return at + ": node sets inconsistent with links";
      const auto inter = set_intersection(sv, sw);
      if (set_union(sv, sw).size() != inter.size() + 2) {
        return at + ": symmetric difference is not a pair";
      }
      std::pair<int, int> xy;
      try {
        xy = edge_feature_pair(sv, sw);
      } catch (const StructureError&) {
        return at + ": symmetric difference is not a pair";
      }
      if (xy != std::pair<int, int>{e.x, e.y}) return at + ": conditioned pair mismatch";
      if (e.conditioning != inter) return at + ": conditioning set mismatch";
      for (int f : e.constraint_set()) {
        if (f < 0 || f >= d) return at + ": feature out of range";
      }
    }
  }
  return std::nullopt;
}

void validate(const VineStructure& vine) {
  if (auto err = validation_error(vine)) throw StructureError(*err);
}

VineStructure vine_from_labels(int d, const std::vector<std::vector<EdgeLabel>>& trees) {
  if (d < 2) throw StructureError("vine needs d >= 2");
  if (static_cast<int>(trees.size()) != d - 1) throw StructureError("wrong number of trees");
  VineStructure vine;
  vine.d = d;
  for (std::size_t j = 0; j < trees.size(); ++j) {
    std::vector<VineEdge> tree;
    for (const auto& label : trees[j]) {
      std::vector<int> cond = label.conditioning;
      std::sort(cond.begin(), cond.end());
      if (j == 0) {
        if (!cond.empty()) throw StructureError("first-tree edge with a conditioning set");
        if (label.x < 0 || label.y < 0 || label.x >= d || label.y >= d) {
          throw StructureError("feature out of range");
        }
        tree.push_back(first_tree_edge(label.x, label.y));
        continue;
      }
      const auto& prev = vine.trees.back();
      std::vector<int> with_x = cond, with_y = cond;
      with_x.push_back(label.x);
      with_y.push_back(label.y);
      std::sort(with_x.begin(), with_x.end());
      std::sort(with_y.begin(), with_y.end());
      int a = -1, b = -1;
      for (int i = 0; i < static_cast<int>(prev.size()); ++i) {
        const auto cs = prev[static_cast<std::size_t>(i)].constraint_set();
        if (cs == with_x) a = i;
        if (cs == with_y) b = i;
      }
      if (a < 0 || b < 0) {
        throw StructureError("tree " + std::to_string(j + 1) + " edge " +
                             std::to_string(label.x) + "," + std::to_string(label.y) +
                             " has no matching nodes in the previous tree");
      }
      tree.push_back(higher_tree_edge(prev, a, b));
    }
    vine.trees.push_back(std::move(tree));
  }
  validate(vine);
  return vine;
}

}  // namespace vineload
