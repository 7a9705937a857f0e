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

// Independent reference implementations used only by the tests.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "vineload/statevec.hpp"
#include "vineload/vine.hpp"

namespace oracle {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// exp(-i theta/2 Y) as a complex 2x2 matrix, built from the Pauli Y.
inline CMatrix ry_matrix(double theta) {
  CMatrix y(2, 2);
  y << cplx(0, 0), cplx(0, -1), cplx(0, 1), cplx(0, 0);
  const cplx i(0, 1);
  return std::cos(theta / 2) * CMatrix::Identity(2, 2) - i * std::sin(theta / 2) * y;
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    }
  }
  return out;
}

// Embeds a one-qubit operator on `qubit` of an n-qubit register, qubit 0 leftmost.
inline CMatrix embed(int n, int qubit, const CMatrix& u) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int q = 0; q < n; ++q) out = kron(out, q == qubit ? u : CMatrix::Identity(2, 2));
  return out;
}

inline CMatrix projector(int bit) {
  CMatrix p = CMatrix::Zero(2, 2);
  p(bit, bit) = 1.0;
  return p;
}

// |0><0|_c (x) I + |1><1|_c (x) U_t, as a dense matrix.
inline CMatrix controlled(int n, int control, int target, const CMatrix& u) {
  CMatrix off = CMatrix::Identity(1, 1);
  CMatrix on = CMatrix::Identity(1, 1);
  for (int q = 0; q < n; ++q) {
    off = kron(off, q == control ? projector(0) : CMatrix::Identity(2, 2));
    on = kron(on, q == control ? projector(1) : (q == target ? u : CMatrix::Identity(2, 2)));
  }
  return off + on;
}

inline CMatrix gate_matrix(int n, const vineload::GateOp& op, double theta) {
  const CMatrix u = ry_matrix(theta);
  return op.kind == vineload::GateKind::RY ? embed(n, op.target, u)
                                           : controlled(n, op.control, op.target, u);
}

// Dense complex simulation: multiplies the full gate matrices in order.
inline CVector simulate(const vineload::Circuit& circuit, const Eigen::VectorXd& params,
                        const CVector& input) {
  CVector psi = input;
  for (const auto& op : circuit.ops()) {
    psi = gate_matrix(circuit.n_qubits(), op, params(op.param_slot)) * psi;
  }
  return psi;
}

// Complex simulation gate by gate: for each basis index with the target bit
// clear (and the control bit set) apply the 2x2 matrix to the pair. Scales to
// ten qubits where the dense path does not.
inline CVector simulate_local(const vineload::Circuit& circuit, const Eigen::VectorXd& params,
                              const CVector& input) {
  const int n = circuit.n_qubits();
  CVector psi = input;
  for (const auto& op : circuit.ops()) {
    const CMatrix u = ry_matrix(params(op.param_slot));
    const Eigen::Index t = Eigen::Index{1} << (n - 1 - op.target);
    const Eigen::Index c = op.kind == vineload::GateKind::CRY ? Eigen::Index{1} << (n - 1 - op.control) : 0;
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
      if ((i & t) || (i & c) != c) continue;
      const cplx a = psi(i), b = psi(i | t);
      psi(i) = u(0, 0) * a + u(0, 1) * b;
      psi(i | t) = u(1, 0) * a + u(1, 1) * b;
    }
  }
  return psi;
}

inline CMatrix unitary(const vineload::Circuit& circuit, const Eigen::VectorXd& params) {
  const Eigen::Index dim = Eigen::Index{1} << circuit.n_qubits();
  CMatrix u = CMatrix::Identity(dim, dim);
  for (const auto& op : circuit.ops()) {
    u = gate_matrix(circuit.n_qubits(), op, params(op.param_slot)) * u;
  }
  return u;
}

// Random RY/CRY circuit; parameters may be shared between gates.
inline vineload::Circuit random_circuit(int n, int n_gates, int n_params, std::mt19937_64& rng) {
  vineload::Circuit c(n);
  c.allocate_params(n_params);
  std::uniform_int_distribution<int> qubit(0, n - 1);
  std::uniform_int_distribution<int> slot(0, n_params - 1);
  std::bernoulli_distribution controlled_gate(n > 1 ? 0.5 : 0.0);
  for (int g = 0; g < n_gates; ++g) {
    const int t = qubit(rng);
    if (controlled_gate(rng)) {
      int ctl = qubit(rng);
      while (ctl == t) ctl = qubit(rng);
      c.add(vineload::GateOp::cry(ctl, t, slot(rng)));
    } else {
      c.add(vineload::GateOp::ry(t, slot(rng)));
    }
  }
  return c;
}

inline Eigen::VectorXd random_params(Eigen::Index n, std::mt19937_64& rng, double scale = 3.14159) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::VectorXd p(n);
  for (auto& v : p) v = u(rng);
  return p;
}

inline Eigen::VectorXd random_unit(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(n);
  for (auto& x : v) x = g(rng);
  return v.normalized();
}

// Central differences of f at p.
inline Eigen::VectorXd finite_difference(const std::function<double(const Eigen::VectorXd&)>& f,
                                         const Eigen::VectorXd& p, double h = 1e-5) {
  Eigen::VectorXd g(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    Eigen::VectorXd a = p, b = p;
    a(i) += h;
    b(i) -= h;
    g(i) = (f(a) - f(b)) / (2 * h);
  }
  return g;
}

// Kendall tau-b straight from the definition: every pair counted once.
inline double kendall_tau(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
  const Eigen::Index n = x.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dx = x(i) - x(j), dy = y(i) - y(j);
      if (dx == 0 && dy == 0) continue;
      if (dx == 0) {
        ++ties_x;
      } else if (dy == 0) {
        ++ties_y;
      } else if ((dx > 0) == (dy > 0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double nx = static_cast<double>(concordant + discordant + ties_y);
  const double ny = static_cast<double>(concordant + discordant + ties_x);
  if (nx == 0 || ny == 0) return 0.0;
  return static_cast<double>(concordant - discordant) / std::sqrt(nx * ny);
}

// Best total weight over every spanning tree of K_n, by enumerating all
// (n-1)-subsets of edges and keeping the acyclic ones.
inline double max_spanning_weight(const Eigen::MatrixXd& w) {
  const int n = static_cast<int>(w.rows());
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  const int m = static_cast<int>(edges.size());
  double best = -1e300;
  std::vector<int> pick(static_cast<std::size_t>(m), 0);
  std::fill(pick.end() - (n - 1), pick.end(), 1);
  do {
    std::vector<int> parent(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
    std::function<int(int)> find = [&](int a) {
      return parent[static_cast<std::size_t>(a)] == a ? a : find(parent[static_cast<std::size_t>(a)]);
    };
    bool tree = true;
    double total = 0.0;
    for (int e = 0; e < m && tree; ++e) {
      if (!pick[static_cast<std::size_t>(e)]) continue;
      const auto [a, b] = edges[static_cast<std::size_t>(e)];
      const int ra = find(a), rb = find(b);
      if (ra == rb) tree = false;
      parent[static_cast<std::size_t>(ra)] = rb;
      total += w(a, b);
    }
    if (tree) best = std::max(best, total);
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

inline double tree_weight(const Eigen::MatrixXd& w, const std::vector<std::pair<int, int>>& edges) {
  double total = 0.0;
  for (const auto& [a, b] : edges) total += w(a, b);
  return total;
}

inline bool is_spanning_tree(int n, const std::vector<std::pair<int, int>>& edges) {
  if (static_cast<int>(edges.size()) != n - 1) return false;
  std::vector<std::set<int>> adj(static_cast<std::size_t>(n));
  for (const auto& [a, b] : edges) {
    adj[static_cast<std::size_t>(a)].insert(b);
    adj[static_cast<std::size_t>(b)].insert(a);
  }
  std::vector<int> seen(static_cast<std::size_t>(n), 0), stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u : adj[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = 1;
        ++count;
        stack.push_back(u);
      }
    }
  }
  return count == n;
}

inline Eigen::MatrixXd random_symmetric(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) w(i, j) = w(j, i) = u(rng);
  }
  return w;
}

// Random correlation-like tau matrix: unit diagonal, entries in (-1, 1).
inline Eigen::MatrixXd random_tau(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  Eigen::MatrixXd t = Eigen::MatrixXd::Identity(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) t(i, j) = t(j, i) = u(rng);
  }
  return t;
}

// Dense discretized Gaussian by direct enumeration of the grid, for
// comparison with the library's table.
inline Eigen::VectorXd gaussian_table(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                                      int k) {
  const int d = static_cast<int>(mu.size());
  const int bins = 1 << k;
  const Eigen::MatrixXd inv = sigma.inverse();
  Eigen::VectorXd p(Eigen::Index{1} << (d * k));
  for (Eigen::Index idx = 0; idx < p.size(); ++idx) {
    Eigen::VectorXd x(d);
    for (int f = 0; f < d; ++f) {
      const int b = static_cast<int>((idx >> ((d - 1 - f) * k)) & (bins - 1));
      const double s = std::sqrt(sigma(f, f));
      const double lo = mu(f) - 3 * s, width = 6 * s / bins;
      x(f) = lo + (b + 0.5) * width;
    }
    const Eigen::VectorXd z = x - mu;
    p(idx) = std::exp(-0.5 * z.dot(inv * z));
  }
  return p / p.sum();
}

// -iY on one qubit and |1><1| (x) -iY on a control/target pair, both real.
inline Eigen::MatrixXd y_skew(int n, int qubit) {
  CMatrix j(2, 2);
  j << 0, -1, 1, 0;
  return embed(n, qubit, j).real();
}

inline Eigen::MatrixXd cy_skew(int n, int control, int target) {
  CMatrix j(2, 2);
  j << 0, -1, 1, 0;
  CMatrix zero = CMatrix::Zero(2, 2);
  return (controlled(n, control, target, j) - controlled(n, control, target, zero)).real();
}

// Level-by-level commutator closure; dimension read off a pivoted QR rank.
inline int lie_dimension(const std::vector<Eigen::MatrixXd>& gens) {
  const Eigen::Index n = gens.front().rows();
  auto rank_of = [&](const std::vector<Eigen::MatrixXd>& ms) {
    Eigen::MatrixXd stack(n * n, static_cast<Eigen::Index>(ms.size()));
    for (std::size_t i = 0; i < ms.size(); ++i) {
      stack.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::VectorXd>(ms[i].data(), n * n);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(stack);
    qr.setThreshold(1e-9);
    const auto r = qr.rank();
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n * n, r);
    std::vector<Eigen::MatrixXd> basis;
    for (Eigen::Index c = 0; c < r; ++c) {
      basis.push_back(Eigen::Map<const Eigen::MatrixXd>(q.col(c).data(), n, n));
    }
    return basis;
  };
  std::vector<Eigen::MatrixXd> span = rank_of(gens);
  for (;;) {
    std::vector<Eigen::MatrixXd> next = span;
    for (const auto& g : gens) {
      for (const auto& h : span) next.push_back(g * h - h * g);
    }
    auto grown = rank_of(next);
    if (grown.size() == span.size()) return static_cast<int>(span.size());
    span = std::move(grown);
  }
}

}  // namespace oracle
