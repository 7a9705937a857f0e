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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "vineload/errors.hpp"
#include "vineload/target.hpp"
#include "vineload/vine.hpp"

namespace vineload {
namespace {

using Set = std::set<int>;

// Validator written against the edge labels only: every tree is a spanning
// tree over the previous tree's edges and every edge joins two nodes that
// share a node one level down.
std::string check_vine(const VineStructure& v) {
  if (static_cast<int>(v.trees.size()) != v.d - 1) return "tree count";
  std::vector<std::vector<Set>> endpoints;  // per tree, per edge: endpoint sets
  std::vector<Set> prev_nodes;
  for (int f = 0; f < v.d; ++f) prev_nodes.push_back({f});
  for (std::size_t t = 0; t < v.trees.size(); ++t) {
    const auto& tree = v.trees[t];
    if (static_cast<int>(tree.size()) != v.d - 1 - static_cast<int>(t)) return "tree size";
    std::vector<std::pair<int, int>> links;
    std::vector<Set> next_nodes;
    for (const auto& e : tree) {
      if (static_cast<int>(e.conditioning.size()) != static_cast<int>(t)) return "cond size";
      Set cond(e.conditioning.begin(), e.conditioning.end());
      if (cond.count(e.x) || cond.count(e.y) || e.x == e.y) return "conditioned in cond";
      Set a = cond, b = cond;
      a.insert(e.x);
      b.insert(e.y);
      const auto ia = std::find(prev_nodes.begin(), prev_nodes.end(), a);
      const auto ib = std::find(prev_nodes.begin(), prev_nodes.end(), b);
      if (ia == prev_nodes.end() || ib == prev_nodes.end()) return "node missing";
      const int na = static_cast<int>(ia - prev_nodes.begin());
      const int nb = static_cast<int>(ib - prev_nodes.begin());
      if (t > 0) {
        const auto& ea = endpoints[t - 1][static_cast<std::size_t>(na)];
        const auto& eb = endpoints[t - 1][static_cast<std::size_t>(nb)];
        bool share = false;
        for (int n : ea) share = share || eb.count(n);
        if (!share) return "proximity";
      }
      links.emplace_back(na, nb);
      Set all = a;
      all.insert(e.y);
      next_nodes.push_back(all);
    }
    if (!oracle::is_spanning_tree(static_cast<int>(prev_nodes.size()), links)) return "not a tree";
    std::vector<Set> ends;
    for (const auto& [a, b] : links) ends.push_back({a, b});
    endpoints.push_back(ends);
    prev_nodes = next_nodes;
  }
  return "";
}

std::vector<int> identity(int d) {
  std::vector<int> v(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i)] = i;
  return v;
}

struct Label {
  int x, y;
  std::vector<int> cond;
};

void expect_tree(const std::vector<VineEdge>& tree, const std::vector<Label>& expected) {
  ASSERT_EQ(tree.size(), expected.size());
  for (std::size_t i = 0; i < tree.size(); ++i) {
    EXPECT_EQ(std::minmax(tree[i].x, tree[i].y), std::minmax(expected[i].x, expected[i].y))
        << "edge " << i;
    EXPECT_EQ(tree[i].conditioning, expected[i].cond) << "edge " << i;
  }
}

TEST(PseudoObs, RanksOverNPlusOne) {
  Eigen::MatrixXd s(3, 2);
  s << 3, 1, 1, 1, 2, 2;
  const auto p = pseudo_obs(s);
  EXPECT_TRUE(p.u.col(0).isApprox(Eigen::Vector3d(0.75, 0.25, 0.5)));
  EXPECT_TRUE(p.u.col(1).isApprox(Eigen::Vector3d(0.375, 0.375, 0.75)));
  EXPECT_TRUE(p.degenerate_columns.empty());
}

TEST(PseudoObs, MonotoneColumnIsEvenGridAndConstantFlagged) {
  Eigen::MatrixXd s(4, 2);
  s << -10, 5, 0.5, 5, 2, 5, 100, 5;
  const auto p = pseudo_obs(s);
  EXPECT_TRUE(p.u.col(0).isApprox(Eigen::Vector4d(0.2, 0.4, 0.6, 0.8)));
  EXPECT_EQ(p.degenerate_columns, std::vector<int>{1});
  EXPECT_THROW(pseudo_obs(Eigen::MatrixXd(1, 2)), DataError);
}

TEST(KendallTau, Examples) {
  const Eigen::Vector4d x(1, 2, 3, 4), y(2, 1, 4, 3);
  EXPECT_NEAR(kendall_tau(x, y), 1.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(kendall_tau(x, x), 1.0);
  EXPECT_DOUBLE_EQ(kendall_tau(x, -x), -1.0);
  EXPECT_THROW(kendall_tau(x, Eigen::Vector4d::Constant(2)), DataError);
  EXPECT_THROW(kendall_tau(x, Eigen::Vector3d(1, 2, 3)), LengthMismatchError);
}

TEST(KendallTau, MatchesPairEnumeration) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> len(2, 200), levels(2, 12);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = len(rng);
    // Small integer alphabets force plenty of ties.
    std::uniform_int_distribution<int> value(0, levels(rng));
    Eigen::VectorXd x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x(i) = value(rng);
      y(i) = trial % 2 ? value(rng) : x(i) + value(rng) * 0.5;
    }
    if (x.maxCoeff() == x.minCoeff() || y.maxCoeff() == y.minCoeff()) continue;
    ASSERT_NEAR(kendall_tau(x, y), oracle::kendall_tau(x, y), 1e-12) << "trial " << trial;
    ++checked;
  }
  EXPECT_GT(checked, 900);
}

TEST(KendallTau, SymmetricBoundedAndRankInvariant) {
  std::mt19937_64 rng(32);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd x(60), y(60);
    for (int i = 0; i < 60; ++i) {
      x(i) = g(rng);
      y(i) = 0.5 * x(i) + g(rng);
    }
    const double t = kendall_tau(x, y);
    EXPECT_EQ(t, kendall_tau(y, x));
    EXPECT_LE(std::abs(t), 1.0);
    const Eigen::VectorXd ex = x.array().exp(), cy = y.array().cube();
    EXPECT_NEAR(kendall_tau(ex, cy), t, 1e-15);
  }
}

TEST(TauMatrix, UnitDiagonalAndZeroForConstantColumns) {
  Eigen::MatrixXd s(5, 3);
  s << 1, 2, 7, 2, 1, 7, 3, 4, 7, 4, 3, 7, 5, 5, 7;
  const auto t = tau_matrix(s);
  EXPECT_EQ(t.diagonal(), Eigen::Vector3d::Ones());
  EXPECT_EQ(t(0, 2), 0.0);
  EXPECT_NEAR(t(0, 1), oracle::kendall_tau(s.col(0), s.col(1)), 1e-15);
}

TEST(Mst, TwoFeaturesAndHub) {
  Eigen::MatrixXd w(2, 2);
  w << 0, 0.3, 0.3, 0;
  EXPECT_EQ(first_tree_mst(w), (std::vector<std::pair<int, int>>{{0, 1}}));

  Eigen::MatrixXd hub = Eigen::MatrixXd::Constant(4, 4, 0.1);
  hub.diagonal().setZero();
  for (int v : {0, 1, 3}) hub(2, v) = hub(v, 2) = 0.9;
  auto edges = first_tree_mst(hub);
  for (auto& [a, b] : edges) {
    EXPECT_TRUE(a == 2 || b == 2);
  }
  EXPECT_DOUBLE_EQ(oracle::tree_weight(hub, edges), oracle::max_spanning_weight(hub));
}

TEST(Mst, MatchesExhaustiveSearch) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 2 + trial % 4;
    const auto w = oracle::random_symmetric(d, rng);
    const auto edges = first_tree_mst(w);
    ASSERT_TRUE(oracle::is_spanning_tree(d, edges));
    ASSERT_NEAR(oracle::tree_weight(w, edges), oracle::max_spanning_weight(w), 1e-12);
  }
}

TEST(Mst, TiesBrokenDeterministically) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Constant(4, 4, 0.5);
  w.diagonal().setZero();
  EXPECT_EQ(first_tree_mst(w), (std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {0, 3}}));
}

TEST(Dvine, IdentityOrderFourFeatures) {
  const auto v = build_dvine(identity(4));
  expect_tree(v.trees[0], {{0, 1, {}}, {1, 2, {}}, {2, 3, {}}});
  expect_tree(v.trees[1], {{0, 2, {1}}, {1, 3, {2}}});
  expect_tree(v.trees[2], {{0, 3, {1, 2}}});
  EXPECT_EQ(check_vine(v), "");
}

TEST(Dvine, ReversedThreeAndTwo) {
  const auto v = build_dvine({2, 1, 0});
  expect_tree(v.trees[0], {{2, 1, {}}, {1, 0, {}}});
  expect_tree(v.trees[1], {{2, 0, {1}}});
  EXPECT_EQ(build_dvine({0, 1}).n_edges(), 1u);
  EXPECT_THROW(build_dvine({0, 0, 1}), std::invalid_argument);
}

TEST(DvineOrder, HeuristicPaths) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Identity(3, 3);
  t(0, 1) = t(1, 0) = 0.7;
  t(1, 2) = t(2, 1) = -0.6;
  t(0, 2) = t(2, 0) = 0.1;
  const auto order = dvine_order(t);
  EXPECT_EQ(order[1], 1);
  EXPECT_EQ(dvine_order(Eigen::Matrix2d::Identity()), (std::vector<int>{0, 1}));

  Eigen::MatrixXd s4(4, 4);
  s4 << 0.05, 0.03, 0.015, 0.01, 0.03, 0.05, -0.01, 0.02, 0.015, -0.01, 0.05, 0.025, 0.01,
      0.02, 0.025, 0.05;
  EXPECT_EQ(dvine_order(gaussian_tau(s4)), (std::vector<int>{0, 1, 3, 2}));
}

TEST(DvineOrder, RecoversChain) {
  // Chain 2-0-3-1: strong neighbours, weak everything else.
  Eigen::MatrixXd t = Eigen::MatrixXd::Identity(4, 4);
  auto set = [&](int a, int b, double v) { t(a, b) = t(b, a) = v; };
  set(2, 0, 0.8);
  set(0, 3, 0.7);
  set(3, 1, 0.6);
  set(2, 3, 0.1);
  set(2, 1, 0.05);
  set(0, 1, 0.2);
  auto order = dvine_order(t);
  if (order.front() != 2) std::reverse(order.begin(), order.end());
  EXPECT_EQ(order, (std::vector<int>{2, 0, 3, 1}));
}

TEST(Cvine, StarsRootedInOrder) {
  const auto v3 = build_cvine(3, {0, 1});
  expect_tree(v3.trees[0], {{0, 1, {}}, {0, 2, {}}});
  expect_tree(v3.trees[1], {{1, 2, {0}}});

  const auto v4 = build_cvine(4, {1, 0, 2});
  expect_tree(v4.trees[0], {{1, 0, {}}, {1, 2, {}}, {1, 3, {}}});
  expect_tree(v4.trees[1], {{0, 2, {1}}, {0, 3, {1}}});
  expect_tree(v4.trees[2], {{2, 3, {0, 1}}});
  EXPECT_EQ(check_vine(v4), "");

  EXPECT_EQ(build_cvine(2, {0}), build_dvine({0, 1}));
  EXPECT_THROW(build_cvine(4, {0}), std::invalid_argument);
}

TEST(Rvine, ThreeFeaturesForced) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Identity(3, 3);
  t(0, 2) = t(2, 0) = 0.9;
  t(1, 2) = t(2, 1) = 0.5;
  t(0, 1) = t(1, 0) = 0.1;
  const auto v = build_rvine_greedy(t);
  expect_tree(v.trees[1], {{0, 1, {2}}});
}

TEST(Rvine, StarFirstTreeConnectsThroughHub) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Identity(4, 4);
  for (int v : {1, 2, 3}) t(0, v) = t(v, 0) = 0.8;
  const auto v = build_rvine_greedy(t);
  for (const auto& e : v.trees[1]) EXPECT_EQ(e.conditioning, std::vector<int>{0});
  EXPECT_EQ(check_vine(v), "");
}

TEST(Rvine, IndependentColumnsStillValid) {
  const auto v = build_rvine_greedy(Eigen::MatrixXd::Identity(5, 5));
  EXPECT_EQ(check_vine(v), "");
  EXPECT_EQ(v, build_rvine_greedy(Eigen::MatrixXd::Identity(5, 5)));
}

TEST(Structures, AllBuildersPassIndependentValidator) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 2 + trial % 7;
    auto order = identity(d);
    std::shuffle(order.begin(), order.end(), rng);
    const auto tau = oracle::random_tau(d, rng);
    for (const auto& v : {build_dvine(order), build_cvine(d, order), build_rvine_greedy(tau),
                          build_dvine(dvine_order(tau))}) {
      ASSERT_EQ(check_vine(v), "") << "d=" << d;
      ASSERT_FALSE(validation_error(v).has_value());
      ASSERT_EQ(v.n_edges(), static_cast<std::size_t>(d * (d - 1) / 2));
    }
  }
}

TEST(Structures, DvineAndCvineDifferFromFourFeatures) {
  EXPECT_NE(build_dvine(identity(4)), build_cvine(4, identity(4)));
}

TEST(Validator, RejectsBrokenProximity) {
  // T2 edge 0,3|1 would need nodes {0,1} and {1,3}; the latter is absent.
  EXPECT_THROW(vine_from_labels(4, {{{0, 1, {}}, {1, 2, {}}, {2, 3, {}}},
                                    {{0, 3, {1}}, {1, 3, {2}}},
                                    {{0, 2, {1, 3}}}}),
               StructureError);
  const auto ok = vine_from_labels(4, {{{0, 1, {}}, {1, 2, {}}, {2, 3, {}}},
                                       {{0, 2, {1}}, {1, 3, {2}}},
                                       {{0, 3, {1, 2}}}});
  EXPECT_EQ(ok, build_dvine(identity(4)));

  auto broken = build_dvine(identity(4));
  broken.trees[1].pop_back();
  EXPECT_TRUE(validation_error(broken).has_value());
  EXPECT_THROW(validate(broken), StructureError);
}

TEST(EdgePair, SymmetricDifference) {
  EXPECT_EQ(edge_feature_pair({0, 1}, {1, 2}), std::make_pair(0, 2));
  EXPECT_EQ(edge_feature_pair({0}, {1}), std::make_pair(0, 1));
  EXPECT_EQ(edge_feature_pair({0, 1, 2}, {1, 2, 3}), std::make_pair(0, 3));
  EXPECT_THROW(edge_feature_pair({0, 1}, {2, 3}), StructureError);
  for (const auto& tree : build_dvine(identity(5)).trees) {
    for (const auto& e : tree) {
      const auto [a, b] = edge_feature_pair(e);
      EXPECT_EQ(std::minmax(a, b), std::minmax(e.x, e.y));
    }
  }
}

}  // namespace
}  // namespace vineload
