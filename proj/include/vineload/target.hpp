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

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "vineload/errors.hpp"

namespace vineload {

// Bin edges of one feature: 2^k + 1 increasing values.
struct FeatureBins {
  std::vector<double> edges;

  double lower() const { return edges.front(); }
  double center(std::size_t bin) const { return 0.5 * (edges[bin] + edges[bin + 1]); }
  double width(std::size_t bin) const { return edges[bin + 1] - edges[bin]; }
  bool operator==(const FeatureBins&) const = default;
};

// Probability table over d features at k bits each. Index bits are laid out
// feature 0 first, most significant bit first within a feature.
struct DiscreteDistribution {
  int d = 0;
  int k = 0;
  Eigen::VectorXd probs;
  std::vector<FeatureBins> bins;

  int n_qubits() const { return d * k; }
  // Bin of feature `f` encoded in the flat index.
  std::size_t bin_of(std::size_t index, int f) const;
};

struct SampleSet {
  Eigen::MatrixXd values;  // n rows, d columns
  std::vector<std::string> labels;
};

enum class BinningPolicy { EqualWidth, Quantile };

struct DiscretizeOptions {
  double range_pad = 0.01;
  BinningPolicy policy = BinningPolicy::EqualWidth;
};

DiscreteDistribution discretize(const SampleSet& samples, int k,
                                const DiscretizeOptions& options = {});

// Per-feature [lo, hi] domain.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Multivariate normal density at bin centres times bin volume, renormalised.
// An empty `ranges` defaults to mu_i +/- 3 sigma_i. Throws DataError for a
// covariance that is not positive definite.
DiscreteDistribution gaussian_target(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                                     int k, std::vector<Interval> ranges = {});

// Kendall tau of a bivariate normal with the given covariance, 2/pi asin(rho).
Eigen::MatrixXd gaussian_tau(const Eigen::MatrixXd& sigma);

// Element-wise square root: the amplitudes of the encoded state.
Eigen::VectorXd target_amplitudes(const DiscreteDistribution& dist);

// Sums out every feature not in `features`. The result keeps the listed
// features in ascending order.
DiscreteDistribution marginal(const DiscreteDistribution& dist, std::vector<int> features);

// Coarsens feature tables to their `bits` most significant bits.
Eigen::VectorXd coarsen(const Eigen::VectorXd& probs, int k, int bits);

// Flat table index of every sample row under `grid`'s bins.
std::vector<std::uint64_t> encode_samples(const DiscreteDistribution& grid,
                                          const SampleSet& samples);

double tvd(const Eigen::VectorXd& p, const Eigen::VectorXd& q);
double tvd(const DiscreteDistribution& p, const Eigen::VectorXd& q);

// Rows t = log(p(t) / p(t-1)) for a T x m price matrix.
SampleSet log_returns(const Eigen::MatrixXd& prices, std::vector<std::string> labels = {});

void check_distribution(const DiscreteDistribution& dist, double tolerance = 1e-9);

}  // namespace vineload
