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

#include "vineload/target.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>

namespace vineload {

std::size_t DiscreteDistribution::bin_of(std::size_t index, int f) const {
  const int shift = (d - 1 - f) * k;
  return (index >> shift) & ((std::size_t{1} << k) - 1);
}

namespace {

std::size_t table_size(int d, int k) {
  if (d < 1 || k < 1) throw std::invalid_argument("need d >= 1 and k >= 1");
  if (d * k > 30) throw CapacityError("table of 2^" + std::to_string(d * k) + " entries");
  return std::size_t{1} << (d * k);
}

FeatureBins equal_width_bins(double lo, double hi, int k) {
  const std::size_t n = std::size_t{1} << k;
  FeatureBins b;
  b.edges.resize(n + 1);
  const double h = (hi - lo) / static_cast<double>(n);
  for (std::size_t l = 0; l <= n; ++l) b.edges[l] = lo + static_cast<double>(l) * h;
  b.edges[n] = hi;
  return b;
}

std::size_t locate(const FeatureBins& bins, double v) {
  // upper_bound over the interior edges gives the bin directly.
  const auto first = bins.edges.begin() + 1;
  const auto last = bins.edges.end() - 1;
  return static_cast<std::size_t>(std::upper_bound(first, last, v) - first);
}

}  // namespace

DiscreteDistribution discretize(const SampleSet& samples, int k,
                                const DiscretizeOptions& options) {
  const Eigen::MatrixXd& x = samples.values;
  const int d = static_cast<int>(x.cols());
  if (x.rows() < 1) throw DataError("discretize needs at least one sample");
  if (!x.allFinite()) throw DataError("samples contain non-finite values");
  DiscreteDistribution dist;
  dist.d = d;
  dist.k = k;
  dist.probs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(table_size(d, k)));
  const std::size_t n_bins = std::size_t{1} << k;

  for (int f = 0; f < d; ++f) {
    const double lo = x.col(f).minCoeff();
    const double hi = x.col(f).maxCoeff();
    if (hi == lo) {
      // Unit-width fallback: every sample lands in bin 0.
      dist.bins.push_back(equal_width_bins(lo - 0.5, lo - 0.5 + static_cast<double>(n_bins), k));
      continue;
    }
    const double pad = options.range_pad * (hi - lo);
    if (options.policy == BinningPolicy::EqualWidth) {
      dist.bins.push_back(equal_width_bins(lo - pad, hi + pad, k));
      continue;
    }
    std::vector<double> sorted(x.col(f).data(), x.col(f).data() + x.rows());
    std::sort(sorted.begin(), sorted.end());
    FeatureBins b;
    b.edges.resize(n_bins + 1);
    b.edges.front() = lo - pad;
    b.edges.back() = hi + pad;
    for (std::size_t l = 1; l < n_bins; ++l) {
      const double pos = static_cast<double>(l) / static_cast<double>(n_bins) *
                         static_cast<double>(sorted.size() - 1);
      const auto i = static_cast<std::size_t>(pos);
      const double frac = pos - static_cast<double>(i);
      const double next = sorted[std::min(i + 1, sorted.size() - 1)];
      b.edges[l] = sorted[i] + frac * (next - sorted[i]);
    }
    dist.bins.push_back(std::move(b));
  }

  const double weight = 1.0 / static_cast<double>(x.rows());
  for (const auto index : encode_samples(dist, samples)) {
    dist.probs(static_cast<Eigen::Index>(index)) += weight;
  }
  dist.probs /= dist.probs.sum();
  return dist;
}

std::vector<std::uint64_t> encode_samples(const DiscreteDistribution& grid,
                                          const SampleSet& samples) {
  const Eigen::MatrixXd& x = samples.values;
  if (x.cols() != grid.d) throw LengthMismatchError("sample width differs from grid");
  std::vector<std::uint64_t> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index row = 0; row < x.rows(); ++row) {
    std::uint64_t index = 0;
    for (int f = 0; f < grid.d; ++f) {
      index = (index << grid.k) | locate(grid.bins[static_cast<std::size_t>(f)], x(row, f));
    }
    out[static_cast<std::size_t>(row)] = index;
  }
  return out;
}

DiscreteDistribution gaussian_target(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                                     int k, std::vector<Interval> ranges) {
  const int d = static_cast<int>(mu.size());
  if (sigma.rows() != d || sigma.cols() != d) {
    throw LengthMismatchError("covariance dimensions do not match the mean");
  }
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw DataError("covariance is not symmetric");
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) throw DataError("covariance is not positive definite");
  if (ranges.empty()) {
    for (int f = 0; f < d; ++f) {
      const double s = std::sqrt(sigma(f, f));
      ranges.push_back({mu(f) - 3.0 * s, mu(f) + 3.0 * s});
    }
  }
  if (static_cast<int>(ranges.size()) != d) throw LengthMismatchError("one range per feature");

  DiscreteDistribution dist;
  dist.d = d;
  dist.k = k;
  const std::size_t size = table_size(d, k);
  for (const auto& r : ranges) {
    if (!(r.hi > r.lo)) throw DataError("empty feature range");
    dist.bins.push_back(equal_width_bins(r.lo, r.hi, k));
  }
  const Eigen::MatrixXd L = llt.matrixL();
  const double log_det = 2.0 * L.diagonal().array().log().sum();
  const double log_norm = -0.5 * (d * std::log(2.0 * std::numbers::pi) + log_det);

  dist.probs.resize(static_cast<Eigen::Index>(size));
  Eigen::VectorXd centre(d);
  for (std::size_t index = 0; index < size; ++index) {
    double volume = 1.0;
    for (int f = 0; f < d; ++f) {
      const auto& b = dist.bins[static_cast<std::size_t>(f)];
      const std::size_t bin = dist.bin_of(index, f);
      centre(f) = b.center(bin);
      volume *= b.width(bin);
    }
    const Eigen::VectorXd z = L.triangularView<Eigen::Lower>().solve(centre - mu);
    dist.probs(static_cast<Eigen::Index>(index)) =
        std::exp(log_norm - 0.5 * z.squaredNorm()) * volume;
  }
  dist.probs /= dist.probs.sum();
  return dist;
}

Eigen::MatrixXd gaussian_tau(const Eigen::MatrixXd& sigma) {
  const Eigen::Index d = sigma.rows();
  Eigen::MatrixXd tau(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double rho = sigma(i, j) / std::sqrt(sigma(i, i) * sigma(j, j));
      tau(i, j) = 2.0 / std::numbers::pi * std::asin(std::clamp(rho, -1.0, 1.0));
    }
  }
  return tau;
}

Eigen::VectorXd target_amplitudes(const DiscreteDistribution& dist) {
  return dist.probs.cwiseMax(0.0).cwiseSqrt();
}

DiscreteDistribution marginal(const DiscreteDistribution& dist, std::vector<int> features) {
  std::sort(features.begin(), features.end());
  features.erase(std::unique(features.begin(), features.end()), features.end());
  if (features.empty()) throw std::invalid_argument("marginal over an empty feature set");
  for (int f : features) {
    if (f < 0 || f >= dist.d) throw std::out_of_range("marginal feature out of range");
  }
  DiscreteDistribution out;
  out.d = static_cast<int>(features.size());
  out.k = dist.k;
  out.probs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(table_size(out.d, out.k)));
  for (int f : features) out.bins.push_back(dist.bins.at(static_cast<std::size_t>(f)));
  for (Eigen::Index i = 0; i < dist.probs.size(); ++i) {
    std::size_t j = 0;
    for (int f : features) j = (j << dist.k) | dist.bin_of(static_cast<std::size_t>(i), f);
    out.probs(static_cast<Eigen::Index>(j)) += dist.probs(i);
  }
  return out;
}

Eigen::VectorXd coarsen(const Eigen::VectorXd& probs, int k, int bits) {
  if (bits < 1 || bits > k) throw std::invalid_argument("coarsen: need 1 <= bits <= k");
  int total = 0;
  while ((Eigen::Index{1} << total) < probs.size()) ++total;
  if ((Eigen::Index{1} << total) != probs.size() || total % k != 0) {
    throw LengthMismatchError("table size is not 2^(d*k)");
  }
  const int d = total / k;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(Eigen::Index{1} << (d * bits));
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    std::size_t j = 0;
    for (int f = 0; f < d; ++f) {
      const std::size_t bin = (static_cast<std::size_t>(i) >> ((d - 1 - f) * k)) &
                              ((std::size_t{1} << k) - 1);
      j = (j << bits) | (bin >> (k - bits));
    }
    out(static_cast<Eigen::Index>(j)) += probs(i);
  }
  return out;
}

double tvd(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size()) throw LengthMismatchError("tvd: lengths differ");
  return 0.5 * (p - q).cwiseAbs().sum();
}

double tvd(const DiscreteDistribution& p, const Eigen::VectorXd& q) { return tvd(p.probs, q); }

SampleSet log_returns(const Eigen::MatrixXd& prices, std::vector<std::string> labels) {
  if (prices.rows() < 2) throw DataError("log returns need at least two time points");
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != prices.cols()) {
    throw LengthMismatchError("one label per asset");
  }
  for (Eigen::Index t = 0; t < prices.rows(); ++t) {
    for (Eigen::Index c = 0; c < prices.cols(); ++c) {
      if (!(prices(t, c) > 0.0) || !std::isfinite(prices(t, c))) {
        throw DataError("non-positive price at row " + std::to_string(t) + ", column " +
                        std::to_string(c));
      }
    }
  }
  SampleSet s;
  const Eigen::Index n = prices.rows() - 1;
  s.values = (prices.bottomRows(n).array() / prices.topRows(n).array()).log();
  s.labels = std::move(labels);
  return s;
}

void check_distribution(const DiscreteDistribution& dist, double tolerance) {
  if (dist.probs.size() != (Eigen::Index{1} << (dist.d * dist.k))) {
    throw LengthMismatchError("table size is not 2^(d*k)");
  }
  if ((dist.probs.array() < 0.0).any()) throw DataError("negative probability");
  if (std::abs(dist.probs.sum() - 1.0) > tolerance) throw DataError("probabilities do not sum to 1");
}

}  // namespace vineload
