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

// Synthetic inputs shared by the CLI tests and the acceptance binary.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

namespace fixtures {

// Correlated geometric random walk with `assets` tickers over `rows` business
// days, written as date,<ticker>,... with ISO dates.
inline void write_prices(const std::filesystem::path& path, int rows, int assets,
                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd corr = Eigen::MatrixXd::Constant(assets, assets, 0.3);
  for (int i = 0; i + 1 < assets; ++i) corr(i, i + 1) = corr(i + 1, i) = 0.6;
  corr.diagonal().setOnes();
  const Eigen::MatrixXd chol = corr.llt().matrixL();
  Eigen::VectorXd price = Eigen::VectorXd::LinSpaced(assets, 50.0, 150.0);

  std::ofstream out(path);
  out << "date";
  for (int a = 0; a < assets; ++a) out << ",T" << a;
  out << '\n';
  int y = 2020, m = 1, d = 1;
  for (int r = 0; r < rows; ++r) {
    char date[40];
    std::snprintf(date, sizeof date, "%04d-%02d-%02d", y, m, d);
    out << date;
    for (int a = 0; a < assets; ++a) out << ',' << price(a);
    out << '\n';
    Eigen::VectorXd z(assets);
    for (auto& v : z) v = g(rng);
    const Eigen::VectorXd shock = 0.015 * (chol * z);
    price = (price.array() * shock.array().exp()).matrix();
    if (++d > 28) {
      d = 1;
      if (++m > 12) {
        m = 1;
        ++y;
      }
    }
  }
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("vineload_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures
