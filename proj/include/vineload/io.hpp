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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"
#include "vineload/ansatz.hpp"
#include "vineload/dla.hpp"
#include "vineload/target.hpp"
#include "vineload/train.hpp"
#include "vineload/vine.hpp"

namespace vineload::io {

using nlohmann::json;
namespace fs = std::filesystem;

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

// {"d": d, "trees": [[{"conditioned": [x, y], "conditioning": [...]}, ...], ...]}
json vine_to_json(const VineStructure& vine);
VineStructure vine_from_json(const json& j);
void write_vine(const fs::path& path, const VineStructure& vine);
VineStructure read_vine(const fs::path& path);

void write_matrix_csv(const fs::path& path, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& labels);
Eigen::MatrixXd read_matrix_csv(const fs::path& path);

// Daily close prices: header `date,<ticker>,...`, ISO-8601 dates strictly
// increasing, no empty cells.
struct PriceTable {
  std::vector<std::string> dates;
  std::vector<std::string> tickers;
  Eigen::MatrixXd prices;  // rows = dates, cols = tickers
};
PriceTable parse_price_csv(std::istream& in);
PriceTable read_price_csv(const fs::path& path);

// Plain numeric samples with a header row of labels.
SampleSet parse_samples_csv(std::istream& in);
SampleSet read_samples_csv(const fs::path& path);

// `bitstring,probability[,target]` rows.
struct DistributionRow {
  std::string bitstring;
  double probability = 0.0;
  double target = 0.0;
};
void write_distribution_csv(const fs::path& path, const Eigen::VectorXd& probs, int n_bits,
                            const Eigen::VectorXd* target = nullptr);
std::vector<DistributionRow> read_distribution_csv(const fs::path& path);
json distribution_to_json(const DiscreteDistribution& dist);
DiscreteDistribution distribution_from_json(const json& j);

json trace_to_json(const TrainTrace& trace);
TrainTrace trace_from_json(const json& j);
// block,final_loss,infidelity,tvd,seconds
void write_tvd_csv(const fs::path& path, const TrainTrace& trace);

// checkpoint.bin holds the parameters as little-endian IEEE-754 float64;
// the sidecar JSON lists block boundaries and run metadata.
struct Checkpoint {
  Eigen::VectorXd params;
  std::vector<BlockBoundary> blocks;
  json meta;
};
void write_checkpoint(const fs::path& bin_path, const fs::path& sidecar_path,
                      const Checkpoint& checkpoint);
Checkpoint read_checkpoint(const fs::path& bin_path, const fs::path& sidecar_path);

json resources_to_json(const ResourceReport& report);
json schedule_to_json(const Schedule& schedule);
json theorem_checks_to_json(const std::vector<TheoremCheck>& checks);

// projections_<f>.csv for every feature and projections_<f>_<g>.csv for every
// pair: bin indices, bin centres, learned and target probabilities.
std::vector<fs::path> write_projections(const fs::path& dir, const DiscreteDistribution& target,
                                        const Eigen::VectorXd& learned);

void write_json(const fs::path& path, const json& j);
json read_json(const fs::path& path);

}  // namespace vineload::io
