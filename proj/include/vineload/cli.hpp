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

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "vineload/io.hpp"
#include "vineload/train.hpp"

namespace vineload::cli {

// Bad command-line or config usage; maps to exit status 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GaussianSpec {
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
};

enum class VineMode { DVine, CVine, RVine, File };
enum class CsvKind { Prices, Samples };

struct RunConfig {
  std::string preset;
  std::string csv;
  CsvKind csv_kind = CsvKind::Prices;
  std::optional<GaussianSpec> gaussian;
  int d = 0;  // 0: taken from the input
  int k = 3;
  VineMode vine_mode = VineMode::DVine;
  std::string vine_file;
  int layers_uni = 1;
  int layers_biv = 1;
  TrainConfig train;
  std::string out_dir = "out";
  std::vector<std::pair<int, int>> grid;  // (layers_uni, layers_biv) for ablate
  bool dla_include_large = false;
  int max_qubits = kDefaultMaxQubits;

  void validate() const;
};

// Names accepted by --preset.
std::vector<std::string> preset_names();
// Throws UsageError for an unknown name.
RunConfig preset_config(const std::string& name);

// Overlays the keys present in a JSON config object (see README for schema).
void apply_json(RunConfig& config, const io::json& j);
io::json config_to_json(const RunConfig& config);

VineMode parse_vine_mode(const std::string& text, std::string* file_out);
std::vector<std::pair<int, int>> parse_grid(const std::string& text);

// Everything derived from the input source.
struct Problem {
  DiscreteDistribution target;
  Eigen::MatrixXd tau;
  std::vector<std::string> labels;
  std::optional<SampleSet> samples;
};

Problem load_problem(const RunConfig& config);
VineStructure select_vine(const RunConfig& config, const Problem& problem);

VineStructure cmd_fit_vine(const RunConfig& config, std::ostream& out);

struct TrainOutcome {
  VineStructure vine;
  TrainResult result;
  double seconds = 0.0;
};
TrainOutcome cmd_train(const RunConfig& config, std::ostream& out);

struct AblationRow {
  int layers_uni = 0;
  int layers_biv = 0;
  double marginal_tvd = 0.0;
  double final_tvd = 0.0;
  double final_infidelity = 0.0;
  double seconds = 0.0;
  bool best = false;
};
std::vector<AblationRow> cmd_ablate(const RunConfig& config, std::ostream& out);

ResourceReport cmd_resources(const RunConfig& config, std::ostream& out);

// Returns true iff every closure dimension matched.
bool cmd_verify_dla(const RunConfig& config, std::ostream& out);

// Entry point shared by the executable and tests. Returns the exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vineload::cli
