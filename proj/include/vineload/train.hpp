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
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "vineload/ansatz.hpp"
#include "vineload/statevec.hpp"
#include "vineload/target.hpp"
#include "vineload/vine.hpp"

namespace vineload {

enum class LossKind { Fidelity, Sample };

struct TrainConfig {
  double lr = 0.05;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  int patience = 50;       // iterations without improvement before lr *= lr_factor
  double lr_factor = 0.5;
  double min_lr = 1e-5;
  int max_iters = 2000;    // per block
  double init_scale = 0.1; // new parameters ~ Uniform(-init_scale/2, init_scale/2)
  std::uint64_t seed = 0;
  LossKind loss = LossKind::Fidelity;
  bool hierarchical_marginals = true;
  // A loss drop smaller than this does not count as an improvement.
  double improvement_threshold = 1e-10;
  // Stop a fidelity block once its best loss is at or below this value.
  double loss_floor = 1e-14;
  // Seed each block's best-so-far with the new block at all-zero angles, i.e.
  // the identity, so a block never ends worse than the previous optimum.
  bool keep_identity_checkpoint = true;

  void validate() const;
};

struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  long step = 0;

  explicit AdamState(Eigen::Index n = 0) : m(Eigen::VectorXd::Zero(n)), v(Eigen::VectorXd::Zero(n)) {}
};

// One bias-corrected ADAM update at learning rate `lr`; slots below
// `frozen_below` are left untouched.
void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grads, AdamState& state,
               const TrainConfig& config, double lr, int frozen_below = 0);

struct BlockTrace {
  std::string label;
  std::vector<double> losses;  // loss before each update
  double final_loss = 0.0;     // best loss, the one whose parameters are kept
  double final_infidelity = 0.0;
  double tvd = 0.0;            // TVD after the block
  double seconds = 0.0;
  int param_begin = 0;
  int param_end = 0;
};

struct TrainTrace {
  // Per-register (and per-stage when hierarchical) univariate training.
  std::vector<BlockTrace> marginal_blocks;
  // "M" (all marginals loaded) then one entry per BEB in vine order.
  std::vector<BlockTrace> blocks;
};

// What a block is trained against. Fidelity uses the target amplitudes;
// Sample maximises sum_x weights[x] * |<x|psi>|^2, i.e. the mean squared
// amplitude over a data set whose empirical table is `weights`.
struct Objective {
  LossKind kind = LossKind::Fidelity;
  Eigen::VectorXd target_amps;
  Eigen::VectorXd sample_weights;

  static Objective fidelity(Eigen::VectorXd amps) {
    return {LossKind::Fidelity, std::move(amps), {}};
  }
  static Objective sample(Eigen::VectorXd weights) {
    return {LossKind::Sample, {}, std::move(weights)};
  }
  // Loss value for `state` (1 - F, or minus the sample loss).
  double loss(const RealState& state) const;
};

struct BlockResult {
  Eigen::VectorXd params;
  BlockTrace trace;
};

// Trains the slots at or above circuit.frozen_below(); `params` carries the
// frozen values and the initial guess for the trainable ones. Returns the
// best iterate. Throws TrainingError on a non-finite loss.
BlockResult train_block(const Circuit& circuit, Eigen::VectorXd params, const RealState& input,
                        const Objective& objective, const TrainConfig& config,
                        std::string label = "block");

// Mean of |<x|psi>|^2 over the listed basis states.
double sample_loss(const RealState& state, const std::vector<std::uint64_t>& samples);
double sample_loss(const Circuit& circuit, const Eigen::VectorXd& params, const RealState& input,
                   const std::vector<std::uint64_t>& samples);

struct MarginalResult {
  VineCircuit circuit;  // univariate loaders for all registers, d*k qubits
  Eigen::VectorXd params;
  std::vector<BlockTrace> trace;
};

// `targets[r]` is the 2^k-entry marginal table of feature r.
MarginalResult train_marginals(const std::vector<Eigen::VectorXd>& targets, int k,
                               int layers_uni, const TrainConfig& config, std::mt19937_64& rng);

struct TrainResult {
  VineCircuit circuit;
  Eigen::VectorXd params;
  TrainTrace trace;
  RealState state;
  double final_infidelity = 0.0;
  double final_tvd = 0.0;
};

// Progressive training: marginals first, then one BEB per vine edge, each
// trained against the full joint target while earlier parameters stay frozen.
TrainResult train_through_vine(const VineStructure& vine, int k, int layers_uni, int layers_biv,
                               const DiscreteDistribution& target, const TrainConfig& config);

// Equality of everything in a trace except wall-clock timings.
bool same_numbers(const TrainTrace& a, const TrainTrace& b);

}  // namespace vineload
