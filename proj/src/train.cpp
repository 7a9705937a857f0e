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

#include "vineload/train.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vineload {

void TrainConfig::validate() const {
  if (!(lr > 0.0)) throw std::invalid_argument("lr must be positive");
  if (!(lr_factor > 0.0 && lr_factor < 1.0)) throw std::invalid_argument("lr_factor must be in (0, 1)");
  if (!(init_scale > 0.0)) throw std::invalid_argument("init_scale must be positive");
  if (!(min_lr > 0.0)) throw std::invalid_argument("min_lr must be positive");
  if (patience < 1) throw std::invalid_argument("patience must be >= 1");
  if (max_iters < 0) throw std::invalid_argument("max_iters must be >= 0");
}

void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grads, AdamState& state,
               const TrainConfig& config, double lr, int frozen_below) {
  if (grads.size() != params.size()) throw LengthMismatchError("adam: gradient length");
  if (state.m.size() != params.size()) {
    const Eigen::Index old = state.m.size();
    state.m.conservativeResize(params.size());
    state.v.conservativeResize(params.size());
    if (params.size() > old) {
      state.m.tail(params.size() - old).setZero();
      state.v.tail(params.size() - old).setZero();
    }
  }
  ++state.step;
  const double b1 = config.adam_beta1, b2 = config.adam_beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  for (Eigen::Index i = frozen_below; i < params.size(); ++i) {
    state.m(i) = b1 * state.m(i) + (1.0 - b1) * grads(i);
    state.v(i) = b2 * state.v(i) + (1.0 - b2) * grads(i) * grads(i);
    params(i) -= lr * (state.m(i) / c1) / (std::sqrt(state.v(i) / c2) + config.adam_eps);
  }
}

double Objective::loss(const RealState& state) const {
  if (kind == LossKind::Fidelity) return 1.0 - vineload::fidelity(state, target_amps);
  if (sample_weights.size() != state.dim()) throw LengthMismatchError("sample weight length");
  return -sample_weights.dot(state.amps().cwiseAbs2());
}

double sample_loss(const RealState& state, const std::vector<std::uint64_t>& samples) {
  if (samples.empty()) throw std::invalid_argument("sample loss over an empty data set");
  double acc = 0.0;
  for (auto x : samples) {
    if (x >= static_cast<std::uint64_t>(state.dim())) throw std::out_of_range("sample index");
    const double a = state.amps()(static_cast<Eigen::Index>(x));
    acc += a * a;
  }
  return acc / static_cast<double>(samples.size());
}

double sample_loss(const Circuit& circuit, const Eigen::VectorXd& params, const RealState& input,
                   const std::vector<std::uint64_t>& samples) {
  return sample_loss(run(circuit, params, input), samples);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct LossAndGrad {
  double loss;
  Eigen::VectorXd grad;
};

LossAndGrad evaluate(const Circuit& circuit, const Eigen::VectorXd& params, const RealState& input,
                     const Objective& objective) {
  RealState out = run(circuit, params, input);
  if (objective.kind == LossKind::Fidelity) {
    const double overlap = out.amps().dot(objective.target_amps);
    Eigen::VectorXd g = adjoint_gradient(circuit, params, std::move(out), objective.target_amps);
    return {1.0 - overlap * overlap, -2.0 * overlap * g};
  }
  Eigen::VectorXd weighted = objective.sample_weights.cwiseProduct(out.amps());
  const double value = weighted.dot(out.amps());
  Eigen::VectorXd g = adjoint_gradient(circuit, params, std::move(out), std::move(weighted));
  return {-value, -2.0 * g};
}

Eigen::VectorXd objective_probs(const Objective& objective) {
  return objective.kind == LossKind::Fidelity ? Eigen::VectorXd(objective.target_amps.cwiseAbs2())
                                              : objective.sample_weights;
}

void init_new_params(Eigen::VectorXd& params, int begin, const TrainConfig& config,
                     std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(-config.init_scale / 2, config.init_scale / 2);
  for (Eigen::Index i = begin; i < params.size(); ++i) params(i) = uniform(rng);
}

}  // namespace

BlockResult train_block(const Circuit& circuit, Eigen::VectorXd params, const RealState& input,
                        const Objective& objective, const TrainConfig& config, std::string label) {
  config.validate();
  const auto start = Clock::now();
  const int frozen = circuit.frozen_below();
  const auto& ops = circuit.ops();

  // Gates before the first trainable one never change: run them once.
  std::size_t first = ops.size();
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].param_slot >= frozen) {
      first = i;
      break;
    }
  }
  RealState prefix = input;
  apply_circuit(circuit, params, prefix, 0, first);
  const Circuit suffix = circuit.slice(first, ops.size());

  BlockResult result;
  result.trace.label = std::move(label);
  result.trace.param_begin = frozen;
  result.trace.param_end = circuit.n_params();

  Eigen::VectorXd best = params;
  double best_loss = std::numeric_limits<double>::infinity();
  if (config.keep_identity_checkpoint) {
    Eigen::VectorXd identity = params;
    identity.tail(params.size() - frozen).setZero();
    const double l0 = objective.loss(run(suffix, identity, prefix));
    if (std::isfinite(l0)) {
      best = identity;
      best_loss = l0;
    }
  }

  AdamState adam(params.size());
  double lr = config.lr;
  int wait = 0;
  // The sample loss is non-positive, so only the fidelity loss has a floor.
  const bool floored = objective.kind == LossKind::Fidelity;
  for (int it = 0; it < config.max_iters && !(floored && best_loss <= config.loss_floor); ++it) {
    auto [loss, grad] = evaluate(suffix, params, prefix, objective);
    if (!std::isfinite(loss) || !grad.allFinite()) {
      throw TrainingError("non-finite loss in block " + result.trace.label + " at iteration " +
                          std::to_string(it));
    }
    result.trace.losses.push_back(loss);
    if (loss < best_loss - config.improvement_threshold) {
      best_loss = loss;
      best = params;
      wait = 0;
    } else if (loss < best_loss) {
      best_loss = loss;
      best = params;
      ++wait;
    } else {
      ++wait;
    }
    if (wait >= config.patience) {
      if (lr <= config.min_lr) break;
      lr = std::max(lr * config.lr_factor, config.min_lr);
      wait = 0;
    }
    adam_step(params, grad, adam, config, lr, frozen);
  }

  const RealState out = run(suffix, best, prefix);
  result.trace.final_loss = objective.loss(out);
  const Eigen::VectorXd probs = objective_probs(objective);
  result.trace.final_infidelity =
      objective.kind == LossKind::Fidelity ? result.trace.final_loss
                                           : 1.0 - fidelity(out, probs.cwiseSqrt());
  result.trace.tvd = tvd(probs, born_probs(out));
  result.trace.seconds = seconds_since(start);
  result.params = std::move(best);
  return result;
}

namespace {

Objective make_objective(const Eigen::VectorXd& probs, LossKind kind) {
  return kind == LossKind::Fidelity ? Objective::fidelity(probs.cwiseMax(0.0).cwiseSqrt())
                                    : Objective::sample(probs);
}

// Trains one register's loader in its own k-qubit space.
Eigen::VectorXd train_register(const Eigen::VectorXd& target, int reg, int k, int layers,
                               const TrainConfig& config, std::mt19937_64& rng,
                               std::vector<BlockTrace>& trace) {
  const std::string name = "U" + std::to_string(reg);
  if (!config.hierarchical_marginals) {
    Circuit local(k);
    local.append(build_univariate(0, k, layers, 0).fragment);
    Eigen::VectorXd params = Eigen::VectorXd::Zero(local.n_params());
    init_new_params(params, 0, config, rng);
    auto block = train_block(local, std::move(params), RealState::uniform(k),
                             make_objective(target, config.loss), config, name);
    trace.push_back(std::move(block.trace));
    return block.params;
  }
  Eigen::VectorXd all(0);
  RealState state = RealState::uniform(1);
  for (int j = 1; j <= k; ++j) {
    if (j > 1) state = state.extended_with_plus();
    Circuit local(j);
    local.append(build_sorb(0, j, layers, 0));
    Eigen::VectorXd params = Eigen::VectorXd::Zero(local.n_params());
    init_new_params(params, 0, config, rng);
    auto block = train_block(local, std::move(params), state,
                             make_objective(coarsen(target, k, j), config.loss), config,
                             name + "." + std::to_string(j));
    state = run(local, block.params, state);
    const Eigen::Index old = all.size();
    all.conservativeResize(old + block.params.size());
    all.tail(block.params.size()) = block.params;
    block.trace.param_begin = static_cast<int>(old);
    block.trace.param_end = static_cast<int>(all.size());
    trace.push_back(std::move(block.trace));
  }
  return all;
}

}  // namespace

MarginalResult train_marginals(const std::vector<Eigen::VectorXd>& targets, int k,
                               int layers_uni, const TrainConfig& config, std::mt19937_64& rng) {
  config.validate();
  const int d = static_cast<int>(targets.size());
  if (d < 1) throw std::invalid_argument("no marginal targets");
  MarginalResult result{VineCircuit{Circuit(d * k), {}}, Eigen::VectorXd(0), {}};
  for (int r = 0; r < d; ++r) {
    if (targets[static_cast<std::size_t>(r)].size() != (Eigen::Index{1} << k)) {
      throw LengthMismatchError("marginal table of register " + std::to_string(r) +
                                " is not 2^k long");
    }
    const std::size_t trace_begin = result.trace.size();
    const Eigen::VectorXd local = train_register(targets[static_cast<std::size_t>(r)], r, k,
                                                 layers_uni, config, rng, result.trace);
    const int offset = result.circuit.circuit.n_params();
    const auto fragment = build_univariate(r, k, layers_uni, offset).fragment;
    const std::size_t op_begin = result.circuit.circuit.ops().size();
    result.circuit.circuit.append(fragment);
    result.circuit.blocks.push_back({"U" + std::to_string(r), fragment.param_begin,
                                     fragment.param_end, op_begin,
                                     result.circuit.circuit.ops().size()});
    result.params.conservativeResize(result.params.size() + local.size());
    result.params.tail(local.size()) = local;
    for (std::size_t t = trace_begin; t < result.trace.size(); ++t) {
      result.trace[t].param_begin += offset;
      result.trace[t].param_end += offset;
    }
  }
  return result;
}

TrainResult train_through_vine(const VineStructure& vine, int k, int layers_uni, int layers_biv,
                               const DiscreteDistribution& target, const TrainConfig& config) {
  config.validate();
  validate(vine);
  if (target.d != vine.d || target.k != k) {
    throw LengthMismatchError("target distribution does not match vine dimension or k");
  }
  std::mt19937_64 rng(config.seed);
  const int d = vine.d;
  const auto start = Clock::now();

  std::vector<Eigen::VectorXd> marginals;
  for (int r = 0; r < d; ++r) marginals.push_back(marginal(target, {r}).probs);
  MarginalResult m = train_marginals(marginals, k, layers_uni, config, rng);

  TrainResult result;
  result.circuit = std::move(m.circuit);
  result.params = std::move(m.params);
  result.trace.marginal_blocks = std::move(m.trace);

  const RealState input = RealState::uniform(d * k);
  const Objective objective = make_objective(target.probs, config.loss);
  const Eigen::VectorXd target_amps = target_amplitudes(target);

  auto record = [&](BlockTrace block, const RealState& state) {
    block.final_infidelity = 1.0 - fidelity(state, target_amps);
    block.tvd = tvd(target, born_probs(state));
    result.trace.blocks.push_back(std::move(block));
  };

  RealState state = run(result.circuit.circuit, result.params, input);
  {
    BlockTrace mblock;
    mblock.label = "M";
    mblock.final_loss = objective.loss(state);
    mblock.param_begin = 0;
    mblock.param_end = result.circuit.circuit.n_params();
    mblock.seconds = seconds_since(start);
    record(std::move(mblock), state);
  }

  for (std::size_t t = 0; t < vine.trees.size(); ++t) {
    for (std::size_t e = 0; e < vine.trees[t].size(); ++e) {
      const auto [x, y] = edge_feature_pair(vine.trees[t][e]);
      Circuit& circuit = result.circuit.circuit;
      const int begin = circuit.n_params();
      const std::size_t op_begin = circuit.ops().size();
      circuit.append(build_beb(x, y, k, layers_biv, begin));
      circuit.freeze_below(begin);
      result.circuit.blocks.push_back(
          {beb_label(t, e), begin, circuit.n_params(), op_begin, circuit.ops().size()});

      Eigen::VectorXd params = result.params;
      params.conservativeResize(circuit.n_params());
      init_new_params(params, begin, config, rng);
      auto block = train_block(circuit, std::move(params), input, objective, config,
                               beb_label(t, e));
      result.params = std::move(block.params);
      state = run(circuit, result.params, input);
      record(std::move(block.trace), state);
    }
  }
  result.state = state;
  result.final_infidelity = 1.0 - fidelity(state, target_amps);
  result.final_tvd = tvd(target, born_probs(state));
  return result;
}

namespace {

bool same_block(const BlockTrace& a, const BlockTrace& b) {
  return a.label == b.label && a.losses == b.losses && a.final_loss == b.final_loss &&
         a.final_infidelity == b.final_infidelity && a.tvd == b.tvd &&
         a.param_begin == b.param_begin && a.param_end == b.param_end;
}

bool same_blocks(const std::vector<BlockTrace>& a, const std::vector<BlockTrace>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_block(a[i], b[i])) return false;
  }
  return true;
}

}  // namespace

bool same_numbers(const TrainTrace& a, const TrainTrace& b) {
  return same_blocks(a.marginal_blocks, b.marginal_blocks) && same_blocks(a.blocks, b.blocks);
}

}  // namespace vineload
