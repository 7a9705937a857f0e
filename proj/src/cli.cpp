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

#include "vineload/cli.hpp"

#include <chrono>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "vineload/dla.hpp"

namespace vineload::cli {

namespace {

Eigen::MatrixXd sigma_3d_corr() {
  Eigen::MatrixXd s(3, 3);
  s << 0.05, 0.03, 0.015,
       0.03, 0.05, -0.01,
       0.015, -0.01, 0.05;
  return s;
}

Eigen::MatrixXd sigma_4d_corr() {
  Eigen::MatrixXd s(4, 4);
  s << 0.05, 0.03, 0.015, 0.01,
       0.03, 0.05, -0.01, 0.02,
       0.015, -0.01, 0.05, 0.025,
       0.01, 0.02, 0.025, 0.05;
  return s;
}

std::string vine_mode_name(VineMode mode) {
  switch (mode) {
    case VineMode::DVine: return "dvine";
    case VineMode::CVine: return "cvine";
    case VineMode::RVine: return "rvine";
    case VineMode::File: return "file";
  }
  return "dvine";
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"gauss3-uncorr", "gauss3-corr", "gauss4", "returns3", "returns4", "smoke2"};
}

RunConfig preset_config(const std::string& name) {
  RunConfig c;
  c.preset = name;
  c.k = 3;
  if (name == "gauss3-uncorr") {
    c.gaussian = GaussianSpec{Eigen::VectorXd::Constant(3, 0.05),
                              0.25 * Eigen::MatrixXd::Identity(3, 3)};
    c.layers_uni = 1;
    c.layers_biv = 1;
    c.train.hierarchical_marginals = false;
  } else if (name == "gauss3-corr") {
    c.gaussian = GaussianSpec{Eigen::VectorXd::Constant(3, 0.05), sigma_3d_corr()};
    // Linear, quadratic and cubic layer counts in k.
    c.layers_uni = 2;
    c.layers_biv = 27;
    c.grid = {{2, 3}, {2, 9}, {2, 27}};
    c.train.max_iters = 10000;
  } else if (name == "gauss4") {
    c.gaussian = GaussianSpec{Eigen::VectorXd::Constant(4, 0.05), sigma_4d_corr()};
    c.layers_uni = 2;
    c.layers_biv = 9;
    c.grid = {{2, 3}, {2, 9}};
    c.train.max_iters = 10000;
  } else if (name == "returns3" || name == "returns4") {
    c.d = name == "returns3" ? 3 : 4;
    c.layers_uni = 2;
    c.layers_biv = name == "returns3" ? 27 : 9;
    c.grid = {{2, 3}, {2, 9}};
  } else if (name == "smoke2") {
    Eigen::MatrixXd s(2, 2);
    s << 1.0, 0.5, 0.5, 1.0;
    c.gaussian = GaussianSpec{Eigen::VectorXd::Zero(2), s};
    c.k = 2;
    c.layers_uni = 1;
    c.layers_biv = 2;
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += " " + n;
    throw UsageError("unknown preset '" + name + "' (known:" + known + ")");
  }
  return c;
}

void RunConfig::validate() const {
  if (k < 1) throw UsageError("k must be >= 1");
  if (layers_uni < 1 || layers_biv < 1) throw UsageError("layer counts must be >= 1");
  if (gaussian) {
    const auto n = gaussian->mu.size();
    if (gaussian->sigma.rows() != n || gaussian->sigma.cols() != n) {
      throw UsageError("covariance dimensions do not match the mean");
    }
    if (d != 0 && d != n) throw UsageError("d does not match the Gaussian dimension");
  }
  const long dims = gaussian ? static_cast<long>(gaussian->mu.size()) : d;
  if (dims != 0 && dims * k > max_qubits) {
    throw UsageError("d*k = " + std::to_string(dims * k) + " exceeds the qubit cap " +
                     std::to_string(max_qubits));
  }
  if (vine_mode == VineMode::File && vine_file.empty()) throw UsageError("vine file not given");
  try {
    train.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

VineMode parse_vine_mode(const std::string& text, std::string* file_out) {
  if (text == "dvine") return VineMode::DVine;
  if (text == "cvine") return VineMode::CVine;
  if (text == "rvine") return VineMode::RVine;
  if (text.rfind("file:", 0) == 0 && text.size() > 5) {
    if (file_out) *file_out = text.substr(5);
    return VineMode::File;
  }
  throw UsageError("--vine expects dvine, cvine, rvine or file:<path>");
}

std::vector<std::pair<int, int>> parse_grid(const std::string& text) {
  std::vector<std::pair<int, int>> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto x = item.find('x');
    try {
      if (x == std::string::npos) throw std::invalid_argument(item);
      std::size_t used_a = 0, used_b = 0;
      const int a = std::stoi(item.substr(0, x), &used_a);
      const int b = std::stoi(item.substr(x + 1), &used_b);
      if (used_a != x || used_b != item.size() - x - 1 || a < 1 || b < 1) {
        throw std::invalid_argument(item);
      }
      grid.emplace_back(a, b);
    } catch (const std::exception&) {
      throw UsageError("grid entries look like <layers_uni>x<layers_biv>, got '" + item + "'");
    }
  }
  return grid;
}

void apply_json(RunConfig& c, const io::json& j) {
  try {
    if (j.contains("preset")) {
      const auto keep_out = c.out_dir;
      c = preset_config(j.at("preset").get<std::string>());
      c.out_dir = keep_out;
    }
    if (j.contains("csv")) c.csv = j.at("csv").get<std::string>();
    if (j.contains("csv_kind")) {
      const auto kind = j.at("csv_kind").get<std::string>();
      if (kind != "prices" && kind != "samples") throw UsageError("csv_kind: prices|samples");
      c.csv_kind = kind == "prices" ? CsvKind::Prices : CsvKind::Samples;
    }
    if (j.contains("gaussian")) {
      const auto& g = j.at("gaussian");
      const auto mu = g.at("mu").get<std::vector<double>>();
      const auto sigma = g.at("sigma").get<std::vector<std::vector<double>>>();
      GaussianSpec spec{Eigen::Map<const Eigen::VectorXd>(mu.data(), static_cast<Eigen::Index>(mu.size())),
                        Eigen::MatrixXd(sigma.size(), sigma.size())};
      for (std::size_t r = 0; r < sigma.size(); ++r) {
        if (sigma[r].size() != sigma.size()) throw UsageError("sigma must be square");
        for (std::size_t col = 0; col < sigma.size(); ++col) {
          spec.sigma(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) = sigma[r][col];
        }
      }
      c.gaussian = std::move(spec);
    }
    if (j.contains("d")) c.d = j.at("d").get<int>();
    if (j.contains("k")) c.k = j.at("k").get<int>();
    if (j.contains("vine")) c.vine_mode = parse_vine_mode(j.at("vine").get<std::string>(), &c.vine_file);
    if (j.contains("layers_uni")) c.layers_uni = j.at("layers_uni").get<int>();
    if (j.contains("layers_biv")) c.layers_biv = j.at("layers_biv").get<int>();
    if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
    if (j.contains("seed")) c.train.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("grid")) c.grid = parse_grid(j.at("grid").get<std::string>());
    if (j.contains("max_qubits")) c.max_qubits = j.at("max_qubits").get<int>();
    if (j.contains("train")) {
      const auto& t = j.at("train");
      auto& tc = c.train;
      tc.lr = t.value("lr", tc.lr);
      tc.adam_beta1 = t.value("adam_beta1", tc.adam_beta1);
      tc.adam_beta2 = t.value("adam_beta2", tc.adam_beta2);
      tc.adam_eps = t.value("adam_eps", tc.adam_eps);
      tc.patience = t.value("patience", tc.patience);
      tc.lr_factor = t.value("lr_factor", tc.lr_factor);
      tc.min_lr = t.value("min_lr", tc.min_lr);
      tc.max_iters = t.value("max_iters", tc.max_iters);
      tc.init_scale = t.value("init_scale", tc.init_scale);
      tc.hierarchical_marginals = t.value("hierarchical_marginals", tc.hierarchical_marginals);
      tc.keep_identity_checkpoint = t.value("keep_identity_checkpoint", tc.keep_identity_checkpoint);
      if (t.contains("loss")) {
        const auto loss = t.at("loss").get<std::string>();
        if (loss != "fidelity" && loss != "sample") throw UsageError("loss: fidelity|sample");
        tc.loss = loss == "fidelity" ? LossKind::Fidelity : LossKind::Sample;
      }
    }
  } catch (const io::json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
}

io::json config_to_json(const RunConfig& c) {
  io::json j{{"preset", c.preset},
             {"csv", c.csv},
             {"csv_kind", c.csv_kind == CsvKind::Prices ? "prices" : "samples"},
             {"d", c.d},
             {"k", c.k},
             {"vine", c.vine_mode == VineMode::File ? "file:" + c.vine_file
                                                    : vine_mode_name(c.vine_mode)},
             {"layers_uni", c.layers_uni},
             {"layers_biv", c.layers_biv},
             {"out", c.out_dir},
             {"seed", c.train.seed},
             {"max_qubits", c.max_qubits},
             {"train",
              {{"lr", c.train.lr},
               {"adam_beta1", c.train.adam_beta1},
               {"adam_beta2", c.train.adam_beta2},
               {"adam_eps", c.train.adam_eps},
               {"patience", c.train.patience},
               {"lr_factor", c.train.lr_factor},
               {"min_lr", c.train.min_lr},
               {"max_iters", c.train.max_iters},
               {"init_scale", c.train.init_scale},
               {"hierarchical_marginals", c.train.hierarchical_marginals},
               {"keep_identity_checkpoint", c.train.keep_identity_checkpoint},
               {"loss", c.train.loss == LossKind::Fidelity ? "fidelity" : "sample"}}}};
  if (c.gaussian) {
    std::vector<std::vector<double>> sigma;
    for (Eigen::Index r = 0; r < c.gaussian->sigma.rows(); ++r) {
      std::vector<double> row;
      for (Eigen::Index col = 0; col < c.gaussian->sigma.cols(); ++col) {
        row.push_back(c.gaussian->sigma(r, col));
      }
      sigma.push_back(std::move(row));
    }
    j["gaussian"] = {{"mu", std::vector<double>(c.gaussian->mu.data(),
                                                c.gaussian->mu.data() + c.gaussian->mu.size())},
                     {"sigma", sigma}};
  }
  return j;
}

Problem load_problem(const RunConfig& config) {
  config.validate();
  Problem p;
  if (!config.csv.empty()) {
    SampleSet samples;
    if (config.csv_kind == CsvKind::Prices) {
      const auto table = io::read_price_csv(config.csv);
      samples = log_returns(table.prices, table.tickers);
    } else {
      samples = io::read_samples_csv(config.csv);
    }
    if (config.d != 0 && samples.values.cols() != config.d) {
      throw UsageError("CSV has " + std::to_string(samples.values.cols()) + " series, expected " +
                       std::to_string(config.d));
    }
    if (samples.values.cols() * config.k > config.max_qubits) {
      throw UsageError("d*k exceeds the qubit cap");
    }
    p.target = discretize(samples, config.k);
    p.tau = tau_matrix(samples.values);
    p.labels = samples.labels;
    p.samples = std::move(samples);
  } else if (config.gaussian) {
    p.target = gaussian_target(config.gaussian->mu, config.gaussian->sigma, config.k);
    p.tau = gaussian_tau(config.gaussian->sigma);
    for (int f = 0; f < p.target.d; ++f) p.labels.push_back("x" + std::to_string(f));
  } else {
    throw UsageError(config.preset.rfind("returns", 0) == 0
                         ? "preset " + config.preset + " needs --csv with price data"
                         : "no input: give --preset, --csv or a gaussian in --config");
  }
  return p;
}

VineStructure select_vine(const RunConfig& config, const Problem& problem) {
  const int d = problem.target.d;
  switch (config.vine_mode) {
    case VineMode::DVine:
      return build_dvine(dvine_order(problem.tau));
    case VineMode::CVine: {
      // Roots by decreasing total |tau| to the other features.
      const Eigen::VectorXd strength = dependence_weights(problem.tau).rowwise().sum();
      std::vector<int> roots(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i) roots[static_cast<std::size_t>(i)] = i;
      std::stable_sort(roots.begin(), roots.end(),
                       [&](int a, int b) { return strength(a) > strength(b); });
      return build_cvine(d, roots);
    }
    case VineMode::RVine:
      return build_rvine_greedy(problem.tau);
    case VineMode::File: {
      auto vine = io::read_vine(config.vine_file);
      if (vine.d != d) throw UsageError("vine file dimension differs from the data");
      return vine;
    }
  }
  throw UsageError("unknown vine mode");
}

VineStructure cmd_fit_vine(const RunConfig& config, std::ostream& out) {
  const Problem problem = load_problem(config);
  const VineStructure vine = select_vine(config, problem);
  const io::fs::path dir = config.out_dir;
  io::write_vine(dir / "vine.json", vine);
  io::write_matrix_csv(dir / "tau.csv", problem.tau, problem.labels);
  out << "vine (" << vine_mode_name(config.vine_mode) << "), d=" << vine.d << ", "
      << vine.trees.size() << " trees, " << vine.n_edges() << " edges\n";
  for (std::size_t t = 0; t < vine.trees.size(); ++t) {
    out << "  T" << t + 1 << ":";
    for (const auto& e : vine.trees[t]) {
      out << ' ' << e.x << ',' << e.y;
      if (!e.conditioning.empty()) {
        out << '|';
        for (std::size_t i = 0; i < e.conditioning.size(); ++i) {
          out << (i ? "," : "") << e.conditioning[i];
        }
      }
    }
    out << '\n';
  }
  out << "wrote " << (dir / "vine.json").string() << ", " << (dir / "tau.csv").string() << '\n';
  return vine;
}

namespace {

TrainOutcome train_and_write(const RunConfig& config, const Problem& problem,
                             const VineStructure& vine, const io::fs::path& dir) {
  const auto start = std::chrono::steady_clock::now();
  TrainOutcome o{vine, train_through_vine(vine, config.k, config.layers_uni, config.layers_biv,
                                          problem.target, config.train),
                 0.0};
  o.seconds = elapsed(start);

  io::write_vine(dir / "vine.json", vine);
  io::write_matrix_csv(dir / "tau.csv", problem.tau, problem.labels);
  io::write_json(dir / "trace.json", io::trace_to_json(o.result.trace));
  io::write_tvd_csv(dir / "tvd_by_block.csv", o.result.trace);
  const Eigen::VectorXd learned = born_probs(o.result.state);
  io::write_distribution_csv(dir / "distribution.csv", learned, problem.target.n_qubits(),
                             &problem.target.probs);
  io::write_json(dir / "target.json", io::distribution_to_json(problem.target));
  io::write_projections(dir, problem.target, learned);
  io::Checkpoint cp{o.result.params, o.result.circuit.blocks,
                    {{"d", vine.d},
                     {"k", config.k},
                     {"layers_uni", config.layers_uni},
                     {"layers_biv", config.layers_biv},
                     {"seed", config.train.seed},
                     {"vine", io::vine_to_json(vine)}}};
  io::write_checkpoint(dir / "checkpoint.bin", dir / "checkpoint.json", cp);
  io::write_json(dir / "config.json", config_to_json(config));
  return o;
}

void print_trace(const TrainTrace& trace, std::ostream& out) {
  out << std::left << std::setw(8) << "block" << std::right << std::setw(14) << "infidelity"
      << std::setw(14) << "tvd" << std::setw(10) << "seconds" << '\n';
  for (const auto& b : trace.blocks) {
    out << std::left << std::setw(8) << b.label << std::right << std::scientific
        << std::setprecision(4) << std::setw(14) << b.final_infidelity << std::setw(14) << b.tvd
        << std::fixed << std::setprecision(2) << std::setw(10) << b.seconds << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

}  // namespace

TrainOutcome cmd_train(const RunConfig& config, std::ostream& out) {
  const Problem problem = load_problem(config);
  const VineStructure vine = select_vine(config, problem);
  const io::fs::path dir = config.out_dir;
  auto o = train_and_write(config, problem, vine, dir);
  out << "trained d=" << vine.d << " k=" << config.k << " L_u=" << config.layers_uni
      << " L_b=" << config.layers_biv << " (" << o.result.params.size() << " parameters) in "
      << std::fixed << std::setprecision(2) << o.seconds << " s\n";
  out.unsetf(std::ios::floatfield);
  print_trace(o.result.trace, out);
  out << "final infidelity " << o.result.final_infidelity << ", final TVD " << o.result.final_tvd
      << "\nwrote outputs to " << dir.string() << '\n';
  return o;
}

std::vector<AblationRow> cmd_ablate(const RunConfig& config, std::ostream& out) {
  if (config.grid.empty()) throw UsageError("ablate needs a non-empty --grid");
  const Problem problem = load_problem(config);
  const VineStructure vine = select_vine(config, problem);
  const io::fs::path dir = config.out_dir;
  std::vector<AblationRow> rows;
  for (const auto& [lu, lb] : config.grid) {
    RunConfig point = config;
    point.layers_uni = lu;
    point.layers_biv = lb;
    const auto sub = dir / ("Lu" + std::to_string(lu) + "_Lb" + std::to_string(lb));
    const auto o = train_and_write(point, problem, vine, sub);
    rows.push_back({lu, lb, o.result.trace.blocks.front().tvd, o.result.final_tvd,
                    o.result.final_infidelity, o.seconds, false});
    out << "L_u=" << lu << " L_b=" << lb << ": TVD " << o.result.final_tvd << ", infidelity "
        << o.result.final_infidelity << '\n';
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].final_tvd < rows[best].final_tvd) best = i;
  }
  rows[best].best = true;
  io::fs::create_directories(dir);
  std::ofstream csv(dir / "ablation.csv");
  csv << "layers_uni,layers_biv,marginal_tvd,final_tvd,final_infidelity,seconds,best\n";
  for (const auto& r : rows) {
    csv << r.layers_uni << ',' << r.layers_biv << ',' << io::format_double(r.marginal_tvd) << ','
        << io::format_double(r.final_tvd) << ',' << io::format_double(r.final_infidelity) << ','
        << io::format_double(r.seconds) << ',' << (r.best ? 1 : 0) << '\n';
  }
  out << "best: L_u=" << rows[best].layers_uni << " L_b=" << rows[best].layers_biv << '\n';
  return rows;
}

ResourceReport cmd_resources(const RunConfig& config, std::ostream& out) {
  config.validate();
  VineStructure vine;
  if (config.gaussian || !config.csv.empty()) {
    vine = select_vine(config, load_problem(config));
  } else {
    const int d = config.d;
    if (d < 2) throw UsageError("resources needs --d >= 2 or an input source");
    std::vector<int> order(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) order[static_cast<std::size_t>(i)] = i;
    switch (config.vine_mode) {
      case VineMode::DVine: vine = build_dvine(order); break;
      case VineMode::CVine: vine = build_cvine(d, order); break;
      case VineMode::File: vine = io::read_vine(config.vine_file); break;
      case VineMode::RVine: throw UsageError("rvine resources need an input source");
    }
  }
  const auto report =
      resource_report(vine.d, config.k, config.layers_uni, config.layers_biv, vine);
  out << "d=" << vine.d << " k=" << config.k << " L_u=" << config.layers_uni
      << " L_b=" << config.layers_biv << '\n'
      << "  trees " << report.n_trees << ", edges " << report.n_edges << ", nodes "
      << report.n_nodes << '\n'
      << "  parameters " << report.n_params << " (closed form " << report.formula_params << ")\n"
      << "  RY gates   " << report.n_ry << " (closed form " << report.formula_ry << ")\n"
      << "  CRY gates  " << report.n_cry << " (closed form " << report.formula_cry << ")\n"
      << "  single-qubit ring correction " << report.degenerate_ring_correction << '\n'
      << "  BEB rounds " << report.beb_rounds << ", block depth " << report.block_depth << '\n';
  io::json j = io::resources_to_json(report);
  j["schedule"] = io::schedule_to_json(schedule_blocks(vine));
  out << j.dump() << '\n';
  if (!config.out_dir.empty()) io::write_json(io::fs::path(config.out_dir) / "resources.json", j);
  return report;
}

bool cmd_verify_dla(const RunConfig& config, std::ostream& out) {
  const auto checks = verify_theorems(config.k, config.dla_include_large);
  out << std::left << std::setw(18) << "generator set" << std::right << std::setw(4) << "m"
      << std::setw(10) << "expected" << std::setw(8) << "found" << std::setw(9) << "seconds"
      << "  result\n";
  bool ok = true;
  for (const auto& c : checks) {
    ok = ok && c.passed;
    out << std::left << std::setw(18) << c.name << std::right << std::setw(4) << c.n_qubits
        << std::setw(10) << c.expected << std::setw(8) << c.found << std::setw(9) << std::fixed
        << std::setprecision(2) << c.seconds << "  " << (c.passed ? "PASS" : "FAIL")
        << (c.max_dim_exceeded ? " (exceeded)" : "") << '\n';
  }
  out.unsetf(std::ios::floatfield);
  if (!config.out_dir.empty()) {
    io::write_json(io::fs::path(config.out_dir) / "dla.json", io::theorem_checks_to_json(checks));
  }
  return ok;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Vine-structured amplitude loading of multivariate distributions"};
  app.require_subcommand(1);

  std::string config_path, preset, csv, csv_kind, out_dir, vine, grid, loss;
  std::uint64_t seed = 0;
  int k = 0, d = 0, layers_uni = 0, layers_biv = 0, max_iters = 0, patience = 0;
  double lr = 0.0;
  bool hierarchical = false, flat_marginals = false, full = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--preset", preset, "experiment preset");
    sub->add_option("--csv", csv, "input CSV (date,<ticker>,... prices by default)");
    sub->add_option("--csv-kind", csv_kind, "prices|samples");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--k", k, "bits per feature");
    sub->add_option("--d", d, "feature count");
    sub->add_option("--layers-uni", layers_uni, "univariate layers L_u");
    sub->add_option("--layers-biv", layers_biv, "bivariate layers L_b");
    sub->add_option("--vine", vine, "dvine|cvine|rvine|file:<path>");
    sub->add_option("--lr", lr, "initial learning rate");
    sub->add_option("--max-iters", max_iters, "iteration cap per block");
    sub->add_option("--patience", patience, "iterations without improvement before lr decay");
    sub->add_option("--loss", loss, "fidelity|sample");
    sub->add_flag("--hierarchical", hierarchical, "train marginals stage by stage");
    sub->add_flag("--flat-marginals", flat_marginals, "train all marginal stages jointly");
  };
  auto* fit = app.add_subcommand("fit-vine", "select a vine structure and write vine.json, tau.csv");
  auto* train = app.add_subcommand("train", "progressively train the vine circuit");
  auto* ablate = app.add_subcommand("ablate", "train over a grid of layer counts");
  auto* resources = app.add_subcommand("resources", "gate, parameter and depth counts");
  auto* dla = app.add_subcommand("verify-dla", "check Lie closure dimensions");
  for (auto* sub : {fit, train, ablate, resources, dla}) common(sub);
  ablate->add_option("--grid", grid, "comma list of <L_u>x<L_b>, e.g. 1x1,2x2");
  dla->add_flag("--full", full, "include the 6-qubit BEB closure");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream help_out, help_err;
    const int code = app.exit(e, help_out, help_err);
    out << help_out.str();
    err << help_err.str();
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  auto given = [&](const char* name) { return sub->count(name) > 0; };
  try {
    RunConfig config;
    if (dla == sub) config.out_dir.clear();
    if (resources == sub) config.out_dir.clear();
    if (given("--config")) apply_json(config, io::read_json(config_path));
    if (given("--preset")) {
      const auto keep_out = config.out_dir;
      const auto file = config_path.empty() ? io::json::object() : io::read_json(config_path);
      config = preset_config(preset);
      config.out_dir = keep_out;
      // File values still override the preset; flags override both.
      io::json rest = file;
      rest.erase("preset");
      apply_json(config, rest);
    }
    if (given("--csv")) config.csv = csv;
    if (given("--csv-kind")) {
      if (csv_kind != "prices" && csv_kind != "samples") throw UsageError("--csv-kind prices|samples");
      config.csv_kind = csv_kind == "prices" ? CsvKind::Prices : CsvKind::Samples;
    }
    if (given("--out")) config.out_dir = out_dir;
    if (given("--seed")) config.train.seed = seed;
    if (given("--k")) config.k = k;
    if (given("--d")) config.d = d;
    if (given("--layers-uni")) config.layers_uni = layers_uni;
    if (given("--layers-biv")) config.layers_biv = layers_biv;
    if (given("--vine")) config.vine_mode = parse_vine_mode(vine, &config.vine_file);
    if (given("--lr")) config.train.lr = lr;
    if (given("--max-iters")) config.train.max_iters = max_iters;
    if (given("--patience")) config.train.patience = patience;
    if (given("--loss")) {
      if (loss != "fidelity" && loss != "sample") throw UsageError("--loss fidelity|sample");
      config.train.loss = loss == "fidelity" ? LossKind::Fidelity : LossKind::Sample;
    }
    if (hierarchical && flat_marginals) {
      throw UsageError("--hierarchical and --flat-marginals are exclusive");
    }
    if (hierarchical) config.train.hierarchical_marginals = true;
    if (flat_marginals) config.train.hierarchical_marginals = false;
    if (sub == ablate && given("--grid")) config.grid = parse_grid(grid);
    config.dla_include_large = full;
    config.validate();

    if (sub == fit) {
      cmd_fit_vine(config, out);
    } else if (sub == train) {
      cmd_train(config, out);
    } else if (sub == ablate) {
      cmd_ablate(config, out);
    } else if (sub == resources) {
      cmd_resources(config, out);
    } else if (sub == dla) {
      return cmd_verify_dla(config, out) ? 0 : 1;
    }
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace vineload::cli
