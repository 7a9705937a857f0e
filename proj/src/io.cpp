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

#include "vineload/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace vineload::io {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw ParseError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::vector<std::string> split_csv(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_number(const std::string& cell, std::size_t line) {
  std::size_t b = cell.find_first_not_of(" \t");
  std::size_t e = cell.find_last_not_of(" \t");
  if (b == std::string::npos) throw ParseError("empty cell", line);
  double value = 0.0;
  const char* first = cell.data() + b;
  const char* last = cell.data() + e + 1;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ParseError("not a number: '" + cell + "'", line);
  }
  return value;
}

bool is_iso_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  const int month = std::stoi(s.substr(5, 2));
  const int day = std::stoi(s.substr(8, 2));
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

Eigen::MatrixXd rows_to_matrix(const std::vector<std::vector<double>>& rows, std::size_t cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

}  // namespace

json vine_to_json(const VineStructure& vine) {
  json trees = json::array();
  for (const auto& tree : vine.trees) {
    json edges = json::array();
    for (const auto& e : tree) {
      edges.push_back({{"conditioned", {e.x, e.y}}, {"conditioning", e.conditioning}});
    }
    trees.push_back(std::move(edges));
  }
  return {{"d", vine.d}, {"trees", std::move(trees)}};
}

VineStructure vine_from_json(const json& j) {
  try {
    const int d = j.at("d").get<int>();
    std::vector<std::vector<EdgeLabel>> trees;
    for (const auto& jt : j.at("trees")) {
      std::vector<EdgeLabel> tree;
      for (const auto& je : jt) {
        const auto pair = je.at("conditioned").get<std::vector<int>>();
        if (pair.size() != 2) throw StructureError("conditioned must list two features");
        tree.push_back({pair[0], pair[1], je.value("conditioning", std::vector<int>{})});
      }
      trees.push_back(std::move(tree));
    }
    return vine_from_labels(d, trees);
  } catch (const json::exception& e) {
    throw ParseError(std::string("vine JSON: ") + e.what());
  }
}

void write_json(const fs::path& path, const json& j) { open_out(path) << j.dump(2) << '\n'; }

json read_json(const fs::path& path) {
  auto in = open_in(path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_vine(const fs::path& path, const VineStructure& vine) {
  write_json(path, vine_to_json(vine));
}

VineStructure read_vine(const fs::path& path) { return vine_from_json(read_json(path)); }

void write_matrix_csv(const fs::path& path, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& labels) {
  auto out = open_out(path);
  out << "feature";
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    out << ',' << (static_cast<std::size_t>(c) < labels.size() ? labels[static_cast<std::size_t>(c)]
                                                               : std::to_string(c));
  }
  out << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out << (static_cast<std::size_t>(r) < labels.size() ? labels[static_cast<std::size_t>(r)]
                                                        : std::to_string(r));
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << ',' << format_double(m(r, c));
    out << '\n';
  }
}

Eigen::MatrixXd read_matrix_csv(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty matrix file", 1);
  const std::size_t cols = split_csv(line).size() - 1;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != cols + 1) throw ParseError("wrong number of cells", line_no);
    std::vector<double> row;
    for (std::size_t c = 1; c < cells.size(); ++c) row.push_back(parse_number(cells[c], line_no));
    rows.push_back(std::move(row));
  }
  return rows_to_matrix(rows, cols);
}

PriceTable parse_price_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty price file", 1);
  auto header = split_csv(line);
  if (header.size() < 2 || header[0] != "date") {
    throw ParseError("header must be date,<ticker>,...", 1);
  }
  PriceTable table;
  table.tickers.assign(header.begin() + 1, header.end());
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " cells, found " +
                           std::to_string(cells.size()),
                       line_no);
    }
    if (!is_iso_date(cells[0])) throw ParseError("bad date '" + cells[0] + "'", line_no);
    if (!table.dates.empty() && !(table.dates.back() < cells[0])) {
      throw ParseError("dates must be strictly increasing", line_no);
    }
    std::vector<double> row;
    for (std::size_t c = 1; c < cells.size(); ++c) {
      const double p = parse_number(cells[c], line_no);
      if (!(p > 0.0)) throw ParseError("non-positive price", line_no);
      row.push_back(p);
    }
    table.dates.push_back(cells[0]);
    rows.push_back(std::move(row));
  }
  table.prices = rows_to_matrix(rows, table.tickers.size());
  return table;
}

PriceTable read_price_csv(const fs::path& path) {
  auto in = open_in(path);
  return parse_price_csv(in);
}

SampleSet parse_samples_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty sample file", 1);
  SampleSet s;
  s.labels = split_csv(line);
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    if (cells.size() != s.labels.size()) throw ParseError("wrong number of cells", line_no);
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_number(c, line_no));
    rows.push_back(std::move(row));
  }
  s.values = rows_to_matrix(rows, s.labels.size());
  return s;
}

SampleSet read_samples_csv(const fs::path& path) {
  auto in = open_in(path);
  return parse_samples_csv(in);
}

void write_distribution_csv(const fs::path& path, const Eigen::VectorXd& probs, int n_bits,
                            const Eigen::VectorXd* target) {
  auto out = open_out(path);
  out << "bitstring,probability" << (target ? ",target" : "") << '\n';
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    out << bitstring(static_cast<std::uint64_t>(i), n_bits) << ',' << format_double(probs(i));
    if (target) out << ',' << format_double((*target)(i));
    out << '\n';
  }
}

std::vector<DistributionRow> read_distribution_csv(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty distribution file", 1);
  const bool has_target = split_csv(line).size() == 3;
  std::vector<DistributionRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != (has_target ? 3u : 2u)) throw ParseError("wrong number of cells", line_no);
    DistributionRow row{cells[0], parse_number(cells[1], line_no), 0.0};
    if (has_target) row.target = parse_number(cells[2], line_no);
    rows.push_back(std::move(row));
  }
  return rows;
}

json distribution_to_json(const DiscreteDistribution& dist) {
  json bins = json::array();
  for (const auto& b : dist.bins) bins.push_back(b.edges);
  return {{"d", dist.d},
          {"k", dist.k},
          {"bin_edges", std::move(bins)},
          {"probs", std::vector<double>(dist.probs.data(), dist.probs.data() + dist.probs.size())}};
}

DiscreteDistribution distribution_from_json(const json& j) {
  DiscreteDistribution dist;
  dist.d = j.at("d").get<int>();
  dist.k = j.at("k").get<int>();
  for (const auto& b : j.at("bin_edges")) dist.bins.push_back({b.get<std::vector<double>>()});
  const auto probs = j.at("probs").get<std::vector<double>>();
  dist.probs = Eigen::Map<const Eigen::VectorXd>(probs.data(), static_cast<Eigen::Index>(probs.size()));
  check_distribution(dist);
  return dist;
}

namespace {

json block_to_json(const BlockTrace& b) {
  return {{"label", b.label},         {"losses", b.losses},
          {"final_loss", b.final_loss}, {"final_infidelity", b.final_infidelity},
          {"tvd", b.tvd},             {"seconds", b.seconds},
          {"param_begin", b.param_begin}, {"param_end", b.param_end}};
}

BlockTrace block_from_json(const json& j) {
  BlockTrace b;
  b.label = j.at("label").get<std::string>();
  b.losses = j.at("losses").get<std::vector<double>>();
  b.final_loss = j.at("final_loss").get<double>();
  b.final_infidelity = j.at("final_infidelity").get<double>();
  b.tvd = j.at("tvd").get<double>();
  b.seconds = j.at("seconds").get<double>();
  b.param_begin = j.at("param_begin").get<int>();
  b.param_end = j.at("param_end").get<int>();
  return b;
}

}  // namespace

json trace_to_json(const TrainTrace& trace) {
  json marg = json::array(), blocks = json::array();
  for (const auto& b : trace.marginal_blocks) marg.push_back(block_to_json(b));
  for (const auto& b : trace.blocks) blocks.push_back(block_to_json(b));
  return {{"marginal_blocks", std::move(marg)}, {"blocks", std::move(blocks)}};
}

TrainTrace trace_from_json(const json& j) {
  TrainTrace t;
  for (const auto& b : j.at("marginal_blocks")) t.marginal_blocks.push_back(block_from_json(b));
  for (const auto& b : j.at("blocks")) t.blocks.push_back(block_from_json(b));
  return t;
}

void write_tvd_csv(const fs::path& path, const TrainTrace& trace) {
  auto out = open_out(path);
  out << "step,block,final_loss,infidelity,tvd,seconds\n";
  for (std::size_t i = 0; i < trace.blocks.size(); ++i) {
    const auto& b = trace.blocks[i];
    out << i << ',' << b.label << ',' << format_double(b.final_loss) << ','
        << format_double(b.final_infidelity) << ',' << format_double(b.tvd) << ','
        << format_double(b.seconds) << '\n';
  }
}

void write_checkpoint(const fs::path& bin_path, const fs::path& sidecar_path,
                      const Checkpoint& checkpoint) {
  auto out = open_out(bin_path, std::ios::binary);
  for (Eigen::Index i = 0; i < checkpoint.params.size(); ++i) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(checkpoint.params(i));
    unsigned char bytes[8];
    for (int b = 0; b < 8; ++b) bytes[b] = static_cast<unsigned char>(bits >> (8 * b));
    out.write(reinterpret_cast<const char*>(bytes), 8);
  }
  json blocks = json::array();
  for (const auto& b : checkpoint.blocks) {
    blocks.push_back({{"label", b.label},
                      {"param_begin", b.param_begin},
                      {"param_end", b.param_end},
                      {"op_begin", b.op_begin},
                      {"op_end", b.op_end}});
  }
  write_json(sidecar_path, {{"format", "float64-le"},
                            {"n_params", checkpoint.params.size()},
                            {"blocks", std::move(blocks)},
                            {"meta", checkpoint.meta}});
}

Checkpoint read_checkpoint(const fs::path& bin_path, const fs::path& sidecar_path) {
  const json side = read_json(sidecar_path);
  Checkpoint c;
  const auto n = side.at("n_params").get<Eigen::Index>();
  auto in = open_in(bin_path, std::ios::binary);
  c.params.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    unsigned char bytes[8];
    if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw ParseError("checkpoint truncated");
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= std::uint64_t{bytes[b]} << (8 * b);
    c.params(i) = std::bit_cast<double>(bits);
  }
  for (const auto& b : side.at("blocks")) {
    c.blocks.push_back({b.at("label").get<std::string>(), b.at("param_begin").get<int>(),
                        b.at("param_end").get<int>(), b.at("op_begin").get<std::size_t>(),
                        b.at("op_end").get<std::size_t>()});
  }
  c.meta = side.value("meta", json::object());
  return c;
}

json resources_to_json(const ResourceReport& r) {
  return {{"n_trees", r.n_trees},
          {"n_edges", r.n_edges},
          {"n_nodes", r.n_nodes},
          {"n_params", r.n_params},
          {"n_ry", r.n_ry},
          {"n_cry", r.n_cry},
          {"formula_params", r.formula_params},
          {"formula_ry", r.formula_ry},
          {"formula_cry", r.formula_cry},
          {"degenerate_ring_correction", r.degenerate_ring_correction},
          {"beb_rounds", r.beb_rounds},
          {"block_depth", r.block_depth}};
}

json schedule_to_json(const Schedule& s) {
  return {{"rounds", s.rounds}, {"beb_rounds", s.beb_rounds}, {"block_depth", s.block_depth}};
}

json theorem_checks_to_json(const std::vector<TheoremCheck>& checks) {
  json out = json::array();
  for (const auto& c : checks) {
    out.push_back({{"name", c.name},
                   {"n_qubits", c.n_qubits},
                   {"expected", c.expected},
                   {"found", c.found},
                   {"max_dim_exceeded", c.max_dim_exceeded},
                   {"passed", c.passed},
                   {"seconds", c.seconds}});
  }
  return out;
}

std::vector<fs::path> write_projections(const fs::path& dir, const DiscreteDistribution& target,
                                        const Eigen::VectorXd& learned) {
  if (learned.size() != target.probs.size()) throw LengthMismatchError("projection lengths");
  DiscreteDistribution learned_dist = target;
  learned_dist.probs = learned;
  std::vector<fs::path> written;
  for (int f = 0; f < target.d; ++f) {
    const auto t = marginal(target, {f});
    const auto l = marginal(learned_dist, {f});
    const fs::path path = dir / ("projections_" + std::to_string(f) + ".csv");
    auto out = open_out(path);
    out << "bin,center,learned,target\n";
    for (Eigen::Index b = 0; b < t.probs.size(); ++b) {
      out << b << ',' << format_double(t.bins[0].center(static_cast<std::size_t>(b))) << ','
          << format_double(l.probs(b)) << ',' << format_double(t.probs(b)) << '\n';
    }
    written.push_back(path);
  }
  for (int f = 0; f < target.d; ++f) {
    for (int g = f + 1; g < target.d; ++g) {
      const auto t = marginal(target, {f, g});
      const auto l = marginal(learned_dist, {f, g});
      const fs::path path =
          dir / ("projections_" + std::to_string(f) + "_" + std::to_string(g) + ".csv");
      auto out = open_out(path);
      out << "bin_a,bin_b,center_a,center_b,learned,target\n";
      for (Eigen::Index i = 0; i < t.probs.size(); ++i) {
        const auto a = t.bin_of(static_cast<std::size_t>(i), 0);
        const auto b = t.bin_of(static_cast<std::size_t>(i), 1);
        out << a << ',' << b << ',' << format_double(t.bins[0].center(a)) << ','
            << format_double(t.bins[1].center(b)) << ',' << format_double(l.probs(i)) << ','
            << format_double(t.probs(i)) << '\n';
      }
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace vineload::io
