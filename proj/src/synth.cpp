#include "seqlogit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

namespace seqlogit {

namespace {

std::string cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Eigen::VectorXd row_values(const SynthInstance& inst, Eigen::Index i) {
  const auto p = static_cast<Eigen::Index>(inst.weights.rows());
  Eigen::VectorXd x(p);
  for (Eigen::Index j = 0; j < p; ++j)
    x(j) = std::stod(inst.table.cells[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  return x;
}

}  // namespace

SynthInstance generate(const SynthOptions& opts) {
  if (opts.n < 1 || opts.p < 0 || opts.m < 1) throw std::invalid_argument("synth: need n >= 1, p >= 0, m >= 1");
  if (opts.true_features < 0 || opts.true_features > opts.p)
    throw std::invalid_argument("synth: true feature count must lie in [0, p]");

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_real_distribution<double> magnitude(opts.weight_min, opts.weight_max);

  SynthInstance inst;
  const auto p = opts.p;
  const int m = opts.m;

  std::vector<int> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  inst.truth.assign(order.begin(), order.begin() + opts.true_features);
  std::sort(inst.truth.begin(), inst.truth.end());

  inst.weights = Eigen::MatrixXd::Zero(p, m);
  for (int j : inst.truth)
    for (int k = 0; k < m; ++k) inst.weights(j, k) = (unif(rng) < 0.5 ? -1.0 : 1.0) * magnitude(rng);
  inst.intercepts.resize(m);
  for (int k = 0; k < m; ++k) inst.intercepts(k) = -std::log(static_cast<double>(m - k));

  for (Eigen::Index j = 0; j < p; ++j) inst.table.columns.push_back("x" + std::to_string(j + 1));
  inst.table.columns.push_back("y");
  inst.table.label_column = static_cast<std::size_t>(p);

  Eigen::VectorXd x(p);
  for (Eigen::Index i = 0; i < opts.n; ++i) {
    std::vector<std::string> row;
    for (Eigen::Index j = 0; j < p; ++j) {
      x(j) = normal(rng);
      row.push_back(cell(x(j)));
    }
    // Stop at class k with probability sigmoid(w_k.x + b_k), else continue.
    int y = m + 1;
    for (int k = 0; k < m; ++k) {
      const double eta = inst.weights.col(k).dot(x) + inst.intercepts(k);
      if (unif(rng) < 1.0 / (1.0 + std::exp(-eta))) {
        y = k + 1;
        break;
      }
    }
    row.push_back(std::to_string(y));
    inst.table.cells.push_back(std::move(row));
  }
  return inst;
}

Eigen::VectorXd planted_probabilities(const SynthInstance& inst, Eigen::Index row) {
  const Eigen::VectorXd x = row_values(inst, row);
  const auto m = static_cast<int>(inst.intercepts.size());
  Eigen::VectorXd prob(m + 1);
  double survive = 1.0;
  for (int k = 0; k < m; ++k) {
    const double s = 1.0 / (1.0 + std::exp(-(inst.weights.col(k).dot(x) + inst.intercepts(k))));
    prob(k) = survive * s;
    survive *= 1.0 - s;
  }
  prob(m) = survive;
  return prob;
}

void write_synth_csv(const SynthInstance& inst, std::ostream& out) {
  for (std::size_t c = 0; c < inst.table.columns.size(); ++c) out << (c ? "," : "") << inst.table.columns[c];
  out << '\n';
  for (const auto& row : inst.table.cells) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << '\n';
  }
}

}  // namespace seqlogit
