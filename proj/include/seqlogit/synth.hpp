#pragma once

// Planted sequential logit instances for tests and demos.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "seqlogit/data.hpp"

namespace seqlogit {

struct SynthOptions {
  std::uint64_t seed = 1;
  Eigen::Index n = 200;
  Eigen::Index p = 8;
  int m = 2;
  Eigen::Index true_features = 3;
  /// Magnitude range of the planted nonzero weights.
  double weight_min = 0.5;
  double weight_max = 1.5;
};

struct SynthInstance {
  RawTable table;            // columns x1..xp then "y"
  std::vector<int> truth;    // planted support, 0-based
  Eigen::MatrixXd weights;   // p x m
  Eigen::VectorXd intercepts;
};

/// X ~ N(0, 1) entrywise; the first `true_features` columns of a random
/// permutation carry nonzero weights. Intercepts b_k = -log(m + 1 - k) make
/// the classes roughly balanced at W = 0. Labels follow the forward
/// continuation-ratio process.
SynthInstance generate(const SynthOptions& opts);

/// Class probabilities Pr(y = 1..m+1) of the forward model at one row.
Eigen::VectorXd planted_probabilities(const SynthInstance& inst, Eigen::Index row);

void write_synth_csv(const SynthInstance& inst, std::ostream& out);

}  // namespace seqlogit
