#pragma once

// Primal simplex specialised to  min sum_i w_i phi(g_i . theta)  over a box,
// where phi is a convex piecewise-linear function given by its lines.
//
// A basis holds d constraints, each one of: a row sitting on a breakpoint of
// phi, a variable at its upper/lower box bound, or a variable temporarily
// held at its current value. The epigraph variables of the LP formulation
// are eliminated, so the basis is d x d rather than (rows x lines).

#include <Eigen/Core>

namespace seqlogit::detail {

/// Upper envelope of lines sorted by slope; breaks(q) is where line q hands
/// over to line q + 1.
struct Envelope {
  Eigen::VectorXd slopes;
  Eigen::VectorXd offsets;
  Eigen::VectorXd breaks;

  Eigen::Index lines() const { return slopes.size(); }
};

Envelope upper_envelope(const Eigen::VectorXd& slopes, const Eigen::VectorXd& offsets);

struct PwlSimplexResult {
  Eigen::VectorXd theta;
  double objective = 0.0;
  int iterations = 0;
  bool box_active = false;
};

/// rows: N x d matrix of g_i; weights: N positive weights.
PwlSimplexResult minimize_pwl(const Eigen::MatrixXd& rows, const Eigen::VectorXd& weights,
                              const Envelope& env, double box, const Eigen::VectorXd& start);

}  // namespace seqlogit::detail
