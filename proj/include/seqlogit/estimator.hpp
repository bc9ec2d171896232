#pragma once

// Per-class continuous fits (exact, quadratic, piecewise-linear) and the
// full sequential-logit likelihood.

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "seqlogit/data.hpp"
#include "seqlogit/loss.hpp"
#include "seqlogit/lp.hpp"

namespace seqlogit {

enum class Approx { exact, quad, pwl };

std::string to_string(Approx a);
Approx parse_approx(const std::string& s);

/// The binary subproblem for class k: rows with psi(i,k) != 0, their signs,
/// and the design restricted to the active features with a trailing
/// intercept column.
struct ClassProblem {
  std::vector<Eigen::Index> rows;
  Eigen::VectorXd signs;
  Eigen::MatrixXd design;
  int k = 0;  // 0-based class index

  Eigen::Index num_rows() const { return design.rows(); }
  Eigen::Index num_features() const { return design.cols() - 1; }
};

ClassProblem make_class_problem(const Eigen::MatrixXd& X, const OrdinalEncoding& enc, int k,
                                std::span<const int> features);

struct FitResult {
  Eigen::VectorXd coefficients;  // over the problem's active features
  double intercept = 0.0;
  double loss = 0.0;
  bool converged = false;
  bool box_active = false;
  int iterations = 0;
  Approx method = Approx::exact;
};

struct FitOptions {
  double box = 100.0;
  int max_iterations = 100;
  double gradient_tol = 1e-8;
  double step_tol = 1e-6;
  double armijo = 1e-4;
  double ridge = 1e-10;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Projected damped Newton on sum_i f(s_i (x_i.w + b)) from zero.
FitResult fit_exact(const ClassProblem& prob, const FitOptions& opts = {});

/// Minimizer of sum_i quad_loss(s_i (x_i.w + b)), i.e. least squares on
/// targets 2 s_i.
FitResult fit_quad(const ClassProblem& prob, const FitOptions& opts = {});

/// Minimizer of sum_i max_l (a_l s_i (x_i.w + b) + c_l) over the parameter box.
/// Requires both sentinels in the tangent set.
FitResult fit_pwl(const ClassProblem& prob, const TangentSet& tset, const FitOptions& opts = {});

FitResult fit(Approx approx, const ClassProblem& prob, const TangentSet& tset,
              const FitOptions& opts = {});

/// Surrogate objective sum_i loss(s_i (x_i.theta)) at theta = (w, b).
double class_objective(Approx approx, const ClassProblem& prob, const TangentSet& tset,
                       const Eigen::VectorXd& theta);

/// Gradient of the smooth surrogate objective (exact or quad) in theta.
Eigen::VectorXd class_gradient(Approx approx, const ClassProblem& prob, const Eigen::VectorXd& theta);

/// The piecewise-linear fit as an explicit LP over (w, b, t); columns are
/// the design parameters followed by one epigraph variable per row.
LpProblem build_pwl_lp(const ClassProblem& prob, const TangentSet& tset, double box = 100.0);

/// Intercepts b_k and weights w_jk (p x m).
struct SequentialLogitParams {
  Eigen::VectorXd intercepts;
  Eigen::MatrixXd weights;

  static SequentialLogitParams zeros(Eigen::Index p, int m) {
    return {Eigen::VectorXd::Zero(m), Eigen::MatrixXd::Zero(p, m)};
  }
};

/// L(b, W) = -sum_i sum_k |psi_ik| f(psi_ik (w_k.x_i + b_k)).
template <typename Derived>
double log_likelihood(const SequentialLogitParams& params, const OrdinalEncoding& enc,
                      const Eigen::MatrixBase<Derived>& X) {
  const Eigen::MatrixXd scores = (X * params.weights).rowwise() + params.intercepts.transpose();
  double total = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index k = 0; k < enc.psi.cols(); ++k) {
      const int s = enc.psi(i, k);
      if (s != 0) total -= logistic_loss(static_cast<double>(s) * scores(i, k));
    }
  return total;
}

inline double log_likelihood(const SequentialLogitParams& params, const OrdinalEncoding& enc,
                             const Dataset& data) {
  return log_likelihood(params, enc, data.X);
}

/// Class probabilities for one sample: Pr(y = k) = q_k prod_{j<k} (1 - q_j),
/// Pr(y = m+1) = prod_j (1 - q_j). For the backward model the stages run over
/// reversed labels and the result is returned in original label order.
template <typename Derived>
Eigen::VectorXd predict_proba(const SequentialLogitParams& params, const Eigen::MatrixBase<Derived>& x,
                              Direction direction = Direction::forward) {
  const Eigen::Index m = params.intercepts.size();
  Eigen::VectorXd proba(m + 1);
  double remaining = 1.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    const double score = params.weights.col(k).dot(x.derived().template cast<double>()) + params.intercepts(k);
    const double q = sigmoid(score);
    proba(k) = remaining * q;
    remaining *= sigmoid(-score);
  }
  proba(m) = remaining;
  if (direction == Direction::backward) proba.reverseInPlace();
  return proba;
}

}  // namespace seqlogit
