#pragma once

// Dense two-phase simplex for small linear programs.

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace seqlogit {

enum class RowSense { less_equal, greater_equal, equal };

/// minimize c'x  subject to  rows(r) . x  (<=|>=|=)  rhs(r),  lower <= x <= upper.
struct LpProblem {
  Eigen::VectorXd objective;
  Eigen::MatrixXd rows;
  std::vector<RowSense> senses;
  Eigen::VectorXd rhs;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  /// Variables whose bounds are an artificial parameter box rather than part
  /// of the model; an optimum touching one of them is reported as
  /// box_bound_active.
  std::vector<bool> boxed;
  std::vector<std::string> names;

  Eigen::Index num_vars() const { return objective.size(); }
  Eigen::Index num_rows() const { return rows.rows(); }

  static constexpr double inf = std::numeric_limits<double>::infinity();
};

enum class LpStatus { optimal, infeasible, unbounded, box_bound_active };

std::string to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Eigen::VectorXd values;
  double objective = 0.0;
  long iterations = 0;
};

struct LpOptions {
  double feasibility_tol = 1e-9;
  long max_iterations = 200000;
  /// Guard on the dense tableau size (rows x columns).
  long long max_tableau_entries = 60'000'000;
};

/// Dantzig pricing with lowest-index tie breaking; falls back to Bland's rule
/// after a run of degenerate pivots. Throws std::runtime_error when the
/// iteration guard trips or the tableau would exceed the size guard.
LpSolution solve_lp(const LpProblem& lp, const LpOptions& opts = {});

/// Largest violation of rows and bounds at x.
double max_violation(const LpProblem& lp, const Eigen::VectorXd& x);

}  // namespace seqlogit
