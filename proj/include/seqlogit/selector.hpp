#pragma once

// Information-criterion subset selection: exhaustive enumeration, greedy
// forward warm start and best-first branch-and-bound over feature subsets.

#include <functional>
#include <string>
#include <vector>

#include "seqlogit/data.hpp"
#include "seqlogit/estimator.hpp"
#include "seqlogit/loss.hpp"

namespace seqlogit {

enum class Criterion { aic, bic };

std::string to_string(Criterion c);
Criterion parse_criterion(const std::string& s);

/// F = 2 for AIC, log(n) for BIC.
double penalty_for(Criterion c, Eigen::Index n);

/// 2 * loss_sum + F * m * (subset_size + 1), where loss_sum is the minimized
/// negative log-likelihood (or its surrogate).
double criterion_value(double loss_sum, std::size_t subset_size, int m, double penalty);

struct SelectionProblem {
  Dataset data;
  OrdinalEncoding encoding;
  Criterion criterion = Criterion::aic;
  double penalty = 2.0;
  Approx approx = Approx::exact;
  TangentSet tangents = default_tangents();
  double time_limit_s = 600.0;
  double tolerance = 1e-9;
  /// Fit the m class subproblems concurrently.
  bool parallel = false;
  FitOptions fit_options;

  static SelectionProblem make(Dataset data, Direction direction, Criterion criterion, Approx approx,
                               TangentSet tangents = default_tangents());

  int m() const { return encoding.m(); }
  Eigen::Index p() const { return data.p(); }
};

/// Per-class fits of the given approximation on subset S (sorted, 0-based).
std::vector<FitResult> fit_subset(const SelectionProblem& prob, Approx approx, const std::vector<int>& subset);

double loss_sum(const std::vector<FitResult>& fits);

struct SubsetEvaluation {
  double objval = 0.0;     // surrogate objective of prob.approx
  double criterion = 0.0;  // exact refit
  std::vector<FitResult> fits;
  std::vector<FitResult> exact_fits;
};

SubsetEvaluation evaluate_subset(const SelectionProblem& prob, const std::vector<int>& subset);

struct SelectionReport {
  std::string method;
  Direction direction = Direction::forward;
  Criterion criterion = Criterion::aic;
  std::vector<int> selected;  // 0-based, ascending
  double criterion_value = 0.0;
  double objval = 0.0;
  /// NaN when the method provides no bound.
  double lower_bound = 0.0;
  bool optimal = false;
  long nodes = 0;
  long incumbent_updates = 0;
  double wall_time_s = 0.0;
  std::vector<std::string> warnings;
  std::vector<FitResult> coefficients;  // exact refit per class on `selected`
  std::vector<std::string> feature_names;
  Eigen::Index n = 0;
  Eigen::Index p = 0;
  int m = 0;
};

/// Total order used to pick among optima: value (within tol), then subset
/// size, then lexicographic order of the sorted index lists.
bool better_subset(double value_a, const std::vector<int>& a, double value_b, const std::vector<int>& b,
                   double tol);

/// All 2^p subsets under the exact loss. Throws for p > 20.
SelectionReport exhaustive_select(const SelectionProblem& prob);

/// Greedy forward additions under prob.approx until no single addition
/// lowers the surrogate criterion.
std::vector<int> stepwise_warm_start(const SelectionProblem& prob);

SelectionReport stepwise_select(const SelectionProblem& prob);

/// Exact refit on a fixed subset, reported with method "fit". Both
/// objval and criterion_value are the exact criterion.
SelectionReport fixed_subset_report(const SelectionProblem& prob, std::vector<int> subset);

struct NodeVisit {
  const std::vector<int>& fixed_in;
  const std::vector<int>& fixed_out;
  const std::vector<int>& undecided;
  double bound;
};

struct BranchAndBoundOptions {
  std::size_t max_open_nodes = 1'000'000;
  /// Called for every node whose relaxation is evaluated.
  std::function<void(const NodeVisit&)> on_node;
};

SelectionReport branch_and_bound(const SelectionProblem& prob, const BranchAndBoundOptions& opts = {});

}  // namespace seqlogit
