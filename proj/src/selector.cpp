#include "seqlogit/selector.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <set>

namespace seqlogit {

std::string to_string(Criterion c) { return c == Criterion::aic ? "AIC" : "BIC"; }

Criterion parse_criterion(const std::string& s) {
  if (s == "aic" || s == "AIC") return Criterion::aic;
  if (s == "bic" || s == "BIC") return Criterion::bic;
  throw std::invalid_argument("unknown criterion '" + s + "'");
}

double penalty_for(Criterion c, Eigen::Index n) {
  return c == Criterion::aic ? 2.0 : std::log(static_cast<double>(n));
}

double criterion_value(double loss_sum, std::size_t subset_size, int m, double penalty) {
  return 2.0 * loss_sum + penalty * m * (static_cast<double>(subset_size) + 1.0);
}

SelectionProblem SelectionProblem::make(Dataset data, Direction direction, Criterion criterion, Approx approx,
                                        TangentSet tangents) {
  SelectionProblem prob;
  prob.encoding = encode_labels(data, direction);
  prob.criterion = criterion;
  prob.penalty = penalty_for(criterion, data.n());
  prob.approx = approx;
  prob.tangents = std::move(tangents);
  prob.data = std::move(data);
  return prob;
}

std::vector<FitResult> fit_subset(const SelectionProblem& prob, Approx approx, const std::vector<int>& subset) {
  const int m = prob.m();
  std::vector<FitResult> fits(static_cast<std::size_t>(m));
  auto one = [&](int k) {
    const ClassProblem cp = make_class_problem(prob.data.X, prob.encoding, k, subset);
    return fit(approx, cp, prob.tangents, prob.fit_options);
  };
  if (prob.parallel && m > 1) {
    std::vector<std::future<FitResult>> pending;
    for (int k = 0; k < m; ++k) pending.push_back(std::async(std::launch::async, one, k));
    for (int k = 0; k < m; ++k) fits[static_cast<std::size_t>(k)] = pending[static_cast<std::size_t>(k)].get();
  } else {
    for (int k = 0; k < m; ++k) fits[static_cast<std::size_t>(k)] = one(k);
  }
  return fits;
}

double loss_sum(const std::vector<FitResult>& fits) {
  double total = 0.0;
  for (const auto& f : fits) total += f.loss;
  return total;
}

SubsetEvaluation evaluate_subset(const SelectionProblem& prob, const std::vector<int>& subset) {
  for (int j : subset)
    if (j < 0 || j >= prob.p()) throw std::out_of_range("subset index " + std::to_string(j) + " out of range");
  SubsetEvaluation ev;
  ev.exact_fits = fit_subset(prob, Approx::exact, subset);
  ev.criterion = criterion_value(loss_sum(ev.exact_fits), subset.size(), prob.m(), prob.penalty);
  if (prob.approx == Approx::exact) {
    ev.fits = ev.exact_fits;
    ev.objval = ev.criterion;
  } else {
    ev.fits = fit_subset(prob, prob.approx, subset);
    ev.objval = criterion_value(loss_sum(ev.fits), subset.size(), prob.m(), prob.penalty);
  }
  return ev;
}

bool better_subset(double value_a, const std::vector<int>& a, double value_b, const std::vector<int>& b,
                   double tol) {
  if (value_a < value_b - tol) return true;
  if (value_a > value_b + tol) return false;
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void finish_report(const SelectionProblem& prob, SelectionReport& rep) {
  rep.direction = prob.encoding.direction;
  rep.criterion = prob.criterion;
  rep.feature_names = prob.data.feature_names;
  rep.n = prob.data.n();
  rep.p = prob.data.p();
  rep.m = prob.m();
  rep.coefficients = fit_subset(prob, Approx::exact, rep.selected);
  rep.criterion_value = criterion_value(loss_sum(rep.coefficients), rep.selected.size(), prob.m(), prob.penalty);
  for (std::size_t k = 0; k < rep.coefficients.size(); ++k)
    if (rep.coefficients[k].box_active)
      rep.warnings.push_back("parameter box active in exact refit of class " + std::to_string(k + 1));
}

std::vector<int> subset_from_mask(unsigned long mask, int p) {
  std::vector<int> s;
  for (int j = 0; j < p; ++j)
    if (mask & (1UL << j)) s.push_back(j);
  return s;
}

}  // namespace

SelectionReport exhaustive_select(const SelectionProblem& prob) {
  const auto p = static_cast<int>(prob.p());
  if (p > 20) throw std::invalid_argument("exhaustive_select: p = " + std::to_string(p) + " exceeds the guard of 20");
  const auto start = Clock::now();
  SelectionReport rep;
  rep.method = "exhaustive";
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_set;
  bool have = false;
  for (unsigned long mask = 0; mask < (1UL << p); ++mask) {
    const std::vector<int> s = subset_from_mask(mask, p);
    const double value =
        criterion_value(loss_sum(fit_subset(prob, Approx::exact, s)), s.size(), prob.m(), prob.penalty);
    ++rep.nodes;
    if (!have || better_subset(value, s, best, best_set, prob.tolerance)) {
      best = value;
      best_set = s;
      have = true;
      ++rep.incumbent_updates;
    }
  }
  rep.selected = best_set;
  rep.objval = best;
  rep.lower_bound = best;
  rep.optimal = true;
  finish_report(prob, rep);
  rep.wall_time_s = seconds_since(start);
  return rep;
}

std::vector<int> stepwise_warm_start(const SelectionProblem& prob) {
  const auto p = static_cast<int>(prob.p());
  std::vector<int> current;
  double value = criterion_value(loss_sum(fit_subset(prob, prob.approx, current)), 0, prob.m(), prob.penalty);
  for (;;) {
    int best_j = -1;
    double best_value = value;
    for (int j = 0; j < p; ++j) {
      if (std::binary_search(current.begin(), current.end(), j)) continue;
      std::vector<int> trial = current;
      trial.insert(std::upper_bound(trial.begin(), trial.end(), j), j);
      const double v = criterion_value(loss_sum(fit_subset(prob, prob.approx, trial)), trial.size(), prob.m(),
                                       prob.penalty);
      if (v < best_value - prob.tolerance) {
        best_value = v;
        best_j = j;
      }
    }
    if (best_j < 0) return current;
    current.insert(std::upper_bound(current.begin(), current.end(), best_j), best_j);
    value = best_value;
  }
}

SelectionReport stepwise_select(const SelectionProblem& prob) {
  const auto start = Clock::now();
  SelectionReport rep;
  rep.method = "stepwise";
  rep.selected = stepwise_warm_start(prob);
  rep.objval =
      criterion_value(loss_sum(fit_subset(prob, prob.approx, rep.selected)), rep.selected.size(), prob.m(), prob.penalty);
  rep.lower_bound = std::numeric_limits<double>::quiet_NaN();
  rep.optimal = false;
  finish_report(prob, rep);
  rep.wall_time_s = seconds_since(start);
  return rep;
}

SelectionReport fixed_subset_report(const SelectionProblem& prob, std::vector<int> subset) {
  const auto start = Clock::now();
  std::sort(subset.begin(), subset.end());
  if (std::adjacent_find(subset.begin(), subset.end()) != subset.end())
    throw std::invalid_argument("fixed subset contains a duplicate feature");
  for (int j : subset)
    if (j < 0 || j >= prob.p()) throw std::invalid_argument("fixed subset index out of range");
  SelectionReport rep;
  rep.method = "fit";
  rep.selected = std::move(subset);
  rep.lower_bound = std::numeric_limits<double>::quiet_NaN();
  finish_report(prob, rep);
  rep.objval = rep.criterion_value;
  rep.wall_time_s = seconds_since(start);
  return rep;
}

namespace {

struct Node {
  std::vector<int> in;
  std::vector<int> out;
  std::vector<int> undecided;
  std::vector<FitResult> fits;  // relaxation on in ∪ undecided
  double loss = 0.0;
  double bound = 0.0;
};

std::vector<int> merged(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> s;
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(s));
  return s;
}

}  // namespace

SelectionReport branch_and_bound(const SelectionProblem& prob, const BranchAndBoundOptions& opts) {
  const auto start = Clock::now();
  const auto p = static_cast<int>(prob.p());
  const int m = prob.m();
  const double F = prob.penalty;
  const double tol = prob.tolerance;

  SelectionReport rep;
  rep.method = "bnb-" + to_string(prob.approx);

  auto surrogate = [&](const std::vector<int>& s) {
    return criterion_value(loss_sum(fit_subset(prob, prob.approx, s)), s.size(), m, F);
  };

  std::vector<int> incumbent;
  double incumbent_value = surrogate(incumbent);
  auto offer = [&](double value, const std::vector<int>& s) {
    if (better_subset(value, s, incumbent_value, incumbent, tol)) {
      incumbent_value = value;
      incumbent = s;
      ++rep.incumbent_updates;
    }
  };
  {
    const std::vector<int> warm = stepwise_warm_start(prob);
    offer(surrogate(warm), warm);
  }

  // A node is discarded once no completion can beat the incumbent, counting
  // exact ties that the size/lexicographic rule would resolve in its favour.
  auto prunable = [&](const Node& node) {
    if (node.bound > incumbent_value + tol) return true;
    if (node.bound < incumbent_value - tol) return false;
    if (node.in.size() < incumbent.size()) return false;
    if (node.in.size() == incumbent.size() && node.in < incumbent) return false;
    return true;
  };

  auto evaluate = [&](Node& node, const std::vector<FitResult>* reuse) {
    const std::vector<int> relaxed = merged(node.in, node.undecided);
    node.fits = reuse ? *reuse : fit_subset(prob, prob.approx, relaxed);
    node.loss = loss_sum(node.fits);
    node.bound = criterion_value(node.loss, node.in.size(), m, F);
    offer(criterion_value(node.loss, relaxed.size(), m, F), relaxed);
    if (opts.on_node) opts.on_node(NodeVisit{node.in, node.out, node.undecided, node.bound});
  };

  std::map<long, Node> nodes;                 // by creation sequence
  std::set<std::pair<double, long>> by_bound;  // best-first order, FIFO on ties
  long seq = 0;
  auto push = [&](Node&& node) {
    by_bound.emplace(node.bound, seq);
    nodes.emplace(seq, std::move(node));
    ++seq;
  };

  {
    Node root;
    for (int j = 0; j < p; ++j) root.undecided.push_back(j);
    evaluate(root, nullptr);
    push(std::move(root));
  }

  bool timed_out = false;
  while (!nodes.empty()) {
    if (seconds_since(start) > prob.time_limit_s) {
      timed_out = true;
      break;
    }
    long id = 0;
    if (nodes.size() > opts.max_open_nodes) {
      id = nodes.rbegin()->first;  // depth-first fallback
    } else {
      id = by_bound.begin()->second;
    }
    Node node = std::move(nodes.at(id));
    nodes.erase(id);
    by_bound.erase({node.bound, id});
    ++rep.nodes;

    if (prunable(node) || node.undecided.empty()) continue;

    // Branch on the undecided feature with the largest |w_jk| over classes.
    const std::vector<int> relaxed = merged(node.in, node.undecided);
    int branch = -1;
    double largest = -1.0;
    for (int j : node.undecided) {
      const auto pos = std::lower_bound(relaxed.begin(), relaxed.end(), j) - relaxed.begin();
      double mag = 0.0;
      for (const auto& f : node.fits) mag = std::max(mag, std::abs(f.coefficients(pos)));
      if (mag > largest) {
        largest = mag;
        branch = j;
      }
    }

    Node with;
    with.in = node.in;
    with.in.insert(std::upper_bound(with.in.begin(), with.in.end(), branch), branch);
    with.out = node.out;
    for (int j : node.undecided)
      if (j != branch) with.undecided.push_back(j);

    Node without;
    without.in = node.in;
    without.out = node.out;
    without.out.insert(std::upper_bound(without.out.begin(), without.out.end(), branch), branch);
    without.undecided = with.undecided;

    evaluate(with, &node.fits);
    evaluate(without, nullptr);
    if (!prunable(with)) push(std::move(with));
    if (!prunable(without)) push(std::move(without));
  }

  rep.selected = incumbent;
  rep.objval = incumbent_value;
  rep.optimal = !timed_out;
  double bound = incumbent_value;
  for (const auto& [b, id] : by_bound) bound = std::min(bound, b);
  rep.lower_bound = timed_out ? bound : incumbent_value;
  if (timed_out) rep.warnings.push_back("time limit reached; incumbent not proven optimal");
  if (prob.approx != Approx::exact) {
    const auto fits = fit_subset(prob, prob.approx, incumbent);
    for (std::size_t k = 0; k < fits.size(); ++k)
      if (fits[k].box_active)
        rep.warnings.push_back("parameter box active in " + to_string(prob.approx) + " fit of class " +
                               std::to_string(k + 1) + "; objval may differ from the unboxed model");
  }
  finish_report(prob, rep);
  rep.wall_time_s = seconds_since(start);
  return rep;
}

}  // namespace seqlogit
