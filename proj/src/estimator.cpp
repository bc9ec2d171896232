#include "seqlogit/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Cholesky>

#include "pwl_simplex.hpp"

namespace seqlogit {

std::string to_string(Approx a) {
  switch (a) {
    case Approx::exact: return "exact";
    case Approx::quad: return "quad";
    case Approx::pwl: return "pwl";
  }
  return "?";
}

Approx parse_approx(const std::string& s) {
  if (s == "exact") return Approx::exact;
  if (s == "quad") return Approx::quad;
  if (s == "pwl") return Approx::pwl;
  throw std::invalid_argument("unknown approximation '" + s + "'");
}

ClassProblem make_class_problem(const Eigen::MatrixXd& X, const OrdinalEncoding& enc, int k,
                                std::span<const int> features) {
  ClassProblem prob;
  prob.k = k;
  for (Eigen::Index i = 0; i < enc.psi.rows(); ++i)
    if (enc.psi(i, k) != 0) prob.rows.push_back(i);
  const auto n = static_cast<Eigen::Index>(prob.rows.size());
  const auto d = static_cast<Eigen::Index>(features.size());
  prob.signs.resize(n);
  prob.design.resize(n, d + 1);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Eigen::Index i = prob.rows[static_cast<std::size_t>(r)];
    prob.signs(r) = enc.psi(i, k);
    for (Eigen::Index j = 0; j < d; ++j) prob.design(r, j) = X(i, features[static_cast<std::size_t>(j)]);
    prob.design(r, d) = 1.0;
  }
  return prob;
}

namespace {

double margin_sum(Approx approx, const Eigen::VectorXd& margins, const TangentSet* tset) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    switch (approx) {
      case Approx::exact: total += logistic_loss(margins(i)); break;
      case Approx::quad: total += quad_loss(margins(i)); break;
      case Approx::pwl: total += pwl_loss(*tset, margins(i)); break;
    }
  }
  return total;
}

/// Solves H x = rhs for symmetric positive semidefinite H, adding a ridge
/// when H is numerically singular.
Eigen::VectorXd solve_psd(const Eigen::MatrixXd& H, const Eigen::VectorXd& rhs, double ridge) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
  if (ldlt.info() == Eigen::Success && ldlt.isPositive() && ldlt.rcond() > 1e-13) {
    Eigen::VectorXd x = ldlt.solve(rhs);
    if (x.allFinite()) return x;
  }
  const Eigen::MatrixXd jittered = H + ridge * Eigen::MatrixXd::Identity(H.rows(), H.cols());
  ldlt.compute(jittered);
  Eigen::VectorXd x = ldlt.solve(rhs);
  if (ldlt.info() != Eigen::Success || !x.allFinite()) {
    std::ostringstream os;
    os << "Newton system singular after ridge " << ridge << " (rcond " << ldlt.rcond() << ", dim " << H.rows()
       << ")";
    throw FitError(os.str());
  }
  return x;
}

FitResult pack(const Eigen::VectorXd& theta, double loss, Approx method) {
  FitResult out;
  const Eigen::Index d = theta.size() - 1;
  out.coefficients = theta.head(d);
  out.intercept = theta(d);
  out.loss = loss;
  out.method = method;
  return out;
}

/// Projected damped Newton over the box for a smooth convex margin loss.
template <typename Value, typename Grad, typename Curv>
FitResult projected_newton(const ClassProblem& prob, const FitOptions& opts, Approx method, Value value,
                           Grad grad, Curv curv) {
  const Eigen::MatrixXd& D = prob.design;
  const Eigen::Index n = D.rows();
  const Eigen::Index d = D.cols();
  const double box = opts.box;

  auto objective = [&](const Eigen::VectorXd& margins) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) total += value(margins(i));
    return total;
  };

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd margins = Eigen::VectorXd::Zero(n);
  double loss = objective(margins);
  bool converged = false;
  int iter = 0;
  Eigen::VectorXd weights(n), dgrad(n);

  for (; iter < opts.max_iterations; ++iter) {
    for (Eigen::Index i = 0; i < n; ++i) {
      dgrad(i) = prob.signs(i) * grad(margins(i));
      weights(i) = curv(margins(i));
    }
    const Eigen::VectorXd g = D.transpose() * dgrad;

    std::vector<Eigen::Index> free;
    double pg = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      const bool pinned = (theta(j) >= box && g(j) < 0.0) || (theta(j) <= -box && g(j) > 0.0);
      if (!pinned) {
        free.push_back(j);
        pg = std::max(pg, std::abs(g(j)));
      }
    }
    if (free.empty()) break;

    const auto f = static_cast<Eigen::Index>(free.size());
    Eigen::MatrixXd Df(n, f);
    Eigen::VectorXd gf(f);
    for (Eigen::Index c = 0; c < f; ++c) {
      Df.col(c) = D.col(free[static_cast<std::size_t>(c)]);
      gf(c) = g(free[static_cast<std::size_t>(c)]);
    }
    const Eigen::MatrixXd H = Df.transpose() * weights.asDiagonal() * Df;
    const Eigen::VectorXd step_f = solve_psd(H, -gf, opts.ridge);
    Eigen::VectorXd step = Eigen::VectorXd::Zero(d);
    for (Eigen::Index c = 0; c < f; ++c) step(free[static_cast<std::size_t>(c)]) = step_f(c);

    if (pg <= opts.gradient_tol && step.cwiseAbs().maxCoeff() <= opts.step_tol) {
      converged = true;
      break;
    }

    double alpha = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving, alpha *= 0.5) {
      const Eigen::VectorXd trial = (theta + alpha * step).cwiseMax(-box).cwiseMin(box);
      const Eigen::VectorXd trial_margins = prob.signs.cwiseProduct(D * trial);
      const double trial_loss = objective(trial_margins);
      if (trial_loss <= loss + opts.armijo * std::min(0.0, g.dot(trial - theta))) {
        accepted = trial != theta;
        theta = trial;
        margins = trial_margins;
        loss = trial_loss;
        break;
      }
    }
    if (!accepted) {
      // no representable decrease left
      converged = pg <= opts.gradient_tol;
      break;
    }
  }

  FitResult out = pack(theta, loss, method);
  out.iterations = iter;
  out.box_active = (theta.cwiseAbs().array() >= box).any();
  out.converged = converged && !out.box_active;
  return out;
}

}  // namespace

FitResult fit_exact(const ClassProblem& prob, const FitOptions& opts) {
  if (prob.num_rows() == 0) throw std::invalid_argument("fit_exact: empty class problem");
  return projected_newton(
      prob, opts, Approx::exact, [](double v) { return logistic_loss(v); },
      [](double v) { return logistic_loss_grad(v); }, [](double v) { return logistic_loss_curv(v); });
}

FitResult fit_quad(const ClassProblem& prob, const FitOptions& opts) {
  if (prob.num_rows() == 0) throw std::invalid_argument("fit_quad: empty class problem");
  const Eigen::MatrixXd& D = prob.design;
  // sum_i (r_i^2 / 8 - r_i / 2) with r_i = s_i d_i.theta and s_i^2 = 1
  const Eigen::MatrixXd gram = D.transpose() * D;
  const Eigen::VectorXd target = 2.0 * (D.transpose() * prob.signs);
  const Eigen::VectorXd theta = solve_psd(gram, target, opts.ridge);
  if ((theta.cwiseAbs().array() <= opts.box).all()) {
    const Eigen::VectorXd margins = prob.signs.cwiseProduct(D * theta);
    FitResult out = pack(theta, margin_sum(Approx::quad, margins, nullptr), Approx::quad);
    out.converged = true;
    out.iterations = 1;
    return out;
  }
  return projected_newton(
      prob, opts, Approx::quad, [](double v) { return quad_loss(v); }, [](double v) { return quad_loss_grad(v); },
      [](double v) { return quad_loss_curv(v); });
}

FitResult fit_pwl(const ClassProblem& prob, const TangentSet& tset, const FitOptions& opts) {
  if (prob.num_rows() == 0) throw std::invalid_argument("fit_pwl: empty class problem");
  if (!tset.has_minus_sentinel() || !tset.has_plus_sentinel())
    throw std::invalid_argument("fit_pwl: tangent set must contain both -inf and +inf sentinels");

  // g_i = s_i d_i; identical rows are merged into one weighted row.
  const Eigen::Index n = prob.num_rows();
  const Eigen::Index d = prob.design.cols();
  const Eigen::MatrixXd G = prob.signs.asDiagonal() * prob.design;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  auto row_less = [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index j = 0; j < d; ++j)
      if (G(a, j) != G(b, j)) return G(a, j) < G(b, j);
    return false;
  };
  std::stable_sort(order.begin(), order.end(), row_less);
  std::vector<Eigen::Index> unique_rows;
  std::vector<double> counts;
  for (Eigen::Index idx : order) {
    if (!unique_rows.empty() && !row_less(unique_rows.back(), idx) && !row_less(idx, unique_rows.back())) {
      counts.back() += 1.0;
    } else {
      unique_rows.push_back(idx);
      counts.push_back(1.0);
    }
  }
  const auto N = static_cast<Eigen::Index>(unique_rows.size());
  Eigen::MatrixXd rows(N, d);
  Eigen::VectorXd weights(N);
  for (Eigen::Index r = 0; r < N; ++r) {
    rows.row(r) = G.row(unique_rows[static_cast<std::size_t>(r)]);
    weights(r) = counts[static_cast<std::size_t>(r)];
  }

  const detail::Envelope env = detail::upper_envelope(tset.slopes, tset.offsets);
  const detail::PwlSimplexResult res =
      detail::minimize_pwl(rows, weights, env, opts.box, Eigen::VectorXd::Zero(d));

  // Report the loss through the original tangent family.
  const Eigen::VectorXd margins = G * res.theta;
  FitResult out = pack(res.theta, margin_sum(Approx::pwl, margins, &tset), Approx::pwl);
  out.iterations = res.iterations;
  out.box_active = res.box_active;
  out.converged = true;
  return out;
}

FitResult fit(Approx approx, const ClassProblem& prob, const TangentSet& tset, const FitOptions& opts) {
  switch (approx) {
    case Approx::exact: return fit_exact(prob, opts);
    case Approx::quad: return fit_quad(prob, opts);
    case Approx::pwl: return fit_pwl(prob, tset, opts);
  }
  throw std::logic_error("unreachable");
}

double class_objective(Approx approx, const ClassProblem& prob, const TangentSet& tset,
                       const Eigen::VectorXd& theta) {
  const Eigen::VectorXd margins = prob.signs.cwiseProduct(prob.design * theta);
  return margin_sum(approx, margins, &tset);
}

Eigen::VectorXd class_gradient(Approx approx, const ClassProblem& prob, const Eigen::VectorXd& theta) {
  if (approx == Approx::pwl) throw std::invalid_argument("class_gradient: the pwl objective is not differentiable");
  const Eigen::VectorXd margins = prob.signs.cwiseProduct(prob.design * theta);
  Eigen::VectorXd dm(margins.size());
  for (Eigen::Index i = 0; i < margins.size(); ++i)
    dm(i) = prob.signs(i) * (approx == Approx::exact ? logistic_loss_grad(margins(i)) : quad_loss_grad(margins(i)));
  return prob.design.transpose() * dm;
}

LpProblem build_pwl_lp(const ClassProblem& prob, const TangentSet& tset, double box) {
  const Eigen::Index n = prob.num_rows();
  const Eigen::Index d = prob.design.cols();
  const Eigen::Index h = tset.size();
  LpProblem lp;
  const Eigen::Index vars = d + n;
  lp.objective = Eigen::VectorXd::Zero(vars);
  lp.objective.tail(n).setOnes();
  lp.lower = Eigen::VectorXd::Constant(vars, -LpProblem::inf);
  lp.upper = Eigen::VectorXd::Constant(vars, LpProblem::inf);
  lp.lower.head(d).setConstant(-box);
  lp.upper.head(d).setConstant(box);
  lp.boxed.assign(static_cast<std::size_t>(vars), false);
  for (Eigen::Index j = 0; j < d; ++j) {
    lp.boxed[static_cast<std::size_t>(j)] = true;
    lp.names.push_back(j + 1 == d ? "b" : "w" + std::to_string(j + 1));
  }
  for (Eigen::Index i = 0; i < n; ++i) lp.names.push_back("t" + std::to_string(i + 1));

  lp.rows = Eigen::MatrixXd::Zero(n * h, vars);
  lp.rhs.resize(n * h);
  lp.senses.assign(static_cast<std::size_t>(n * h), RowSense::greater_equal);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index l = 0; l < h; ++l) {
      const Eigen::Index r = i * h + l;
      // t_i - a_l s_i d_i.theta >= c_l
      lp.rows.row(r).head(d) = -tset.slopes(l) * prob.signs(i) * prob.design.row(i);
      lp.rows(r, d + i) = 1.0;
      lp.rhs(r) = tset.offsets(l);
    }
  return lp;
}

}  // namespace seqlogit
