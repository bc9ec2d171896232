#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "seqlogit/estimator.hpp"

using namespace seqlogit;

namespace {

ClassProblem intercept_only(std::initializer_list<double> signs) {
  ClassProblem p;
  p.signs.resize(static_cast<Eigen::Index>(signs.size()));
  Eigen::Index i = 0;
  for (double s : signs) {
    p.rows.push_back(i);
    p.signs(i++) = s;
  }
  p.design = Eigen::MatrixXd::Ones(p.signs.size(), 1);
  return p;
}

ClassProblem random_problem(std::mt19937_64& rng, Eigen::Index n, Eigen::Index d, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  ClassProblem p;
  p.design.resize(n, d + 1);
  p.signs.resize(n);
  Eigen::VectorXd w(d);
  for (auto& v : w) v = scale * g(rng);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) p.design(i, j) = g(rng);
    p.design(i, d) = 1.0;
    const double eta = p.design.row(i).head(d).dot(w) + 0.3;
    p.signs(i) = std::bernoulli_distribution(1.0 / (1.0 + std::exp(-eta)))(rng) ? 1.0 : -1.0;
    p.rows.push_back(i);
  }
  return p;
}

Eigen::VectorXd theta_of(const FitResult& f) {
  Eigen::VectorXd t(f.coefficients.size() + 1);
  t << f.coefficients, f.intercept;
  return t;
}

// Independent product-of-probabilities form of the likelihood.
double product_form_log_likelihood(const SequentialLogitParams& params, const Eigen::MatrixXd& X,
                                   const Eigen::VectorXi& y) {
  const Eigen::Index m = params.intercepts.size();
  double total = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    double prob = 1.0;
    for (Eigen::Index k = 0; k < m; ++k) {
      const double q = 1.0 / (1.0 + std::exp(-(X.row(i).dot(params.weights.col(k)) + params.intercepts(k))));
      if (y(i) == k + 1) {
        prob *= q;
        break;
      }
      prob *= 1.0 - q;
    }
    total += std::log(prob);
  }
  return total;
}

}  // namespace

TEST_CASE("fit_exact closed forms") {
  SUBCASE("intercept MLE from class frequency") {
    ClassProblem p;
    p.design = Eigen::MatrixXd::Ones(100, 1);
    p.signs = Eigen::VectorXd::Constant(100, -1.0);
    p.signs.head(25).setOnes();
    for (int i = 0; i < 100; ++i) p.rows.push_back(i);
    const auto f = fit_exact(p);
    CHECK(f.converged);
    CHECK(f.intercept == doctest::Approx(std::log(25.0 / 75.0)).epsilon(1e-10));
    CHECK(f.intercept == doctest::Approx(-1.0986123).epsilon(1e-7));
  }
  SUBCASE("symmetric pair") {
    const auto f = fit_exact(intercept_only({1, -1}));
    CHECK(f.converged);
    CHECK(std::abs(f.intercept) <= 1e-12);
    CHECK(f.loss == doctest::Approx(2.0 * std::log(2.0)));
  }
  SUBCASE("separable toy hits the box") {
    ClassProblem p;
    p.design.resize(2, 2);
    p.design << -1, 1, 1, 1;
    p.signs.resize(2);
    p.signs << -1, 1;
    p.rows = {0, 1};
    const auto f = fit_exact(p);
    CHECK_FALSE(f.converged);
    CHECK(f.box_active);
    CHECK(f.loss <= 1e-10);
    CHECK(std::abs(f.coefficients(0)) <= 100.0);
    CHECK(std::abs(f.intercept) <= 100.0);
  }
}

TEST_CASE("fit_exact optimality and gradient") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_problem(rng, 80, 3);
    const auto f = fit_exact(p);
    REQUIRE(f.converged);
    const Eigen::VectorXd g = class_gradient(Approx::exact, p, theta_of(f));
    CHECK(g.cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(f.loss == doctest::Approx(class_objective(Approx::exact, p, default_tangents(), theta_of(f))).epsilon(1e-14));
  }
}

TEST_CASE("analytic gradient matches central differences") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g(0.0, 1.0);
  const auto p = random_problem(rng, 40, 4);
  const auto& tset = default_tangents();
  for (int point = 0; point < 20; ++point) {
    Eigen::VectorXd theta(5);
    for (auto& v : theta) v = g(rng);
    for (Approx a : {Approx::exact, Approx::quad}) {
      const Eigen::VectorXd an = class_gradient(a, p, theta);
      Eigen::VectorXd fd(5);
      const double h = 1e-5;
      for (Eigen::Index j = 0; j < 5; ++j) {
        Eigen::VectorXd tp = theta, tm = theta;
        tp(j) += h;
        tm(j) -= h;
        fd(j) = (class_objective(a, p, tset, tp) - class_objective(a, p, tset, tm)) / (2 * h);
      }
      CHECK((an - fd).norm() / std::max(1.0, an.norm()) <= 1e-5);
    }
  }
}

TEST_CASE("fit_quad") {
  SUBCASE("hand solutions") {
    CHECK(fit_quad(intercept_only({1, -1, -1})).intercept == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
    CHECK(std::abs(fit_quad(intercept_only({1, -1})).intercept) <= 1e-12);
  }
  SUBCASE("dominance over the exact minimizer") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 10; ++trial) {
      const auto p = random_problem(rng, 60, 3);
      const auto fq = fit_quad(p);
      const auto fe = fit_exact(p);
      CHECK(fq.loss <= class_objective(Approx::quad, p, default_tangents(), theta_of(fe)) + 1e-12);
      CHECK(class_gradient(Approx::quad, p, theta_of(fq)).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
  SUBCASE("grid search on a two-parameter toy") {
    std::mt19937_64 rng(31);
    const auto p = random_problem(rng, 30, 1);
    const auto fq = fit_quad(p);
    double best = std::numeric_limits<double>::infinity();
    Eigen::Vector2d arg;
    for (int a = -300; a <= 300; ++a)
      for (int b = -300; b <= 300; ++b) {
        const Eigen::Vector2d th(0.01 * a, 0.01 * b);
        const double v = class_objective(Approx::quad, p, default_tangents(), th);
        if (v < best) {
          best = v;
          arg = th;
        }
      }
    // Refine around the grid optimum.
    double step = 0.005;
    for (int round = 0; round < 40; ++round, step *= 0.5)
      for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b) {
          const Eigen::Vector2d th = arg + step * Eigen::Vector2d(a, b);
          const double v = class_objective(Approx::quad, p, default_tangents(), th);
          if (v < best) {
            best = v;
            arg = th;
          }
        }
    CHECK(std::abs(fq.coefficients(0) - arg(0)) <= 1e-6);
    CHECK(std::abs(fq.intercept - arg(1)) <= 1e-6);
    CHECK(fq.loss <= best + 1e-12);
  }
}

TEST_CASE("fit_pwl") {
  const auto& tset = default_tangents();
  SUBCASE("single positive row") {
    const auto f = fit_pwl(intercept_only({1}), tset);
    CHECK(f.loss == doctest::Approx(0.0));
    CHECK(pwl_loss(tset, 100.0) == 0.0);
  }
  SUBCASE("symmetric pair") {
    const auto f = fit_pwl(intercept_only({1, -1}), tset);
    CHECK(std::abs(f.intercept) <= 1e-12);
    CHECK(f.loss == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
  }
  SUBCASE("needs both sentinels") {
    const auto t = make_tangents<double>({TangentPoint::finite(0.0), TangentPoint::plus_inf()});
    CHECK_THROWS(fit_pwl(intercept_only({1, -1}), t));
  }
  SUBCASE("dominance chain") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 20; ++trial) {
      const auto p = random_problem(rng, 50, 2 + trial % 3);
      const auto fp = fit_pwl(p, tset);
      const auto fe = fit_exact(p);
      const double pwl_at_exact = class_objective(Approx::pwl, p, tset, theta_of(fe));
      CHECK(fp.loss <= pwl_at_exact + 1e-9);
      CHECK(pwl_at_exact <= fe.loss + 1e-12);
      CHECK(fp.loss == doctest::Approx(class_objective(Approx::pwl, p, tset, theta_of(fp))).epsilon(1e-12));
    }
  }
}

TEST_CASE("fit_pwl agrees with the explicit LP") {
  std::mt19937_64 rng(41);
  const auto& tset = default_tangents();
  const auto coarse = make_tangents<double>(
      {TangentPoint::minus_inf(), TangentPoint::finite(-1.0), TangentPoint::finite(1.0), TangentPoint::plus_inf()});
  for (int trial = 0; trial < 30; ++trial) {
    // Some instances are separable (large scale, few rows) to exercise the box.
    const Eigen::Index n = trial % 5 == 0 ? 6 : 30;
    const auto p = random_problem(rng, n, 1 + trial % 3, trial % 5 == 0 ? 5.0 : 1.0);
    for (const TangentSet* t : {&tset, &coarse}) {
      const auto fp = fit_pwl(p, *t);
      const LpProblem lp = build_pwl_lp(p, *t);
      const LpSolution sol = solve_lp(lp);
      REQUIRE((sol.status == LpStatus::optimal || sol.status == LpStatus::box_bound_active));
      CHECK(fp.loss == doctest::Approx(sol.objective).epsilon(1e-7));
      CHECK(max_violation(lp, sol.values) <= 1e-7);
    }
  }
}

TEST_CASE("fit_pwl on a vertex shared by many rows") {
  // Rows g_i = s_i (x_i, 1) from a selection run where the first pass of the
  // simplex stalled on a long chain of degenerate pivots.
  std::ifstream in(std::string(SEQLOGIT_TEST_DATA_DIR) + "/degenerate_rows.txt");
  REQUIRE(in);
  std::vector<std::vector<double>> rows;
  for (std::string line; std::getline(in, line);) {
    std::istringstream fields(line);
    rows.emplace_back(std::istream_iterator<double>(fields), std::istream_iterator<double>());
  }
  REQUIRE(rows.size() == 183);
  ClassProblem p;
  p.design.resize(183, 7);
  p.signs.resize(183);
  for (Eigen::Index i = 0; i < 183; ++i) {
    const auto& g = rows[static_cast<std::size_t>(i)];
    REQUIRE(g.size() == 7);
    p.signs(i) = g[6];
    for (Eigen::Index j = 0; j < 7; ++j) p.design(i, j) = g[static_cast<std::size_t>(j)] * g[6];
    p.rows.push_back(i);
  }
  const auto& tset = default_tangents();
  const auto fp = fit_pwl(p, tset);
  REQUIRE_FALSE(fp.box_active);

  // Optimality certificate: some choice of subgradients lambda_i, each within
  // the slopes of the lines active at row i, gives sum_i lambda_i g_i = 0.
  const Eigen::VectorXd theta = theta_of(fp);
  const Eigen::MatrixXd G = p.signs.asDiagonal() * p.design;
  LpProblem cert;
  cert.objective = Eigen::VectorXd::Zero(183);
  cert.rows = G.transpose();
  cert.senses.assign(7, RowSense::equal);
  cert.rhs = Eigen::VectorXd::Zero(7);
  cert.lower.resize(183);
  cert.upper.resize(183);
  cert.boxed.assign(183, false);
  int kinks = 0;
  for (Eigen::Index i = 0; i < 183; ++i) {
    const double v = G.row(i).dot(theta);
    const double top = pwl_loss(tset, v);
    double lo = 1.0, hi = -1.0;
    for (Eigen::Index l = 0; l < tset.size(); ++l)
      if (tset.slopes(l) * v + tset.offsets(l) >= top - 1e-9) {
        lo = std::min(lo, tset.slopes(l));
        hi = std::max(hi, tset.slopes(l));
      }
    kinks += lo < hi ? 1 : 0;
    cert.lower(i) = lo;
    cert.upper(i) = hi;
  }
  CHECK(kinks >= 7);
  const LpSolution sol = solve_lp(cert);
  CHECK(sol.status == LpStatus::optimal);
  CHECK(fp.loss == doctest::Approx(class_objective(Approx::pwl, p, tset, theta)).epsilon(1e-12));
}

TEST_CASE("likelihood and probabilities") {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> g(0.0, 1.0);
  const int m = 3;
  const Eigen::Index n = 25, p = 4;
  Eigen::MatrixXd X(n, p);
  for (auto& v : X.reshaped()) v = g(rng);
  Eigen::VectorXi y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = 1 + static_cast<int>(i % (m + 1));
  const auto enc = encode_labels(y, m, Direction::forward);

  SUBCASE("zero parameters") {
    const auto params = SequentialLogitParams::zeros(p, m);
    double active = 0;
    for (Eigen::Index i = 0; i < n; ++i) active += std::min(y(i), m);
    CHECK(log_likelihood(params, enc, X) == doctest::Approx(-std::log(2.0) * active).epsilon(1e-14));
    const Eigen::VectorXd pr = predict_proba(SequentialLogitParams::zeros(p, 2), X.row(0).transpose());
    CHECK(pr(0) == 0.5);
    CHECK(pr(1) == 0.25);
    CHECK(pr(2) == 0.25);
  }
  SUBCASE("product form oracle") {
    for (int trial = 0; trial < 10; ++trial) {
      SequentialLogitParams params = SequentialLogitParams::zeros(p, m);
      for (auto& v : params.intercepts) v = g(rng);
      for (auto& v : params.weights.reshaped()) v = 0.7 * g(rng);
      CHECK(std::abs(log_likelihood(params, enc, X) - product_form_log_likelihood(params, X, y)) <= 1e-10);
      for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd pr = predict_proba(params, X.row(i).transpose());
        CHECK(std::abs(pr.sum() - 1.0) <= 1e-12);
        CHECK(pr.minCoeff() >= 0.0);
      }
    }
  }
  SUBCASE("saturation") {
    Eigen::MatrixXd x1(1, 1);
    x1 << 0.0;
    Eigen::VectorXi y1(1);
    y1 << 1;
    SequentialLogitParams params = SequentialLogitParams::zeros(1, 1);
    params.intercepts(0) = 50.0;
    const double L = log_likelihood(params, encode_labels(y1, 1, Direction::forward), x1);
    CHECK(L < 0.0);
    CHECK(L > -1e-20);
    CHECK(predict_proba(params, x1.row(0).transpose())(0) == doctest::Approx(1.0));
  }
  SUBCASE("backward output is in original label order") {
    SequentialLogitParams params = SequentialLogitParams::zeros(p, m);
    params.intercepts << 2.0, 0.0, -1.0;
    const Eigen::VectorXd fwd = predict_proba(params, X.row(0).transpose());
    const Eigen::VectorXd bwd = predict_proba(params, X.row(0).transpose(), Direction::backward);
    CHECK(bwd.reverse().isApprox(fwd));
  }
}

TEST_CASE("separability: joint Newton equals per-class fits") {
  std::mt19937_64 rng(47);
  std::normal_distribution<double> g(0.0, 1.0);
  const int m = 3;
  const Eigen::Index n = 120, p = 2;
  Eigen::MatrixXd X(n, p);
  for (auto& v : X.reshaped()) v = g(rng);
  Eigen::VectorXi y(n);
  std::uniform_int_distribution<int> lab(1, m + 1);
  for (auto& v : y) v = lab(rng);
  const auto enc = encode_labels(y, m, Direction::forward);

  double per_class = 0.0;
  const std::vector<int> all = {0, 1};
  for (int k = 0; k < m; ++k) per_class += fit_exact(make_class_problem(X, enc, k, all)).loss;

  // Plain Newton on the stacked parameter vector (b_k, w_k) with the full
  // likelihood's gradient and Hessian.
  const Eigen::Index d = (p + 1) * m;
  Eigen::VectorXd th = Eigen::VectorXd::Zero(d);
  auto unpack = [&](const Eigen::VectorXd& v) {
    SequentialLogitParams prm = SequentialLogitParams::zeros(p, m);
    for (int k = 0; k < m; ++k) {
      prm.weights.col(k) = v.segment(k * (p + 1), p);
      prm.intercepts(k) = v(k * (p + 1) + p);
    }
    return prm;
  };
  for (int it = 0; it < 50; ++it) {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(d);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 0; i < n; ++i)
      for (int k = 0; k < m; ++k) {
        const int s = enc.psi(i, k);
        if (s == 0) continue;
        Eigen::VectorXd xi(p + 1);
        xi << X.row(i).transpose(), 1.0;
        const double v = s * xi.dot(th.segment(k * (p + 1), p + 1));
        const double sig = 1.0 / (1.0 + std::exp(-v));
        grad.segment(k * (p + 1), p + 1) += -(1.0 - sig) * s * xi;
        H.block(k * (p + 1), k * (p + 1), p + 1, p + 1) += sig * (1.0 - sig) * xi * xi.transpose();
      }
    th -= H.ldlt().solve(grad);
  }
  const double joint = -log_likelihood(unpack(th), enc, X);
  CHECK(std::abs(joint - per_class) <= 1e-8);
}

TEST_CASE("fits are deterministic") {
  std::mt19937_64 rng(53);
  const auto p = random_problem(rng, 70, 3);
  for (Approx a : {Approx::exact, Approx::quad, Approx::pwl}) {
    const auto f1 = fit(a, p, default_tangents());
    const auto f2 = fit(a, p, default_tangents());
    CHECK(f1.loss == f2.loss);
    CHECK(f1.intercept == f2.intercept);
    CHECK(f1.coefficients == f2.coefficients);
    CHECK(f1.iterations == f2.iterations);
  }
  CHECK(parse_approx("pwl") == Approx::pwl);
  CHECK(to_string(Approx::quad) == "quad");
}
