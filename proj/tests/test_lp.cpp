#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "seqlogit/lp.hpp"

using namespace seqlogit;

namespace {

// Brute force over all choices of nv active constraints (rows and finite
// bounds written as a.x <= b). Returns +inf when nothing is feasible.
double vertex_enumeration(const LpProblem& lp, Eigen::VectorXd* argmin = nullptr) {
  const Eigen::Index nv = lp.num_vars();
  std::vector<Eigen::VectorXd> A;
  std::vector<double> b;
  for (Eigen::Index r = 0; r < lp.num_rows(); ++r) {
    const auto s = lp.senses[static_cast<std::size_t>(r)];
    if (s != RowSense::greater_equal) {
      A.push_back(lp.rows.row(r).transpose());
      b.push_back(lp.rhs(r));
    }
    if (s != RowSense::less_equal) {
      A.push_back(-lp.rows.row(r).transpose());
      b.push_back(-lp.rhs(r));
    }
  }
  for (Eigen::Index j = 0; j < nv; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(nv);
    e(j) = 1.0;
    if (std::isfinite(lp.upper(j))) {
      A.push_back(e);
      b.push_back(lp.upper(j));
    }
    if (std::isfinite(lp.lower(j))) {
      A.push_back(-e);
      b.push_back(-lp.lower(j));
    }
  }
  const auto m = A.size();
  double best = std::numeric_limits<double>::infinity();
  // Iterate over combinations of size nv.
  std::vector<bool> mask(m, false);
  std::fill(mask.begin(), mask.begin() + nv, true);
  do {
    Eigen::MatrixXd M(nv, nv);
    Eigen::VectorXd rhs(nv);
    Eigen::Index r = 0;
    for (std::size_t c = 0; c < m; ++c)
      if (mask[c]) {
        M.row(r) = A[c].transpose();
        rhs(r) = b[c];
        ++r;
      }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (lu.rank() < nv) continue;
    const Eigen::VectorXd x = lu.solve(rhs);
    bool feasible = true;
    for (std::size_t c = 0; c < m && feasible; ++c) feasible = A[c].dot(x) <= b[c] + 1e-9;
    if (!feasible) continue;
    const double obj = lp.objective.dot(x);
    if (obj < best) {
      best = obj;
      if (argmin) *argmin = x;
    }
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

LpProblem make(Eigen::Index nv) {
  LpProblem lp;
  lp.objective = Eigen::VectorXd::Zero(nv);
  lp.lower = Eigen::VectorXd::Zero(nv);
  lp.upper = Eigen::VectorXd::Constant(nv, LpProblem::inf);
  lp.rows.resize(0, nv);
  return lp;
}

void add_row(LpProblem& lp, std::initializer_list<double> coefs, RowSense s, double rhs) {
  const Eigen::Index r = lp.num_rows();
  lp.rows.conservativeResize(r + 1, Eigen::NoChange);
  Eigen::Index j = 0;
  for (double c : coefs) lp.rows(r, j++) = c;
  lp.senses.push_back(s);
  lp.rhs.conservativeResize(r + 1);
  lp.rhs(r) = rhs;
}

}  // namespace

TEST_CASE("sentinel-only epigraph") {
  // variables (v, t): min t  s.t.  t + v >= 0, t >= 0, v in [-100, 100]
  LpProblem lp = make(2);
  lp.objective << 0, 1;
  lp.lower << -100, -LpProblem::inf;
  lp.upper << 100, LpProblem::inf;
  add_row(lp, {1, 1}, RowSense::greater_equal, 0);
  add_row(lp, {0, 1}, RowSense::greater_equal, 0);
  const auto sol = solve_lp(lp);
  CHECK(sol.status == LpStatus::optimal);
  CHECK(sol.objective == doctest::Approx(0.0));
  CHECK(max_violation(lp, sol.values) <= 1e-9);
}

TEST_CASE("three-variable LP matches its vertices") {
  // max 3x + 2y + 4z  s.t. x + y + 2z <= 4, 2x + z <= 5, x + 3y + z <= 7, x,y,z >= 0
  LpProblem lp = make(3);
  lp.objective << -3, -2, -4;
  add_row(lp, {1, 1, 2}, RowSense::less_equal, 4);
  add_row(lp, {2, 0, 1}, RowSense::less_equal, 5);
  add_row(lp, {1, 3, 1}, RowSense::less_equal, 7);
  Eigen::VectorXd vertex;
  const double oracle = vertex_enumeration(lp, &vertex);
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.objective == doctest::Approx(oracle).epsilon(1e-12));
  CHECK((sol.values - vertex).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(std::abs(sol.objective - lp.objective.dot(sol.values)) <= 1e-9);
}

TEST_CASE("infeasible and unbounded") {
  SUBCASE("contradictory fixed bounds") {
    LpProblem lp = make(2);
    lp.objective << 1, 1;
    lp.lower << 1, 0;
    lp.upper << 1, 5;
    add_row(lp, {1, 1}, RowSense::equal, 0.5);
    CHECK(solve_lp(lp).status == LpStatus::infeasible);
  }
  SUBCASE("lower above upper") {
    LpProblem lp = make(1);
    lp.lower << 2;
    lp.upper << 1;
    CHECK(solve_lp(lp).status == LpStatus::infeasible);
  }
  SUBCASE("unbounded ray") {
    LpProblem lp = make(2);
    lp.objective << -1, 0;
    add_row(lp, {1, -1}, RowSense::less_equal, 1);
    CHECK(solve_lp(lp).status == LpStatus::unbounded);
  }
}

TEST_CASE("box-bound-active status") {
  // min t  s.t. t >= -b, t >= 0 with b boxed: optimum has b at the box when pushed.
  LpProblem lp = make(2);
  lp.objective << -1e-3, 1;
  lp.lower << -100, -LpProblem::inf;
  lp.upper << 100, LpProblem::inf;
  lp.boxed = {true, false};
  add_row(lp, {1, 1}, RowSense::greater_equal, 0);
  add_row(lp, {0, 1}, RowSense::greater_equal, 0);
  const auto sol = solve_lp(lp);
  CHECK(sol.status == LpStatus::box_bound_active);
  CHECK(sol.values(0) == doctest::Approx(100.0));
}

TEST_CASE("random small LPs agree with vertex enumeration") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_int_distribution<int> sense_pick(0, 2);
  int solved = 0, infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Index nv = 2 + trial % 3;
    LpProblem lp = make(nv);
    for (Eigen::Index j = 0; j < nv; ++j) {
      lp.objective(j) = u(rng);
      lp.lower(j) = -5.0 + (trial % 2) * u(rng);
      lp.upper(j) = 5.0;
    }
    const int rows = 2 + trial % 4;
    for (int r = 0; r < rows; ++r) {
      const Eigen::Index at = lp.num_rows();
      lp.rows.conservativeResize(at + 1, Eigen::NoChange);
      for (Eigen::Index j = 0; j < nv; ++j) lp.rows(at, j) = std::round(u(rng) * 2.0) / 2.0;
      const int s = sense_pick(rng);
      lp.senses.push_back(s == 0 ? RowSense::less_equal : s == 1 ? RowSense::greater_equal : RowSense::equal);
      lp.rhs.conservativeResize(at + 1);
      lp.rhs(at) = u(rng);
    }
    const double oracle = vertex_enumeration(lp);
    const auto sol = solve_lp(lp);
    if (!std::isfinite(oracle)) {
      CHECK(sol.status == LpStatus::infeasible);
      ++infeasible;
      continue;
    }
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(max_violation(lp, sol.values) <= 1e-7);
    ++solved;
  }
  CHECK(solved > 100);
  CHECK(infeasible > 0);
}

TEST_CASE("free variables and degenerate rows") {
  // min |x - 1| + |y + 2| via epigraphs with free x, y; duplicated rows.
  LpProblem lp = make(4);
  lp.objective << 0, 0, 1, 1;
  lp.lower << -LpProblem::inf, -LpProblem::inf, -LpProblem::inf, -LpProblem::inf;
  for (int dup = 0; dup < 3; ++dup) {
    add_row(lp, {-1, 0, 1, 0}, RowSense::greater_equal, -1);
    add_row(lp, {1, 0, 1, 0}, RowSense::greater_equal, 1);
    add_row(lp, {0, -1, 0, 1}, RowSense::greater_equal, 2);
    add_row(lp, {0, 1, 0, 1}, RowSense::greater_equal, -2);
  }
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.objective == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sol.values(0) == doctest::Approx(1.0));
  CHECK(sol.values(1) == doctest::Approx(-2.0));
}

TEST_CASE("size guard") {
  LpProblem lp = make(3);
  add_row(lp, {1, 1, 1}, RowSense::less_equal, 1);
  LpOptions opts;
  opts.max_tableau_entries = 4;
  CHECK_THROWS_AS(solve_lp(lp, opts), std::runtime_error);
  CHECK(to_string(LpStatus::box_bound_active) == "box-bound-active");
}
