#include "seqlogit/lp.hpp"

#include <cmath>
#include <stdexcept>

namespace seqlogit {

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::box_bound_active: return "box-bound-active";
  }
  return "?";
}

namespace {

// x_j = shift + sign * x'_pos - x'_neg  (neg < 0 when absent)
struct VarMap {
  Eigen::Index pos = -1;
  Eigen::Index neg = -1;
  double shift = 0.0;
  double sign = 1.0;
};

class Tableau {
 public:
  using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  Tableau(Eigen::Index rows, Eigen::Index cols) : T_(Matrix::Zero(rows + 1, cols + 1)), basis_(rows) {}

  Matrix& data() { return T_; }
  std::vector<Eigen::Index>& basis() { return basis_; }
  Eigen::Index rows() const { return T_.rows() - 1; }
  Eigen::Index cols() const { return T_.cols() - 1; }
  double rhs(Eigen::Index r) const { return T_(r, cols()); }

  void pivot(Eigen::Index r, Eigen::Index c) {
    T_.row(r) /= T_(r, c);
    for (Eigen::Index i = 0; i <= rows(); ++i) {
      if (i == r) continue;
      const double factor = T_(i, c);
      if (factor != 0.0) T_.row(i) -= factor * T_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  /// Returns false when the problem is unbounded along some column.
  bool run(Eigen::Index allowed_cols, const LpOptions& opts, long& iterations) {
    int degenerate_run = 0;
    bool bland = false;
    const double tol = opts.feasibility_tol;
    for (;;) {
      if (++iterations > opts.max_iterations) throw std::runtime_error("simplex: cycling guard tripped");
      Eigen::Index enter = -1;
      double best = -tol;
      for (Eigen::Index c = 0; c < allowed_cols; ++c) {
        const double rc = T_(rows(), c);
        if (rc < -tol) {
          if (bland) {
            enter = c;
            break;
          }
          if (rc < best) {
            best = rc;
            enter = c;
          }
        }
      }
      if (enter < 0) return true;

      Eigen::Index leave = -1;
      double ratio = 0.0;
      for (Eigen::Index r = 0; r < rows(); ++r) {
        const double a = T_(r, enter);
        if (a <= tol) continue;
        const double q = T_(r, cols()) / a;
        if (leave < 0 || q < ratio ||
            (q == ratio && basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)])) {
          leave = r;
          ratio = q;
        }
      }
      if (leave < 0) return false;
      if (ratio <= tol) {
        if (++degenerate_run > 50) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
      pivot(leave, enter);
    }
  }

 private:
  Matrix T_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace

LpSolution solve_lp(const LpProblem& lp, const LpOptions& opts) {
  const Eigen::Index nv = lp.num_vars();
  const Eigen::Index nr = lp.num_rows();
  if (lp.rows.cols() != nv || lp.rhs.size() != nr || static_cast<Eigen::Index>(lp.senses.size()) != nr ||
      lp.lower.size() != nv || lp.upper.size() != nv)
    throw std::invalid_argument("solve_lp: inconsistent problem dimensions");

  LpSolution out;
  std::vector<VarMap> map(static_cast<std::size_t>(nv));
  std::vector<std::pair<Eigen::Index, double>> bound_rows;
  Eigen::Index cols = 0;
  for (Eigen::Index j = 0; j < nv; ++j) {
    const double l = lp.lower(j), u = lp.upper(j);
    if (l > u) return out;  // infeasible
    VarMap& vm = map[static_cast<std::size_t>(j)];
    if (std::isfinite(l)) {
      vm = {cols++, -1, l, 1.0};
      if (std::isfinite(u)) bound_rows.emplace_back(vm.pos, u - l);
    } else if (std::isfinite(u)) {
      vm = {cols++, -1, u, -1.0};
    } else {
      vm.pos = cols++;
      vm.neg = cols++;
    }
  }

  const Eigen::Index R = nr + static_cast<Eigen::Index>(bound_rows.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(R, cols);
  Eigen::VectorXd b(R);
  std::vector<RowSense> sense(static_cast<std::size_t>(R), RowSense::less_equal);
  for (Eigen::Index r = 0; r < nr; ++r) {
    double rhs = lp.rhs(r);
    for (Eigen::Index j = 0; j < nv; ++j) {
      const double a = lp.rows(r, j);
      if (a == 0.0) continue;
      const VarMap& vm = map[static_cast<std::size_t>(j)];
      A(r, vm.pos) += a * vm.sign;
      if (vm.neg >= 0) A(r, vm.neg) -= a;
      rhs -= a * vm.shift;
    }
    b(r) = rhs;
    sense[static_cast<std::size_t>(r)] = lp.senses[static_cast<std::size_t>(r)];
  }
  for (std::size_t k = 0; k < bound_rows.size(); ++k) {
    const Eigen::Index r = nr + static_cast<Eigen::Index>(k);
    A(r, bound_rows[k].first) = 1.0;
    b(r) = bound_rows[k].second;
  }

  Eigen::Index slacks = 0;
  for (auto s : sense) slacks += s == RowSense::equal ? 0 : 1;
  std::vector<double> slack_sign(static_cast<std::size_t>(R), 0.0);
  std::vector<Eigen::Index> slack_col(static_cast<std::size_t>(R), -1);
  {
    Eigen::Index next = cols;
    for (Eigen::Index r = 0; r < R; ++r) {
      const auto s = sense[static_cast<std::size_t>(r)];
      if (s == RowSense::equal) continue;
      slack_col[static_cast<std::size_t>(r)] = next++;
      slack_sign[static_cast<std::size_t>(r)] = s == RowSense::less_equal ? 1.0 : -1.0;
    }
  }
  std::vector<double> row_flip(static_cast<std::size_t>(R), 1.0);
  Eigen::Index artificials = 0;
  for (Eigen::Index r = 0; r < R; ++r) {
    if (b(r) < 0.0) row_flip[static_cast<std::size_t>(r)] = -1.0;
    const bool slack_basic = slack_col[static_cast<std::size_t>(r)] >= 0 &&
                             slack_sign[static_cast<std::size_t>(r)] * row_flip[static_cast<std::size_t>(r)] > 0.0;
    if (!slack_basic) ++artificials;
  }
  const Eigen::Index C1 = cols + slacks;
  const Eigen::Index C = C1 + artificials;
  if (static_cast<long long>(R + 1) * static_cast<long long>(C + 1) > opts.max_tableau_entries)
    throw std::runtime_error("solve_lp: problem exceeds the dense tableau size guard");

  Tableau tab(R, C);
  Tableau::Matrix& T = tab.data();
  Eigen::Index next_art = C1;
  for (Eigen::Index r = 0; r < R; ++r) {
    const double flip = row_flip[static_cast<std::size_t>(r)];
    T.row(r).head(cols) = flip * A.row(r);
    const Eigen::Index sc = slack_col[static_cast<std::size_t>(r)];
    if (sc >= 0) T(r, sc) = flip * slack_sign[static_cast<std::size_t>(r)];
    T(r, C) = flip * b(r);
    if (sc >= 0 && T(r, sc) > 0.0) {
      tab.basis()[static_cast<std::size_t>(r)] = sc;
    } else {
      T(r, next_art) = 1.0;
      tab.basis()[static_cast<std::size_t>(r)] = next_art++;
    }
  }

  // Phase 1: minimize the sum of artificials.
  for (Eigen::Index r = 0; r < R; ++r)
    if (tab.basis()[static_cast<std::size_t>(r)] >= C1) T.row(R) -= T.row(r);
  for (Eigen::Index c = C1; c < C; ++c) T(R, c) = 0.0;
  if (artificials > 0) {
    tab.run(C, opts, out.iterations);
    const double infeasibility = -T(R, C);
    if (infeasibility > opts.feasibility_tol * (1.0 + b.cwiseAbs().maxCoeff())) return out;
    for (Eigen::Index r = 0; r < R; ++r) {
      if (tab.basis()[static_cast<std::size_t>(r)] < C1) continue;
      for (Eigen::Index c = 0; c < C1; ++c)
        if (std::abs(T(r, c)) > 1e-9) {
          tab.pivot(r, c);
          break;
        }
    }
  }

  // Phase 2.
  T.row(R).setZero();
  for (Eigen::Index j = 0; j < nv; ++j) {
    const VarMap& vm = map[static_cast<std::size_t>(j)];
    const double c = lp.objective(j);
    T(R, vm.pos) += c * vm.sign;
    if (vm.neg >= 0) T(R, vm.neg) -= c;
  }
  for (Eigen::Index r = 0; r < R; ++r) {
    const Eigen::Index bc = tab.basis()[static_cast<std::size_t>(r)];
    const double cost = T(R, bc);
    if (cost != 0.0) T.row(R) -= cost * T.row(r);
  }
  if (!tab.run(C1, opts, out.iterations)) {
    out.status = LpStatus::unbounded;
    return out;
  }

  Eigen::VectorXd xs = Eigen::VectorXd::Zero(C);
  for (Eigen::Index r = 0; r < R; ++r) xs(tab.basis()[static_cast<std::size_t>(r)]) = T(r, C);
  out.values.resize(nv);
  for (Eigen::Index j = 0; j < nv; ++j) {
    const VarMap& vm = map[static_cast<std::size_t>(j)];
    double v = vm.shift + vm.sign * xs(vm.pos);
    if (vm.neg >= 0) v -= xs(vm.neg);
    out.values(j) = v;
  }
  out.objective = lp.objective.dot(out.values);
  out.status = LpStatus::optimal;
  for (Eigen::Index j = 0; j < nv; ++j) {
    if (j >= static_cast<Eigen::Index>(lp.boxed.size()) || !lp.boxed[static_cast<std::size_t>(j)]) continue;
    const double v = out.values(j);
    const double tol = 1e-9 * (1.0 + std::abs(v));
    if (std::abs(v - lp.lower(j)) <= tol || std::abs(v - lp.upper(j)) <= tol) out.status = LpStatus::box_bound_active;
  }
  return out;
}

double max_violation(const LpProblem& lp, const Eigen::VectorXd& x) {
  double worst = 0.0;
  const Eigen::VectorXd lhs = lp.rows * x;
  for (Eigen::Index r = 0; r < lp.num_rows(); ++r) {
    const double diff = lhs(r) - lp.rhs(r);
    switch (lp.senses[static_cast<std::size_t>(r)]) {
      case RowSense::less_equal: worst = std::max(worst, diff); break;
      case RowSense::greater_equal: worst = std::max(worst, -diff); break;
      case RowSense::equal: worst = std::max(worst, std::abs(diff)); break;
    }
  }
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    worst = std::max(worst, lp.lower(j) - x(j));
    worst = std::max(worst, x(j) - lp.upper(j));
  }
  return worst;
}

}  // namespace seqlogit
