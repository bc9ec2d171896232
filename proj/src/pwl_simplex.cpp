#include "pwl_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/LU>

namespace seqlogit::detail {

Envelope upper_envelope(const Eigen::VectorXd& slopes, const Eigen::VectorXd& offsets) {
  std::vector<Eigen::Index> hull;
  for (Eigen::Index l = 0; l < slopes.size(); ++l) {
    if (!hull.empty() && slopes(hull.back()) == slopes(l)) {
      if (offsets(l) <= offsets(hull.back())) continue;
      hull.pop_back();
    }
    while (hull.size() >= 2) {
      const Eigen::Index a = hull[hull.size() - 2];
      const Eigen::Index b = hull.back();
      const double x_ab = (offsets(a) - offsets(b)) / (slopes(b) - slopes(a));
      const double x_al = (offsets(a) - offsets(l)) / (slopes(l) - slopes(a));
      if (x_al <= x_ab) hull.pop_back();
      else break;
    }
    hull.push_back(l);
  }
  Envelope env;
  const auto L = static_cast<Eigen::Index>(hull.size());
  env.slopes.resize(L);
  env.offsets.resize(L);
  env.breaks.resize(std::max<Eigen::Index>(L - 1, 0));
  for (Eigen::Index q = 0; q < L; ++q) {
    env.slopes(q) = slopes(hull[static_cast<std::size_t>(q)]);
    env.offsets(q) = offsets(hull[static_cast<std::size_t>(q)]);
  }
  for (Eigen::Index q = 0; q + 1 < L; ++q)
    env.breaks(q) = (env.offsets(q) - env.offsets(q + 1)) / (env.slopes(q + 1) - env.slopes(q));
  return env;
}

namespace {

struct Slot {
  enum class Type { row, upper, lower, held };
  Type type = Type::held;
  Eigen::Index index = 0;  // row i or variable j
  Eigen::Index brk = 0;    // breakpoint q for rows
  double hold = 0.0;       // value for held variables
};

struct Event {
  double tau;
  long long id;
  bool hard;         // box bound of a variable
  Eigen::Index index;
  Eigen::Index brk;  // breakpoint for rows; +1/-1 bound side for variables
  double increment;

  bool operator>(const Event& o) const { return tau != o.tau ? tau > o.tau : id > o.id; }
};

Eigen::Index segment_of(const Eigen::VectorXd& breaks, double r) {
  const double* b = breaks.data();
  return static_cast<Eigen::Index>(std::lower_bound(b, b + breaks.size(), r) - b);
}

struct State {
  std::vector<Slot> slots;
  std::vector<Eigen::Index> basic_slot;  // slot holding row i, or -1
  std::vector<Eigen::Index> var_slot;    // slot holding variable j, or -1
  std::vector<Eigen::Index> seg;         // current segment of each nonbasic row
  Eigen::VectorXd theta;
};

enum class Outcome { optimal, stalled };

// One simplex pass. Row i has its breakpoints shifted by shift(i). Returns
// stalled once a run of degenerate pivots exceeds stall_after.
Outcome simplex_pass(const Eigen::MatrixXd& G, const Eigen::VectorXd& w, const Envelope& env, double box,
                     const Eigen::VectorXd& shift, long stall_after, int& iterations, int max_iterations,
                     State& st) {
  const Eigen::Index N = G.rows();
  const Eigen::Index d = G.cols();
  const Eigen::Index L = env.lines();
  const Eigen::Index nbreaks = env.breaks.size();
  const auto& a = env.slopes;
  const auto& beta = env.breaks;
  auto& slots = st.slots;
  auto& basic_slot = st.basic_slot;
  auto& var_slot = st.var_slot;
  auto& seg = st.seg;
  auto& theta = st.theta;

  auto row_id = [&](Eigen::Index i, Eigen::Index q) { return static_cast<long long>(d + i * L + q); };
  auto brk = [&](Eigen::Index i, Eigen::Index q) { return beta(q) + shift(i); };

  const Eigen::VectorXd row_scale = G.cwiseAbs().rowwise().maxCoeff();
  const double scale = 1.0 + w.dot(row_scale);
  const double rate_tol = 1e-12 * scale;

  Eigen::VectorXd r(N);
  Eigen::MatrixXd B(d, d);
  Eigen::VectorXd rhs(d);
  Eigen::VectorXd coef(N);
  long degenerate_run = 0;
  bool bland = false;

  for (;; ++iterations) {
    if (iterations >= max_iterations) throw std::runtime_error("piecewise-linear simplex: iteration cap reached");
    if (degenerate_run > stall_after) return Outcome::stalled;

    for (Eigen::Index s = 0; s < d; ++s) {
      const Slot& slot = slots[static_cast<std::size_t>(s)];
      switch (slot.type) {
        case Slot::Type::row:
          B.row(s) = G.row(slot.index);
          rhs(s) = brk(slot.index, slot.brk);
          break;
        case Slot::Type::upper:
        case Slot::Type::lower:
        case Slot::Type::held:
          B.row(s).setZero();
          B(s, slot.index) = 1.0;
          rhs(s) = slot.type == Slot::Type::upper ? box : slot.type == Slot::Type::lower ? -box : slot.hold;
          break;
      }
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    theta = lu.solve(rhs);
    r.noalias() = G * theta;

    for (Eigen::Index i = 0; i < N; ++i) {
      auto& si = seg[static_cast<std::size_t>(i)];
      if (basic_slot[static_cast<std::size_t>(i)] >= 0) {
        coef(i) = 0.0;
        continue;
      }
      const double ri = r(i) - shift(i);
      const double slack = 1e-9 * (1.0 + std::abs(ri));
      const bool below = si > 0 && ri < beta(si - 1) - slack;
      const bool above = si < nbreaks && ri > beta(si) + slack;
      if (below || above) si = segment_of(beta, ri);
      coef(i) = w(i) * a(si);
    }
    const Eigen::VectorXd grad = G.transpose() * coef;
    const Eigen::VectorXd pi = lu.transpose().solve(grad);

    // Pricing: rate of change of the objective when slot s is released in
    // direction sigma (the slot's constraint value moves by sigma).
    Eigen::Index enter_slot = -1;
    int enter_sigma = 0;
    double enter_rate = -rate_tol;
    long long enter_id = 0;
    for (Eigen::Index s = 0; s < d; ++s) {
      const Slot& slot = slots[static_cast<std::size_t>(s)];
      double rates[2] = {0.0, 0.0};  // sigma = +1, -1
      bool allowed[2] = {true, true};
      long long id = slot.index;
      switch (slot.type) {
        case Slot::Type::row:
          rates[0] = pi(s) + w(slot.index) * a(slot.brk + 1);
          rates[1] = -pi(s) - w(slot.index) * a(slot.brk);
          id = row_id(slot.index, slot.brk);
          break;
        case Slot::Type::upper:
          allowed[0] = false;
          rates[1] = -pi(s);
          break;
        case Slot::Type::lower:
          allowed[1] = false;
          rates[0] = pi(s);
          break;
        case Slot::Type::held:
          rates[0] = pi(s);
          rates[1] = -pi(s);
          break;
      }
      for (int c = 0; c < 2; ++c) {
        if (!allowed[c] || !(rates[c] < -rate_tol)) continue;
        const bool better = enter_slot < 0 ||
                            (bland ? id < enter_id
                                   : (rates[c] < enter_rate || (rates[c] == enter_rate && id < enter_id)));
        if (better) {
          enter_slot = s;
          enter_sigma = c == 0 ? 1 : -1;
          enter_rate = rates[c];
          enter_id = id;
        }
      }
    }
    if (enter_slot < 0) return Outcome::optimal;

    Eigen::VectorXd unit = Eigen::VectorXd::Zero(d);
    unit(enter_slot) = enter_sigma;
    const Eigen::VectorXd dir = lu.solve(unit);
    Eigen::VectorXd rho = G * dir;

    Slot released = slots[static_cast<std::size_t>(enter_slot)];
    if (released.type == Slot::Type::row) {
      basic_slot[static_cast<std::size_t>(released.index)] = -1;
      seg[static_cast<std::size_t>(released.index)] = enter_sigma > 0 ? released.brk + 1 : released.brk;
      rho(released.index) = enter_sigma;
    } else {
      var_slot[static_cast<std::size_t>(released.index)] = -1;
    }
    for (Eigen::Index i = 0; i < N; ++i)
      if (basic_slot[static_cast<std::size_t>(i)] >= 0) rho(i) = 0.0;

    std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
    const double dir_scale = dir.cwiseAbs().maxCoeff();
    auto push_row = [&](Eigen::Index i) {
      const double rr = rho(i);
      if (std::abs(rr) <= 1e-12 * row_scale(i) * dir_scale) return;
      const Eigen::Index si = seg[static_cast<std::size_t>(i)];
      const Eigen::Index q = rr > 0 ? si : si - 1;
      if (q < 0 || q >= nbreaks) return;
      const double tau = std::max(0.0, (brk(i, q) - r(i)) / rr);
      events.push({tau, row_id(i, q), false, i, q, w(i) * std::abs(rr) * (a(q + 1) - a(q))});
    };
    for (Eigen::Index i = 0; i < N; ++i)
      if (basic_slot[static_cast<std::size_t>(i)] < 0) push_row(i);
    for (Eigen::Index j = 0; j < d; ++j) {
      if (var_slot[static_cast<std::size_t>(j)] >= 0) continue;
      const double dj = dir(j);
      if (std::abs(dj) <= 1e-13 * dir_scale) continue;
      const double tau = dj > 0 ? (box - theta(j)) / dj : (theta(j) + box) / -dj;
      events.push({std::max(0.0, tau), static_cast<long long>(j), true, j, dj > 0 ? 1 : -1, 0.0});
    }

    double rate = enter_rate;
    bool blocked = false;
    Event block{};
    while (!events.empty()) {
      const Event e = events.top();
      events.pop();
      if (e.hard) {
        block = e;
        blocked = true;
        break;
      }
      rate += e.increment;
      if (rate >= -rate_tol) {
        block = e;
        blocked = true;
        break;
      }
      auto& si = seg[static_cast<std::size_t>(e.index)];
      si += rho(e.index) > 0 ? 1 : -1;
      push_row(e.index);
    }
    if (!blocked) throw std::runtime_error("piecewise-linear simplex: unbounded direction");

    Slot& target = slots[static_cast<std::size_t>(enter_slot)];
    if (block.hard) {
      target = {block.brk > 0 ? Slot::Type::upper : Slot::Type::lower, block.index, 0, 0.0};
      var_slot[static_cast<std::size_t>(block.index)] = enter_slot;
    } else {
      target = {Slot::Type::row, block.index, block.brk, 0.0};
      basic_slot[static_cast<std::size_t>(block.index)] = enter_slot;
    }

    if (block.tau <= 1e-14 * (1.0 + theta.cwiseAbs().maxCoeff())) {
      if (++degenerate_run > 30) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }
  }
}

}  // namespace

PwlSimplexResult minimize_pwl(const Eigen::MatrixXd& G, const Eigen::VectorXd& w, const Envelope& env,
                              double box, const Eigen::VectorXd& start) {
  const Eigen::Index N = G.rows();
  const Eigen::Index d = G.cols();
  const Eigen::Index L = env.lines();
  if (L < 1) throw std::invalid_argument("empty envelope");

  State st;
  st.theta = start.cwiseMax(-box).cwiseMin(box);
  st.slots.resize(static_cast<std::size_t>(d));
  st.var_slot.resize(static_cast<std::size_t>(d));
  for (Eigen::Index j = 0; j < d; ++j) {
    st.slots[static_cast<std::size_t>(j)] = {Slot::Type::held, j, 0, st.theta(j)};
    st.var_slot[static_cast<std::size_t>(j)] = j;
  }
  st.basic_slot.assign(static_cast<std::size_t>(N), -1);
  st.seg.resize(static_cast<std::size_t>(N));
  const Eigen::VectorXd r0 = G * st.theta;
  for (Eigen::Index i = 0; i < N; ++i) st.seg[static_cast<std::size_t>(i)] = segment_of(env.breaks, r0(i));

  int iterations = 0;
  const int max_iterations = static_cast<int>(std::min<long long>(50LL * (N + d) + 1000, 2'000'000));
  const long stall_after = 200 + 4 * static_cast<long>(d);
  const Eigen::VectorXd no_shift = Eigen::VectorXd::Zero(N);

  if (simplex_pass(G, w, env, box, no_shift, stall_after, iterations, max_iterations, st) == Outcome::stalled) {
    // Many rows meet at one vertex. Separate them with small fixed per-row
    // breakpoint shifts, then polish on the original breakpoints from the
    // basis that was found.
    const double span = env.breaks.size() > 0 ? env.breaks.cwiseAbs().maxCoeff() : 1.0;
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> unit(0.5, 1.0);
    Eigen::VectorXd shift(N);
    for (auto& v : shift) v = 1e-7 * (1.0 + span) * unit(rng);
    simplex_pass(G, w, env, box, shift, max_iterations, iterations, max_iterations, st);
    simplex_pass(G, w, env, box, no_shift, max_iterations, iterations, max_iterations, st);
  }

  PwlSimplexResult out;
  out.theta = st.theta.cwiseMax(-box).cwiseMin(box);
  const Eigen::VectorXd margins = G * out.theta;
  double total = 0.0;
  for (Eigen::Index i = 0; i < N; ++i) {
    double best = env.slopes(0) * margins(i) + env.offsets(0);
    for (Eigen::Index q = 1; q < L; ++q) best = std::max(best, env.slopes(q) * margins(i) + env.offsets(q));
    total += w(i) * best;
  }
  out.objective = total;
  out.iterations = iterations;
  out.box_active = (out.theta.cwiseAbs().array() >= box * (1.0 - 1e-12)).any();
  return out;
}

}  // namespace seqlogit::detail
