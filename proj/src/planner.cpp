#include "hs/planner.hpp"

#include "hs/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace hs {

namespace {

std::string fmt_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

StateVector truncated_or_empty(const StateVector& s, double tail_tol) {
  try {
    return truncate_tail(s, tail_tol).state;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ZeroState) {
      throw Error(ErrorCode::EmptySupport, "no coefficient above tail_tol " + fmt_num(tail_tol));
    }
    throw;
  }
}

}  // namespace

int Plan::L() const {
  return static_cast<int>(std::count_if(ops.begin(), ops.end(), [](const PrimitiveOp& op) { return op.is_shift(); }));
}

int Plan::N() const { return static_cast<int>(ops.size()) - L(); }

Plan Plan::inverse() const {
  Plan out;
  out.excursion = excursion;
  out.ops.reserve(ops.size());
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) out.ops.push_back(it->inverse());
  return out;
}

Plan reduce_to_e0(const StateVector& s, double tail_tol) {
  const StateVector trunc = truncated_or_empty(s, tail_tol);
  const auto initial = trunc.support(kSupportTol);
  if (!initial) throw Error(ErrorCode::EmptySupport, "state vanishes at the support tolerance");

  // The sweep never moves amplitude above index 1, and the lowest index drops
  // by at most |lo| + |hi| during the first alignment.
  const long reach = std::abs(initial->lo()) + std::abs(initial->hi()) + initial->size() + 2;
  StateVector work = embed(trunc, IndexWindow::centered(reach));

  Plan plan;
  IndexWindow excursion = initial->hull(IndexWindow(0, 1));
  auto push = [&](PrimitiveOp op) {
    work = apply(work, op);
    if (const auto sup = work.support(kSupportTol)) excursion = excursion.hull(*sup);
    plan.ops.push_back(std::move(op));
  };

  for (;;) {
    const auto sup = work.support(kSupportTol);
    if (sup->lo() == 0 && sup->hi() == 0) break;
    for (long h = sup->hi(); h != 1;) {
      const int dir = h < 1 ? 1 : -1;
      push(PrimitiveOp::shift(dir));
      h += dir;
    }
    const Complex a0 = work.at(0);
    const Complex a1 = work.at(1);
    const double r = std::hypot(std::abs(a0), std::abs(a1));
    Matrix2 merge;
    merge << std::conj(a0), std::conj(a1), -a1, a0;
    push(PrimitiveOp::two_level(merge / r));
  }

  const Complex a0 = work.at(0);
  Matrix2 phase = Matrix2::Identity();
  phase(0, 0) = std::conj(a0) / std::abs(a0);
  push(PrimitiveOp::two_level(phase));

  plan.excursion = excursion;
  return plan;
}

Plan synthesize_plan(const StateVector& s0, const StateVector& target, double tail_tol) {
  Plan forward = reduce_to_e0(s0, tail_tol);
  const Plan backward = reduce_to_e0(target, tail_tol).inverse();
  forward.ops.insert(forward.ops.end(), backward.ops.begin(), backward.ops.end());
  forward.excursion = forward.excursion.hull(backward.excursion);
  return forward;
}

StateVector apply_plan_exact(const StateVector& s0, const Plan& plan) {
  StateVector s = s0;
  for (const auto& op : plan.ops) s = apply(s, op);
  return s;
}

std::vector<StateVector> plan_trajectory(const StateVector& s0, const Plan& plan) {
  std::vector<StateVector> out;
  out.reserve(plan.ops.size() + 1);
  out.push_back(s0);
  for (const auto& op : plan.ops) out.push_back(apply(out.back(), op));
  return out;
}

IndexWindow plan_window(const StateVector& s0, const Plan& plan, long margin) {
  const IndexWindow base = s0.support(0.0).value_or(s0.window());
  return base.hull(plan.excursion).padded(margin);
}

IndexWindow simulation_window(const StateVector& trial_state, const Plan& plan, int p) {
  return plan_window(trial_state, plan, std::max(p, 0) + 2);
}

double two_level_pulse_error(const Matrix2& u, const HamiltonianSpec& h0, double dt,
                             const StateVector& psi) {
  const auto& w = psi.window();
  if (!w.contains(0) || !w.contains(1)) {
    throw Error(ErrorCode::WindowMissesBlock, "window does not contain indices 0 and 1");
  }
  Matrix2 generator = principal_generator(u);
  generator(0, 0) += dt * h0.value(0);
  generator(1, 1) += dt * h0.value(1);
  Eigen::SelfAdjointEigenSolver<Matrix2> eig(generator);
  const Eigen::Vector2cd phases = (Complex(0.0, 1.0) * eig.eigenvalues().cast<Complex>()).array().exp();
  const Matrix2 pulse = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();

  double acc = 0.0;
  const Eigen::Vector2cd pair(psi.at(0), psi.at(1));
  acc += ((u - pulse) * pair).squaredNorm();
  for (long k = w.lo(); k <= w.hi(); ++k) {
    if (k == 0 || k == 1) continue;
    const Complex phase = std::polar(1.0, dt * h0.value(k));
    acc += std::norm((1.0 - phase) * psi.at(k));
  }
  return std::sqrt(acc);
}

ErrorBudget allocate_budget(const Plan& plan, double delta, double delta_tail,
                            const HamiltonianSpec& h0, const StateVector& trial_state,
                            const BudgetOptions& options) {
  if (plan.ops.empty()) throw Error(ErrorCode::BadParams, "cannot budget an empty plan");
  if (!(delta > 0.0) || !(delta_tail >= 0.0) || !(delta_tail < delta)) {
    throw Error(ErrorCode::BadParams, "need 0 <= delta_tail < delta");
  }

  ErrorBudget budget;
  budget.delta = delta;
  budget.delta_tail = delta_tail;
  budget.L = plan.L();
  budget.N = plan.N();

  // Each species gets a third; the factor keeps the ledger sum strictly
  // below delta after rounding.
  const double share = (delta - delta_tail) / 3.0 * (1.0 - 1e-12);
  auto infeasible = [&](const std::string& line) {
    if (!options.best_effort) throw Error(ErrorCode::BudgetInfeasible, line);
    if (budget.feasible) {
      budget.feasible = false;
      budget.violation = line;
    }
  };

  if (budget.L > 0) {
    const double cap = share / budget.L;
    long limit = options.p_max;
    if (options.max_dim > 0) {
      const long base = plan_window(trial_state, plan, 0).size();
      limit = std::min(limit, (options.max_dim - base) / 2 - 2);
    }
    int p = 1;
    double eps = remainder_bound(p, default_quadrature_nodes(p));
    while (eps > cap && 2L * p <= limit) {
      p *= 2;
      eps = remainder_bound(p, default_quadrature_nodes(p));
    }
    if (limit < 1) {
      infeasible("window: max_dim " + std::to_string(options.max_dim) +
                 " leaves no room for the B_p padding");
    } else if (eps > cap) {
      infeasible("eps_shift: remainder_bound(" + std::to_string(p) + ") = " + fmt_num(eps) +
                 " exceeds cap (delta - delta_tail)/(3L) = " + fmt_num(cap) +
                 " for every power of two p <= " + std::to_string(limit));
    }
    budget.p = p;
    budget.eps_shift = eps;
  }

  const IndexWindow w = simulation_window(trial_state, plan, budget.p);
  const auto states = plan_trajectory(embed(trial_state, w), plan);

  Matrix bp;
  std::vector<Vector> shift_targets(plan.ops.size());
  if (budget.L > 0) {
    bp = build_bp(budget.p, w).dense();
    const Matrix up = exp_hermitian(bp, w).m;
    const Matrix down = exp_hermitian(Matrix(-bp), w).m;
    for (std::size_t i = 0; i < plan.ops.size(); ++i) {
      if (!plan.ops[i].is_shift()) continue;
      shift_targets[i] = (plan.ops[i].direction() > 0 ? up : down) * states[i].coeffs();
    }
  }

  const double cap_trotter = budget.L > 0 ? share / budget.L : 0.0;
  const double cap_u2 = budget.N > 0 ? share / budget.N : 0.0;
  const Eigen::VectorXd h_diag = h0.diagonal(w);

  double dt = options.dt_start;
  for (;;) {
    double eps_b = 0.0;
    if (budget.L > 0) {
      Matrix gen_up = bp;
      gen_up.diagonal() += (dt * h_diag).cast<Complex>();
      Matrix gen_down = -bp;
      gen_down.diagonal() += (dt * h_diag).cast<Complex>();
      const Matrix pulse_up = exp_hermitian(gen_up, w).m;
      const Matrix pulse_down = exp_hermitian(gen_down, w).m;
      for (std::size_t i = 0; i < plan.ops.size(); ++i) {
        if (!plan.ops[i].is_shift()) continue;
        const Matrix& pulse = plan.ops[i].direction() > 0 ? pulse_up : pulse_down;
        eps_b = std::max(eps_b, (shift_targets[i] - pulse * states[i].coeffs()).norm());
      }
    }
    double eps_2 = 0.0;
    for (std::size_t i = 0; i < plan.ops.size(); ++i) {
      if (plan.ops[i].is_shift()) continue;
      eps_2 = std::max(eps_2, two_level_pulse_error(plan.ops[i].matrix(), h0, dt, states[i]));
    }
    budget.eps_trotter = eps_b;
    budget.eps_u2 = eps_2;
    budget.dt = dt;

    const bool ok_b = budget.L == 0 || eps_b <= cap_trotter;
    const bool ok_2 = budget.N == 0 || eps_2 <= cap_u2;
    if (ok_b && ok_2) break;
    if (dt / 2.0 < options.dt_min) {
      infeasible(!ok_b ? "eps_trotter: " + fmt_num(eps_b) + " exceeds cap " + fmt_num(cap_trotter) +
                             " at dt_min " + fmt_num(options.dt_min)
                       : "eps_u2: " + fmt_num(eps_2) + " exceeds cap " + fmt_num(cap_u2) +
                             " at dt_min " + fmt_num(options.dt_min));
      break;
    }
    dt /= 2.0;
  }
  return budget;
}

ControlSchedule compile_plan(const Plan& plan, const ErrorBudget& budget, const HamiltonianSpec& h0,
                             const IndexWindow& window) {
  if (!(budget.dt > 0.0)) throw Error(ErrorCode::BadParams, "budget has no time step");
  ControlSchedule sched(window);
  sched.ledger = budget;

  std::shared_ptr<const ControlOperator> bp;
  if (plan.L() > 0) {
    if (budget.p < 1) throw Error(ErrorCode::BadBand, "budget has no band for the shifts");
    bp = ControlOperator::bp(budget.p, window);
  }
  const double dt = budget.dt;
  for (std::size_t i = 0; i < plan.ops.size(); ++i) {
    const auto& op = plan.ops[i];
    if (op.is_shift()) {
      sched.segments.push_back({dt, op.direction() / dt, bp, h0});
    } else {
      auto gen = ControlOperator::block01("u2_" + std::to_string(i),
                                          principal_generator(op.matrix()), window);
      sched.segments.push_back({dt, 1.0 / dt, std::move(gen), h0});
    }
  }
  return sched;
}

}  // namespace hs
