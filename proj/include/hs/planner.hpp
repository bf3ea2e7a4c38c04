#pragma once

// Constructive steering with exact shift / two-level primitives, error budget
// allocation for their pulse-compiled counterparts, and the compilation step
// itself.

#include "hs/budget.hpp"
#include "hs/evolution.hpp"
#include "hs/operators.hpp"
#include "hs/statespace.hpp"

#include <vector>

namespace hs {

/// Ordered primitive sequence plus the index range its exact application
/// touches (including the {0, 1} block).
struct Plan {
  std::vector<PrimitiveOp> ops;
  IndexWindow excursion{0, 1};

  int L() const;  // shift count
  int N() const;  // two-level count

  /// Reversed, element-wise inverted plan.
  Plan inverse() const;
};

/// Top-down Givens sweep. The state is truncated to support(tail_tol) first;
/// then, until only e_0 is occupied, the highest occupied index is shifted to
/// 1 and (a_0, a_1) is merged into (r, 0) by [[a0*, a1*], [-a1, a0]] / r. A
/// final diagonal phase fix makes the e_0 coefficient real positive.
Plan reduce_to_e0(const StateVector& s, double tail_tol);

/// reduce_to_e0(s0) followed by inverse(reduce_to_e0(target)).
Plan synthesize_plan(const StateVector& s0, const StateVector& target, double tail_tol);

/// Exact sequential application on the window of s0 (EdgeSpill if too small).
StateVector apply_plan_exact(const StateVector& s0, const Plan& plan);

/// [s0, psi_1, ..., psi_n] under exact application.
std::vector<StateVector> plan_trajectory(const StateVector& s0, const Plan& plan);

/// Window that holds the support of s0, the plan excursion and a margin on
/// either side.
IndexWindow plan_window(const StateVector& s0, const Plan& plan, long margin);

struct BudgetOptions {
  int p_max = 1 << 14;
  double dt_start = 0.1;
  double dt_min = 1e-8;
  /// Largest simulation window allowed (0 = unlimited); bounds p through the
  /// p + 2 padding.
  long max_dim = 0;
  /// Clamp p / dt instead of throwing BudgetInfeasible; the ledger is then
  /// marked infeasible and names the violated line.
  bool best_effort = false;
};

/// Equal-thirds split of delta - delta_tail across eps_shift, eps_trotter and
/// eps_u2. p is the smallest power of two whose remainder bound fits its cap;
/// dt is halved from dt_start until the measured trotter and two-level pulse
/// errors on the plan's intermediate states (starting from trial_state) fit
/// theirs.
ErrorBudget allocate_budget(const Plan& plan, double delta, double delta_tail,
                            const HamiltonianSpec& h0, const StateVector& trial_state,
                            const BudgetOptions& options = {});

/// Simulation window used for a budget: trial support and plan excursion,
/// padded by p + 2.
IndexWindow simulation_window(const StateVector& trial_state, const Plan& plan, int p);

/// ||(u - exp(i (dt H0 + H_u)))psi|| where u and H_u = -i log u act on {0,1}.
/// Uses the block structure of the generator; exact.
double two_level_pulse_error(const Matrix2& u, const HamiltonianSpec& h0, double dt,
                             const StateVector& psi);

/// One segment per primitive: shifts become (dt, +-1/dt, B_p), two-level ops
/// (dt, 1/dt, H_u) with H_u the principal generator of u.
ControlSchedule compile_plan(const Plan& plan, const ErrorBudget& budget, const HamiltonianSpec& h0,
                             const IndexWindow& window);

}  // namespace hs
