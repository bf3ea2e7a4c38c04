#pragma once

#include <string>

namespace hs {

/// Ledger for L (eps_shift + eps_trotter) + N eps_u2 + delta_tail <= delta.
struct ErrorBudget {
  double delta = 0.0;
  double delta_tail = 0.0;
  double eps_shift = 0.0;    // epsilon_{U+}(p)
  double eps_trotter = 0.0;  // max epsilon_B over shift steps
  double eps_u2 = 0.0;       // max epsilon_{U2} over two-level steps
  int L = 0;
  int N = 0;
  int p = 0;  // 0 when the plan has no shifts
  double dt = 0.0;

  /// False when the allocator had to clamp p or dt; `violation` then names
  /// the first budget line that could not be met.
  bool feasible = true;
  std::string violation;

  double lhs() const { return L * (eps_shift + eps_trotter) + N * eps_u2 + delta_tail; }
  bool holds() const { return lhs() <= delta; }
};

}  // namespace hs
