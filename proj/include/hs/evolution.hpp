#pragma once

// Piecewise-constant bilinear propagation  i d/dt psi = (H0 + g(t) B) psi.
//
// Segment propagators use exp(+i dt (H0 + g B)) by default so that the pulse
// g = 1/dt reproduces exp(i (dt H0 + B)), the form in which the shift target
// exp(i B_p) is written. Convention::Physical selects exp(-i dt H) instead.

#include "hs/budget.hpp"
#include "hs/operators.hpp"
#include "hs/statespace.hpp"

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hs {

enum class Convention { TargetForm, Physical };

/// Diagonal free Hamiltonian in the e_k basis.
class HamiltonianSpec {
 public:
  enum class Kind { Zero, FreeRotator };

  HamiltonianSpec() = default;
  explicit HamiltonianSpec(Kind kind) : kind_(kind) {}

  static HamiltonianSpec zero() { return HamiltonianSpec(Kind::Zero); }
  /// h(k) = k^2
  static HamiltonianSpec free_rotator() { return HamiltonianSpec(Kind::FreeRotator); }
  /// Accepts "zero" and "free_rotator" (alias "k2").
  static HamiltonianSpec parse(std::string_view name);

  Kind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept;
  double value(long k) const noexcept;
  Eigen::VectorXd diagonal(const IndexWindow& w) const;

  friend bool operator==(const HamiltonianSpec&, const HamiltonianSpec&) = default;

 private:
  Kind kind_ = Kind::FreeRotator;
};

/// Hermitian control operator B on a window: the banded approximant B_p, a
/// generator acting on the {e_0, e_1} block, or an arbitrary dense matrix.
struct ControlOperator {
  enum class Kind { Bp, Block01, Dense };

  std::string id;
  Kind kind = Kind::Dense;
  int band = 0;                       // Bp only
  Matrix2 block = Matrix2::Zero();    // Block01 only
  IndexWindow window{0, 0};
  Matrix matrix;

  static std::shared_ptr<const ControlOperator> bp(int p, const IndexWindow& w);
  static std::shared_ptr<const ControlOperator> block01(std::string id, const Matrix2& generator,
                                                        const IndexWindow& w);
  static std::shared_ptr<const ControlOperator> dense(std::string id, Matrix h,
                                                      const IndexWindow& w);
};

struct ControlSegment {
  double duration = 0.0;
  double amplitude = 0.0;
  std::shared_ptr<const ControlOperator> op;
  HamiltonianSpec h0;

  const std::string& operator_id() const { return op->id; }
};

struct ControlSchedule {
  explicit ControlSchedule(IndexWindow w) : window(w) {}

  IndexWindow window;
  std::vector<ControlSegment> segments;
  std::optional<ErrorBudget> ledger;
  Convention convention = Convention::TargetForm;

  double total_duration() const;
};

UnitaryMatrix step_propagator(const ControlSegment& seg, const IndexWindow& w,
                              Convention convention = Convention::TargetForm);

/// [s0, psi_1, ..., psi_n]. s0 is embedded into the schedule window; throws
/// WindowMismatch if it does not fit or a segment's operator has the wrong
/// shape.
std::vector<StateVector> simulate_schedule(const StateVector& s0, const ControlSchedule& sched);

/// ||(exp(iB) - exp(i dt (H0 + B/dt))) psi|| on the window of psi.
double trotter_step_error(const Matrix& target_b, const HamiltonianSpec& h0, double dt,
                          const StateVector& psi);

}  // namespace hs
