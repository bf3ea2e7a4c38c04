#pragma once

// Exact steering primitives (shifts and two-level unitaries on {e_0, e_1}),
// the banded approximant B_p of the shift generator, Hermitian matrix
// exponentials and the quadrature bound for ||U_+ - exp(i B_p)||.

#include "hs/statespace.hpp"

#include <Eigen/Dense>

#include <span>
#include <variant>
#include <vector>

namespace hs {

using Matrix = Eigen::MatrixXcd;
using Matrix2 = Eigen::Matrix2cd;

inline constexpr double kEdgeTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kQuadratureGate = 1e-8;

struct ShiftUp {};
struct ShiftDown {};
struct TwoLevel {
  Matrix2 u;
};

/// One steering step. TwoLevel blocks act on indices {0, 1}.
class PrimitiveOp {
 public:
  using Variant = std::variant<ShiftUp, ShiftDown, TwoLevel>;

  static PrimitiveOp shift(int direction);
  /// Throws NotUnitary if u^dagger u deviates from I beyond kUnitaryTol.
  static PrimitiveOp two_level(const Matrix2& u);

  bool is_shift() const noexcept { return !std::holds_alternative<TwoLevel>(op_); }
  /// +1 / -1 for shifts, 0 for two-level blocks.
  int direction() const noexcept;
  /// The 2x2 block; only valid for two-level ops.
  const Matrix2& matrix() const;

  PrimitiveOp inverse() const;

  const Variant& variant() const noexcept { return op_; }

 private:
  explicit PrimitiveOp(Variant op) : op_(std::move(op)) {}
  Variant op_;
};

/// Frobenius norm of U^dagger U - I.
double unitarity_defect(const Matrix& u);
/// Max-abs entry of H - H^dagger.
double hermiticity_defect(const Matrix& h);

/// a'_{k+direction} = a_k on a fixed window. Throws EdgeSpill when the
/// amplitude leaving the window exceeds edge_tol.
StateVector apply_shift(const StateVector& s, int direction, double edge_tol = kEdgeTol);

StateVector apply_two_level(const StateVector& s, const Matrix2& u);

StateVector apply(const StateVector& s, const PrimitiveOp& op);

/// Hermitian banded Toeplitz matrix on a window: entry(j,k) depends on j-k
/// only and vanishes for |j-k| > band.
class BandedHermitian {
 public:
  /// diagonals[m + band] is the value for j - k = m, m in [-band, band].
  BandedHermitian(IndexWindow window, int band, std::vector<Complex> diagonals);

  const IndexWindow& window() const noexcept { return window_; }
  int band() const noexcept { return band_; }

  Complex entry(long j, long k) const noexcept;
  Matrix dense() const;

 private:
  IndexWindow window_;
  int band_;
  std::vector<Complex> diagonals_;
};

/// B_p(theta) = pi - 2 sum_{k=1}^{p} sin(k theta)/k evaluated pointwise.
double bp_function(int p, double theta);

/// Matrix of multiplication by B_p in the basis e_k = e^{ik theta}/sqrt(2 pi):
/// pi on the diagonal, i/(j-k) for 0 < |j-k| <= p.
BandedHermitian build_bp(int p, const IndexWindow& w);

/// (1/2pi) \int e^{-ij theta} B_p(theta) e^{ik theta} d theta by the periodic
/// trapezoid rule on n_quad nodes. Test oracle for build_bp.
Complex bp_entry_oracle(int p, long j, long k, int n_quad);

struct UnitaryMatrix {
  IndexWindow window;
  Matrix m;
};

/// exp(iH) through H = V diag(lambda) V^dagger. Throws NotHermitian.
UnitaryMatrix exp_hermitian(const Matrix& h, const IndexWindow& w);
UnitaryMatrix exp_hermitian(const BandedHermitian& b);

/// Principal generator H (eigenphases in (-pi, pi]) with exp(iH) = u.
Matrix2 principal_generator(const Matrix2& u);

/// Node count used when callers have no better choice: a power of two
/// >= max(4096, 64 p).
int default_quadrature_nodes(int p);

/// epsilon_{U+}(p) = sqrt((1/pi) \int_0^{2pi} (1 - cos R_p(theta)) d theta),
/// R_p = theta - B_p(theta), on open nodes theta_j = 2pi(j + 1/2)/n.
/// Throws QuadratureUnconverged when n_quad and 2 n_quad disagree by more
/// than kQuadratureGate.
double remainder_bound(int p, int n_quad);

/// Exact ||(U_+ - exp(i B_p)) phi|| on the full integer lattice for a finitely
/// supported phi: sqrt(\int |phi(theta)|^2 2 (1 - cos R_p) d theta).
double shift_error_quadrature(int p, const StateVector& phi, int n_quad);

/// max over samples of ||apply_shift(phi) - exp(i B_p) phi|| with B_p built
/// on w.
double shift_approx_error(int p, const IndexWindow& w, std::span<const StateVector> samples);

}  // namespace hs
