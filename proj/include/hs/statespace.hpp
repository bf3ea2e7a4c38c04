#pragma once

// Windowed coefficient sequences over the integers. A StateVector stores the
// coefficients a_k for k in [lo, hi]; everything outside the window is zero.

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <utility>
#include <vector>

namespace hs {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;

inline constexpr double kNormTol = 1e-12;
inline constexpr double kSupportTol = 1e-14;
inline constexpr double kZeroNorm = 1e-300;

/// Contiguous block of basis indices [lo, hi], lo <= hi.
class IndexWindow {
 public:
  IndexWindow(long lo, long hi);

  long lo() const noexcept { return lo_; }
  long hi() const noexcept { return hi_; }
  long size() const noexcept { return hi_ - lo_ + 1; }

  bool contains(long k) const noexcept { return k >= lo_ && k <= hi_; }
  bool contains(const IndexWindow& w) const noexcept { return w.lo_ >= lo_ && w.hi_ <= hi_; }

  /// Array position of basis index k (caller guarantees contains(k)).
  long offset(long k) const noexcept { return k - lo_; }

  IndexWindow padded(long margin) const { return {lo_ - margin, hi_ + margin}; }
  IndexWindow hull(const IndexWindow& w) const;

  /// Symmetric window [-radius, radius].
  static IndexWindow centered(long radius) { return {-radius, radius}; }

  friend bool operator==(const IndexWindow&, const IndexWindow&) = default;

 private:
  long lo_;
  long hi_;
};

class StateVector {
 public:
  StateVector(IndexWindow window, Vector coeffs);

  /// All-zero state on the window.
  explicit StateVector(IndexWindow window);

  /// e_k embedded on window w.
  static StateVector basis(long k, IndexWindow w);

  /// Builds the smallest window holding the listed (index, value) pairs.
  static StateVector from_entries(const std::vector<std::pair<long, Complex>>& entries);

  const IndexWindow& window() const noexcept { return window_; }
  const Vector& coeffs() const noexcept { return coeffs_; }

  /// Coefficient for index k; zero outside the window.
  Complex at(long k) const noexcept;

  double norm() const { return coeffs_.norm(); }

  /// Smallest sub-window containing every |a_k| > tol, or nothing if the
  /// state is empty at that tolerance.
  std::optional<IndexWindow> support(double tol = kSupportTol) const;

  bool is_normalized(double tol = kNormTol) const;

 private:
  IndexWindow window_;
  Vector coeffs_;
};

StateVector normalize(const StateVector& s);

/// <s, t>, conjugate-linear in s, aligned by absolute index.
Complex inner(const StateVector& s, const StateVector& t);

double distance(const StateVector& s, const StateVector& t);

/// Same coefficients on a (usually larger) window. Throws WindowTooSmall if
/// any nonzero coefficient would be cut.
StateVector embed(const StateVector& s, const IndexWindow& w);

struct Truncation {
  StateVector state;
  double tail;  // norm of the discarded part
};

/// Restricts s to support(tol) and renormalizes.
Truncation truncate_tail(const StateVector& s, double tol);

}  // namespace hs
