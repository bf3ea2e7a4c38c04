#pragma once

// Half-infinite (Fock-like) basis xi_0, xi_1, ... truncated to d states: the
// isometric ladder A+, A, projections, parity, the composite shift
// U+ = (A+)^2 P+ + A^2 P- + P_01, its renumbering onto the integer lattice,
// the average-power estimator and the Lie-closure dimension diagnostic.

#include "hs/operators.hpp"
#include "hs/statespace.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hs {

/// d >= 4 and even so that the parity blocks truncate cleanly.
class FockWindow {
 public:
  explicit FockWindow(long d);
  long dim() const noexcept { return d_; }

 private:
  long d_;
};

enum class OscKind { Aplus, A, P0, Pn, Pjk, Pplus, Pminus, Ushift };

struct OscLabel {
  OscKind kind = OscKind::Aplus;
  long j = 0;  // n for Pn, row index for Pjk
  long k = 0;  // column index for Pjk

  static OscLabel pn(long n) { return {OscKind::Pn, n, n}; }
  static OscLabel pjk(long j, long k) { return {OscKind::Pjk, j, k}; }
  std::string name() const;
};

struct OscOperator {
  OscLabel label;
  Matrix m;
};

/// Raising / lowering ladder with sqrt(n) weights.
Matrix ladder_raising(long d);
Matrix ladder_lowering(long d);
Matrix number_operator(long d);

OscOperator build_osc(const OscLabel& label, long d);
OscOperator build_ushift(long d);

/// zeta(k) = 2k for k >= 0, -2k - 1 for k < 0.
long renumbering(long k) noexcept;
long renumbering_inverse(long n) noexcept;

/// Z^{-1} M Z restricted to an integer window: entry (l, k) is M(zeta(l), zeta(k)).
Matrix conjugate_to_z(const Matrix& osc, const IndexWindow& interior);

/// e_k -> e_{k+1} on a window (the top basis vector is annihilated).
Matrix z_shift_matrix(const IndexWindow& w);

struct AveragePowerKind {
  enum class Type { OscShift, ZShift, FiniteBlock };
  Type type = Type::ZShift;
  long block = 0;  // FiniteBlock size

  /// "osc_shift", "z_shift", "finite_block:<n>" (also "finite_block(<n>)").
  static AveragePowerKind parse(std::string_view text);
  std::string name() const;

  /// Index map sigma with U xi_n = xi_{sigma(n)}.
  long sigma(long n) const noexcept;
};

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// (1/N) sum_{n=1}^{N} (x_{sigma(n)} - x_n)^2 for one coordinate sample x
/// (x[i] is <x, xi_i>; needs coordinates up to max sigma(n)).
double average_power_sample(const AveragePowerKind& kind, std::span<const double> x, long n_terms);

/// Same quantity for an explicit matrix, with |<x, U xi_n - xi_n>|^2.
double average_power_matrix(const Matrix& u, std::span<const double> x, long n_terms);

/// Monte-Carlo mean over `trials` i.i.d. standard Gaussian coordinate
/// samples; trial t uses a generator seeded with seed + t, so the result
/// does not depend on `jobs`.
MonteCarloEstimate average_power_mc(const AveragePowerKind& kind, long n_terms, int trials,
                                    std::uint64_t seed, int jobs = 1);

/// Real dimension of the Lie algebra generated by Hermitian generators under
/// X, Y -> i[X, Y], with independence judged on the leading d_int x d_int
/// block. Stops and returns max_dim once that many elements are found.
long lie_closure_dim(std::span<const Matrix> generators, long d_int, double tol, long max_dim);

/// Named generator sets on a d-dimensional truncation:
///   driven_oscillator  {a+a, (a + a+)/sqrt 2, I}
///   ushift             {U + U^dagger, i(U - U^dagger)}
///   ushift_su2         ushift plus sigma_x, sigma_y, sigma_z on {xi_0, xi_2}
std::vector<Matrix> lie_generator_set(std::string_view name, long d);

}  // namespace hs
