#include "hs/operators.hpp"

#include "hs/errors.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace hs {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

void require_unitary(const Matrix& u, const char* what) {
  const double defect = unitarity_defect(u);
  if (!(defect <= kUnitaryTol)) {
    throw Error(ErrorCode::NotUnitary,
                std::string(what) + ": |U^dagger U - I| = " + std::to_string(defect));
  }
}

// theta_j = 2 pi (j + 1/2) / n
double open_node(long j, long n) { return 2.0 * kPi * (static_cast<double>(j) + 0.5) / n; }

// B_p on the open nodes, via one FFT of c_k = e^{i pi k/n}/k.
std::vector<double> bp_on_nodes(int p, int n) {
  std::vector<Complex> coeff(static_cast<std::size_t>(n), Complex{});
  for (int k = 1; k <= p; ++k) {
    coeff[static_cast<std::size_t>(k)] = std::conj(std::polar(1.0 / k, kPi * k / n));
  }
  Eigen::FFT<double> fft;
  std::vector<Complex> spectrum;
  fft.fwd(spectrum, coeff);
  std::vector<double> values(static_cast<std::size_t>(n));
  for (std::size_t j = 0; j < values.size(); ++j) {
    // sum_k sin(k theta_j)/k = Im conj(spectrum_j)
    values[j] = kPi - 2.0 * (-spectrum[j].imag());
  }
  return values;
}

double remainder_bound_at(int p, int n) {
  const auto bp = bp_on_nodes(p, n);
  double acc = 0.0;
  for (int j = 0; j < n; ++j) acc += 1.0 - std::cos(open_node(j, n) - bp[static_cast<std::size_t>(j)]);
  return std::sqrt(2.0 * acc / n);
}

double shift_error_quadrature_at(int p, const StateVector& phi, int n) {
  const auto bp = bp_on_nodes(p, n);
  const auto& w = phi.window();
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const double theta = open_node(j, n);
    Complex value{};
    for (long k = w.lo(); k <= w.hi(); ++k) {
      value += phi.coeffs()[w.offset(k)] * std::polar(1.0, theta * static_cast<double>(k));
    }
    acc += std::norm(value) * 2.0 * (1.0 - std::cos(theta - bp[static_cast<std::size_t>(j)]));
  }
  return std::sqrt(acc / n);
}

void require_quadrature_nodes(int p, int n_quad) {
  if (n_quad <= 2 * p) {
    throw Error(ErrorCode::BadParams, "need more than 2p quadrature nodes, got " +
                                          std::to_string(n_quad) + " for p=" + std::to_string(p));
  }
}

}  // namespace

PrimitiveOp PrimitiveOp::shift(int direction) {
  if (direction == 1) return PrimitiveOp(ShiftUp{});
  if (direction == -1) return PrimitiveOp(ShiftDown{});
  throw Error(ErrorCode::BadParams, "shift direction must be +1 or -1");
}

PrimitiveOp PrimitiveOp::two_level(const Matrix2& u) {
  require_unitary(u, "two-level block");
  return PrimitiveOp(TwoLevel{u});
}

int PrimitiveOp::direction() const noexcept {
  if (std::holds_alternative<ShiftUp>(op_)) return 1;
  if (std::holds_alternative<ShiftDown>(op_)) return -1;
  return 0;
}

const Matrix2& PrimitiveOp::matrix() const {
  if (const auto* t = std::get_if<TwoLevel>(&op_)) return t->u;
  throw Error(ErrorCode::BadParams, "shift op has no 2x2 block");
}

PrimitiveOp PrimitiveOp::inverse() const {
  if (const auto* t = std::get_if<TwoLevel>(&op_)) return PrimitiveOp(TwoLevel{t->u.adjoint()});
  return shift(-direction());
}

double unitarity_defect(const Matrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm();
}

double hermiticity_defect(const Matrix& h) {
  if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

StateVector apply_shift(const StateVector& s, int direction, double edge_tol) {
  if (direction != 1 && direction != -1) {
    throw Error(ErrorCode::BadParams, "shift direction must be +1 or -1");
  }
  const auto& w = s.window();
  const long edge = direction > 0 ? w.hi() : w.lo();
  if (std::abs(s.at(edge)) > edge_tol) {
    throw Error(ErrorCode::EdgeSpill, "amplitude " + std::to_string(std::abs(s.at(edge))) +
                                          " at index " + std::to_string(edge) +
                                          " would leave the window");
  }
  const long d = w.size();
  Vector out = Vector::Zero(d);
  if (direction > 0) {
    out.tail(d - 1) = s.coeffs().head(d - 1);
  } else {
    out.head(d - 1) = s.coeffs().tail(d - 1);
  }
  return StateVector(w, std::move(out));
}

StateVector apply_two_level(const StateVector& s, const Matrix2& u) {
  require_unitary(u, "two-level block");
  const auto& w = s.window();
  if (!w.contains(0) || !w.contains(1)) {
    throw Error(ErrorCode::WindowMissesBlock, "window does not contain indices 0 and 1");
  }
  Vector out = s.coeffs();
  const Eigen::Vector2cd pair(out[w.offset(0)], out[w.offset(1)]);
  const Eigen::Vector2cd mapped = u * pair;
  out[w.offset(0)] = mapped[0];
  out[w.offset(1)] = mapped[1];
  return StateVector(w, std::move(out));
}

StateVector apply(const StateVector& s, const PrimitiveOp& op) {
  if (op.is_shift()) return apply_shift(s, op.direction());
  return apply_two_level(s, op.matrix());
}

BandedHermitian::BandedHermitian(IndexWindow window, int band, std::vector<Complex> diagonals)
    : window_(window), band_(band), diagonals_(std::move(diagonals)) {
  if (band < 0 || diagonals_.size() != static_cast<std::size_t>(2 * band + 1)) {
    throw Error(ErrorCode::BadBand, "diagonal count does not match band " + std::to_string(band));
  }
  for (int m = 0; m <= band; ++m) {
    if (std::abs(diagonals_[band + m] - std::conj(diagonals_[band - m])) > kHermitianTol) {
      throw Error(ErrorCode::NotHermitian, "diagonal " + std::to_string(m) + " breaks symmetry");
    }
  }
}

Complex BandedHermitian::entry(long j, long k) const noexcept {
  const long m = j - k;
  if (m < -band_ || m > band_) return {};
  return diagonals_[static_cast<std::size_t>(m + band_)];
}

Matrix BandedHermitian::dense() const {
  const long d = window_.size();
  Matrix out = Matrix::Zero(d, d);
  for (long r = 0; r < d; ++r) {
    const long c_lo = std::max(0L, r - band_);
    const long c_hi = std::min(d - 1, r + static_cast<long>(band_));
    for (long c = c_lo; c <= c_hi; ++c) out(r, c) = diagonals_[static_cast<std::size_t>(r - c + band_)];
  }
  return out;
}

double bp_function(int p, double theta) {
  double acc = 0.0;
  for (int k = 1; k <= p; ++k) acc += std::sin(k * theta) / k;
  return kPi - 2.0 * acc;
}

BandedHermitian build_bp(int p, const IndexWindow& w) {
  if (p < 1) throw Error(ErrorCode::BadBand, "B_p needs p >= 1, got " + std::to_string(p));
  std::vector<Complex> diagonals(static_cast<std::size_t>(2 * p + 1));
  diagonals[static_cast<std::size_t>(p)] = kPi;
  for (int m = 1; m <= p; ++m) {
    diagonals[static_cast<std::size_t>(p + m)] = kI / static_cast<double>(m);
    diagonals[static_cast<std::size_t>(p - m)] = -kI / static_cast<double>(m);
  }
  return BandedHermitian(w, p, std::move(diagonals));
}

Complex bp_entry_oracle(int p, long j, long k, int n_quad) {
  const long need = 4L * (p + std::abs(j - k) + 1);
  if (n_quad < need) {
    throw Error(ErrorCode::BadParams, "oracle needs at least " + std::to_string(need) + " nodes");
  }
  Complex acc{};
  for (int q = 0; q < n_quad; ++q) {
    const double theta = open_node(q, n_quad);
    acc += bp_function(p, theta) * std::polar(1.0, -static_cast<double>(j - k) * theta);
  }
  return acc / static_cast<double>(n_quad);
}

UnitaryMatrix exp_hermitian(const Matrix& h, const IndexWindow& w) {
  if (h.rows() != w.size() || h.cols() != w.size()) {
    throw Error(ErrorCode::WindowMismatch, "matrix shape does not match window");
  }
  const double defect = hermiticity_defect(h);
  if (!(defect <= kHermitianTol)) {
    throw Error(ErrorCode::NotHermitian, "|H - H^dagger|_max = " + std::to_string(defect));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  const Matrix& v = eig.eigenvectors();
  const Vector phases = (kI * eig.eigenvalues().cast<Complex>()).array().exp();
  return {w, v * phases.asDiagonal() * v.adjoint()};
}

UnitaryMatrix exp_hermitian(const BandedHermitian& b) { return exp_hermitian(b.dense(), b.window()); }

Matrix2 principal_generator(const Matrix2& u) {
  require_unitary(u, "principal log");
  Eigen::ComplexSchur<Matrix2> schur(u);
  const Matrix2& q = schur.matrixU();
  const Matrix2& t = schur.matrixT();
  Eigen::Vector2cd phases;
  for (int i = 0; i < 2; ++i) {
    // Principal branch (-pi, pi]; an eigenphase sitting on -pi is nudged
    // inside the branch so the choice is deterministic.
    phases[i] = std::max(std::arg(t(i, i)), -kPi + 1e-12);
  }
  Matrix2 h = q * phases.asDiagonal() * q.adjoint();
  return 0.5 * (h + h.adjoint());
}

int default_quadrature_nodes(int p) {
  const long target = std::max(4096L, 64L * p);
  long n = 1;
  while (n < target) n <<= 1;
  return static_cast<int>(n);
}

double remainder_bound(int p, int n_quad) {
  if (p < 1) throw Error(ErrorCode::BadBand, "remainder bound needs p >= 1");
  require_quadrature_nodes(p, n_quad);
  const double coarse = remainder_bound_at(p, n_quad);
  const double fine = remainder_bound_at(p, 2 * n_quad);
  if (std::abs(fine - coarse) > kQuadratureGate) {
    throw Error(ErrorCode::QuadratureUnconverged,
                "p=" + std::to_string(p) + ": n=" + std::to_string(n_quad) + " vs 2n differ by " +
                    std::to_string(std::abs(fine - coarse)));
  }
  return fine;
}

double shift_error_quadrature(int p, const StateVector& phi, int n_quad) {
  if (p < 1) throw Error(ErrorCode::BadBand, "shift error needs p >= 1");
  require_quadrature_nodes(p, n_quad);
  const double coarse = shift_error_quadrature_at(p, phi, n_quad);
  const double fine = shift_error_quadrature_at(p, phi, 2 * n_quad);
  if (std::abs(fine - coarse) > kQuadratureGate) {
    throw Error(ErrorCode::QuadratureUnconverged,
                "state error quadrature differs by " + std::to_string(std::abs(fine - coarse)));
  }
  return fine;
}

double shift_approx_error(int p, const IndexWindow& w, std::span<const StateVector> samples) {
  const UnitaryMatrix u = exp_hermitian(build_bp(p, w));
  double worst = 0.0;
  for (const auto& phi : samples) {
    const StateVector local = embed(phi, w);
    const StateVector exact = apply_shift(local, +1);
    const Vector approx = u.m * local.coeffs();
    worst = std::max(worst, (exact.coeffs() - approx).norm());
  }
  return worst;
}

}  // namespace hs
