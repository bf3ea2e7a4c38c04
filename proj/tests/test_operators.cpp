#include "hs/errors.hpp"
#include "hs/operators.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace hs;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex I{0.0, 1.0};

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no hs::Error thrown");
  return ErrorCode::BadParams;
}

}  // namespace

TEST_CASE("apply_shift") {
  const IndexWindow w(-3, 3);
  CHECK(distance(apply_shift(StateVector::basis(0, w), +1), StateVector::basis(1, w)) == 0.0);
  CHECK(distance(apply_shift(StateVector::basis(1, w), -1), StateVector::basis(0, w)) == 0.0);

  const auto s = normalize(StateVector::from_entries({{0, 1.0}, {1, 1.0}}));
  const auto sw = embed(s, w);
  const auto shifted = apply_shift(sw, +1);
  CHECK(std::abs(shifted.at(1) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(shifted.at(2) - 1.0 / std::sqrt(2.0)) < 1e-15);
  const double expected = std::sqrt(2.0 - 2.0 * inner(sw, shifted).real());
  CHECK(std::abs(distance(sw, shifted) - expected) < 1e-15);
  CHECK(std::abs(distance(sw, shifted) - 1.0) < 1e-15);

  CHECK(code_of([&] { apply_shift(StateVector::basis(3, w), +1); }) == ErrorCode::EdgeSpill);
  CHECK(code_of([&] { apply_shift(StateVector::basis(-3, w), -1); }) == ErrorCode::EdgeSpill);
}

TEST_CASE("apply_two_level") {
  const IndexWindow w(-1, 2);
  std::mt19937_64 rng(5);
  const auto s = oracle::random_state(rng, -1, 2, w);
  CHECK(distance(apply_two_level(s, Matrix2::Identity()), s) == 0.0);

  Matrix2 swap;
  swap << 0, 1, 1, 0;
  CHECK(distance(apply_two_level(StateVector::basis(0, w), swap), StateVector::basis(1, w)) == 0.0);

  const double a0 = 0.6;
  const double a1 = 0.8;
  Matrix2 givens;
  givens << a0, a1, -a1, a0;
  const auto merged = apply_two_level(StateVector::from_entries({{0, a0}, {1, a1}}), givens);
  CHECK(std::abs(merged.at(0) - 1.0) < 1e-15);
  CHECK(std::abs(merged.at(1)) < 1e-15);

  Matrix2 bad = Matrix2::Identity();
  bad(0, 0) = 1.1;
  CHECK(code_of([&] { PrimitiveOp::two_level(bad); }) == ErrorCode::NotUnitary);
  CHECK(code_of([&] { apply_two_level(s, bad); }) == ErrorCode::NotUnitary);
  CHECK(code_of([&] { apply_two_level(StateVector::basis(3, IndexWindow(2, 4)), swap); }) ==
        ErrorCode::WindowMissesBlock);
}

TEST_CASE("every primitive has an exact inverse") {
  std::mt19937_64 rng(17);
  const IndexWindow w(-6, 6);
  for (int i = 0; i < 50; ++i) {
    const auto s = oracle::random_state(rng, -4, 4, w);
    const PrimitiveOp ops[] = {PrimitiveOp::shift(+1), PrimitiveOp::shift(-1),
                               PrimitiveOp::two_level(oracle::random_u2(rng))};
    for (const auto& op : ops) {
      CHECK(distance(apply(apply(s, op), op.inverse()), s) < 1e-14);
      if (!op.is_shift()) CHECK(unitarity_defect(op.matrix()) < 1e-12);
    }
  }
}

TEST_CASE("build_bp entries match the quadrature oracle") {
  const IndexWindow w(-10, 10);
  for (int p : {1, 2, 5, 10}) {
    const Matrix b = build_bp(p, w).dense();
    double worst = 0.0;
    for (long j = w.lo(); j <= w.hi(); ++j) {
      for (long k = w.lo(); k <= w.hi(); ++k) {
        const int n = 4 * (p + static_cast<int>(std::abs(j - k)) + 1) * 8;
        worst = std::max(worst, std::abs(b(w.offset(j), w.offset(k)) - bp_entry_oracle(p, j, k, n)));
      }
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("build_bp structure") {
  const IndexWindow w(-5, 5);
  const auto b1 = build_bp(1, w);
  CHECK(std::abs(b1.entry(2, 2) - kPi) < 1e-15);
  CHECK(std::abs(b1.entry(3, 2) - I) < 1e-15);
  const auto b3 = build_bp(3, w);
  CHECK(std::abs(b3.entry(0, 2) - (-I / 2.0)) < 1e-15);
  CHECK(b3.entry(0, 4) == Complex(0.0, 0.0));

  const Matrix d = b3.dense();
  CHECK(hermiticity_defect(d) == 0.0);
  for (long j = 0; j + 1 < d.rows(); ++j) {
    for (long k = 0; k + 1 < d.cols(); ++k) CHECK(d(j, k) == d(j + 1, k + 1));
  }
  CHECK(code_of([&] { build_bp(0, w); }) == ErrorCode::BadBand);
}

TEST_CASE("bp_entry_oracle") {
  CHECK(std::abs(bp_entry_oracle(2, 3, 3, 64) - kPi) < 1e-10);
  CHECK(std::abs(bp_entry_oracle(2, 7, 2, 64)) < 1e-10);
  CHECK(std::abs(bp_entry_oracle(5, 4, 0, 64) - I / 4.0) < 1e-10);
  CHECK(code_of([&] { bp_entry_oracle(5, 4, 0, 8); }) == ErrorCode::BadParams);
}

TEST_CASE("bp_function approaches the sawtooth away from 0") {
  for (double theta : {0.5, 1.0, kPi, 4.0, 5.5}) {
    const double err = std::abs(bp_function(4000, theta) - theta);
    CHECK(err < 2.0 / (4000.0 * std::sin(theta / 2.0)));
  }
}

TEST_CASE("exp_hermitian") {
  const IndexWindow w2(0, 1);
  CHECK((exp_hermitian(Matrix::Zero(2, 2), w2).m - Matrix::Identity(2, 2)).norm() < 1e-15);
  const Matrix pi_i = kPi * Matrix::Identity(2, 2);
  CHECK((exp_hermitian(pi_i, w2).m + Matrix::Identity(2, 2)).norm() < 1e-14);
  Matrix x(2, 2);
  x << 0, kPi / 2, kPi / 2, 0;
  Matrix expected(2, 2);
  expected << 0, I, I, 0;
  CHECK((exp_hermitian(x, w2).m - expected).norm() < 1e-14);

  std::mt19937_64 rng(23);
  std::normal_distribution<double> g(0.0, 1.0);
  const IndexWindow w(-4, 4);
  for (int t = 0; t < 5; ++t) {
    Matrix h(w.size(), w.size());
    for (long i = 0; i < h.rows(); ++i) {
      for (long j = 0; j < h.cols(); ++j) {
        const double re = g(rng);
        const double im = g(rng);
        h(i, j) = Complex(re, im);
      }
    }
    h = (h + h.adjoint()).eval();
    const Matrix u = exp_hermitian(h, w).m;
    CHECK(unitarity_defect(u) < 1e-12);
    CHECK((u - oracle::expi_taylor(h)).norm() < 1e-11);
  }

  const auto bp = build_bp(8, IndexWindow(-32, 32));
  CHECK((exp_hermitian(bp).m - oracle::expi_taylor(bp.dense())).norm() < 1e-10);

  Matrix nh = Matrix::Zero(2, 2);
  nh(0, 1) = 1.0;
  CHECK(code_of([&] { exp_hermitian(nh, w2); }) == ErrorCode::NotHermitian);
  CHECK(code_of([&] { exp_hermitian(Matrix::Zero(3, 3), w2); }) == ErrorCode::WindowMismatch);
}

TEST_CASE("principal_generator") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 100; ++t) {
    const Matrix2 u = oracle::random_u2(rng);
    const Matrix2 h = principal_generator(u);
    CHECK(hermiticity_defect(h) < 1e-14);
    Eigen::SelfAdjointEigenSolver<Matrix2> eig(h);
    CHECK(eig.eigenvalues().maxCoeff() <= kPi + 1e-12);
    CHECK(eig.eigenvalues().minCoeff() > -kPi);
    CHECK((oracle::expi_taylor(h) - u).norm() < 1e-12);
  }
  Matrix2 minus_one = Matrix2::Identity();
  minus_one(0, 0) = Complex(-1.0, -0.0);
  const Matrix2 h = principal_generator(minus_one);
  CHECK(std::abs(h(0, 0).real()) > kPi - 1e-11);
  CHECK((oracle::expi_taylor(h) - minus_one).norm() < 1e-11);
}

TEST_CASE("remainder_bound against the partial-sum series") {
  const double bound = remainder_bound(2, default_quadrature_nodes(2));
  const long k = 10000;
  const int n = 1 << 18;
  const double series = oracle::series_remainder(2, k, n);
  const double series2 = oracle::series_remainder(2, 2 * k, n);
  // The partial sum converges like 1/K; 2 e(2K) - e(K) removes that term.
  CHECK(std::abs(series - bound) <= 1.0 / k);
  CHECK(std::abs(2.0 * series2 - series - bound) <= 1e-6);
}

TEST_CASE("remainder_bound trend and envelope") {
  double previous = 10.0;
  for (int p : {1, 2, 4, 8, 16, 32, 64, 128}) {
    const double b = remainder_bound(p, default_quadrature_nodes(p));
    CHECK(b < previous);
    CHECK(b * b <= 2.0 / p);
    previous = b;
  }
  CHECK(remainder_bound(8, default_quadrature_nodes(8)) <= 0.5);
  CHECK(remainder_bound(32, default_quadrature_nodes(32)) <= 0.25);
  CHECK(code_of([] { remainder_bound(64, 64); }) == ErrorCode::BadParams);
  CHECK(code_of([] { remainder_bound(0, 4096); }) == ErrorCode::BadBand);
}

TEST_CASE("shift_approx_error for e0 equals the bound on a wide window") {
  const int p = 32;
  const double bound = remainder_bound(p, default_quadrature_nodes(p));
  const StateVector e0 = StateVector::basis(0, IndexWindow::centered(4 * p));
  CHECK(std::abs(shift_approx_error(p, IndexWindow::centered(4 * p), std::span(&e0, 1)) - bound) < 1e-9);
  // With only 2p of margin the window edge adds a few 1e-5.
  const IndexWindow narrow(-64, 64);
  const StateVector e0n = StateVector::basis(0, narrow);
  const double measured = shift_approx_error(p, narrow, std::span(&e0n, 1));
  CHECK(measured > bound);
  CHECK(measured - bound < 1e-4);
}

TEST_CASE("shift error depends on the state") {
  const int p = 8;
  const int n = default_quadrature_nodes(p);
  const double bound = remainder_bound(p, n);
  const IndexWindow w = IndexWindow::centered(6 * p);
  const StateVector plus = embed(normalize(StateVector::from_entries({{0, 1.0}, {1, 1.0}})), w);
  const StateVector minus = embed(normalize(StateVector::from_entries({{0, 1.0}, {1, -1.0}})), w);
  const double e_plus = shift_approx_error(p, w, std::span(&plus, 1));
  const double e_minus = shift_approx_error(p, w, std::span(&minus, 1));
  CHECK(e_plus > bound);
  CHECK(e_minus < bound);
  CHECK(std::abs(e_plus - shift_error_quadrature(p, plus, n)) < 1e-9);
  CHECK(std::abs(e_minus - shift_error_quadrature(p, minus, n)) < 1e-9);
}

TEST_CASE("truncated measurement agrees with the quadrature error; convergence in p") {
  std::mt19937_64 rng(31);
  const IndexWindow w = IndexWindow::centered(256);
  std::vector<StateVector> phis;
  for (int t = 0; t < 5; ++t) phis.push_back(oracle::random_state(rng, -2, 2, w));
  double worst8 = 0.0;
  double worst64 = 0.0;
  for (const auto& phi : phis) {
    const double q8 = shift_error_quadrature(8, phi, default_quadrature_nodes(8));
    const double q64 = shift_error_quadrature(64, phi, default_quadrature_nodes(64));
    CHECK(q64 < q8);
    worst8 = std::max(worst8, q8);
    worst64 = std::max(worst64, q64);
  }
  CHECK(std::abs(shift_approx_error(8, w, phis) - worst8) < 1e-9);
  CHECK(std::abs(shift_approx_error(64, w, phis) - worst64) < 1e-8);
}

TEST_CASE("shift error is at most the l1 norm of the coefficients times the bound") {
  // |phi(theta)|^2 <= (sum_k |a_k|)^2 / 2 pi, so the error is at most
  // (sum_k |a_k|) times the remainder bound.
  std::mt19937_64 rng(37);
  const int p = 8;
  const int n = default_quadrature_nodes(p);
  const double bound = remainder_bound(p, n);
  const IndexWindow w(-3, 3);
  for (int t = 0; t < 1000; ++t) {
    const StateVector phi = oracle::random_state(rng, -3, 3, w);
    const double l1 = phi.coeffs().cwiseAbs().sum();
    CHECK(shift_error_quadrature(p, phi, n) <= l1 * bound + 1e-12);
  }
}
