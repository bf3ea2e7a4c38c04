#include "hs/oscillator.hpp"

#include "hs/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <future>
#include <random>
#include <thread>

namespace hs {

namespace {

void require_dim(long d) {
  if (d < 4 || d % 2 != 0) {
    throw Error(ErrorCode::BadDim, "oscillator truncation needs even d >= 4, got " + std::to_string(d));
  }
}

Matrix power(const Matrix& m, long n) {
  Matrix out = Matrix::Identity(m.rows(), m.cols());
  for (long i = 0; i < n; ++i) out = out * m;
  return out;
}

Matrix isometric_raising(long d) {
  Matrix m = Matrix::Zero(d, d);
  for (long i = 0; i + 1 < d; ++i) m(i + 1, i) = 1.0;
  return m;
}

Matrix parity_projection(long d, int sign) {
  // (1 + sign e^{i pi a+a}) / 2 with e^{i pi n} = (-1)^n
  Matrix m = Matrix::Zero(d, d);
  for (long i = 0; i < d; ++i) m(i, i) = 0.5 * (1.0 + sign * (i % 2 == 0 ? 1.0 : -1.0));
  return m;
}

// Real coordinates of the Hermitian interior block.
Eigen::VectorXd interior_vector(const Matrix& x, long d_int) {
  Eigen::VectorXd v(2 * d_int * d_int);
  long idx = 0;
  for (long c = 0; c < d_int; ++c) {
    for (long r = 0; r < d_int; ++r) {
      v[idx++] = x(r, c).real();
      v[idx++] = x(r, c).imag();
    }
  }
  return v;
}

Matrix su2_on_pair(long d, long i, long j, int which) {
  Matrix m = Matrix::Zero(d, d);
  const Complex one{1.0, 0.0};
  const Complex im{0.0, 1.0};
  switch (which) {
    case 0: m(i, j) = one; m(j, i) = one; break;
    case 1: m(i, j) = -im; m(j, i) = im; break;
    default: m(i, i) = one; m(j, j) = -one; break;
  }
  return m;
}

}  // namespace

FockWindow::FockWindow(long d) : d_(d) { require_dim(d); }

std::string OscLabel::name() const {
  switch (kind) {
    case OscKind::Aplus: return "Aplus";
    case OscKind::A: return "A";
    case OscKind::P0: return "P0";
    case OscKind::Pn: return "P" + std::to_string(j);
    case OscKind::Pjk: return "P" + std::to_string(j) + "," + std::to_string(k);
    case OscKind::Pplus: return "Pplus";
    case OscKind::Pminus: return "Pminus";
    case OscKind::Ushift: return "Ushift";
  }
  return "unknown";
}

Matrix ladder_raising(long d) {
  Matrix m = Matrix::Zero(d, d);
  for (long n = 0; n + 1 < d; ++n) m(n + 1, n) = std::sqrt(static_cast<double>(n + 1));
  return m;
}

Matrix ladder_lowering(long d) { return ladder_raising(d).adjoint(); }

Matrix number_operator(long d) {
  Matrix m = Matrix::Zero(d, d);
  for (long n = 0; n < d; ++n) m(n, n) = static_cast<double>(n);
  return m;
}

OscOperator build_osc(const OscLabel& label, long d) {
  const FockWindow window(d);
  const Matrix aplus = isometric_raising(window.dim());
  const Matrix a = aplus.adjoint();
  const Matrix identity = Matrix::Identity(d, d);
  auto in_range = [&](long n) {
    if (n < 0 || n >= d) {
      throw Error(ErrorCode::BadDim, "basis index " + std::to_string(n) + " outside truncation");
    }
  };

  switch (label.kind) {
    case OscKind::Aplus: return {label, aplus};
    case OscKind::A: return {label, a};
    case OscKind::P0: return {label, identity - aplus * a};
    case OscKind::Pn: {
      in_range(label.j);
      const Matrix p0 = identity - aplus * a;
      return {label, power(aplus, label.j) * p0 * power(a, label.j)};
    }
    case OscKind::Pjk: {
      in_range(label.j);
      in_range(label.k);
      const Matrix p0 = identity - aplus * a;
      return {label, power(aplus, label.j) * p0 * power(a, label.k)};
    }
    case OscKind::Pplus: return {label, parity_projection(d, +1)};
    case OscKind::Pminus: return {label, parity_projection(d, -1)};
    case OscKind::Ushift: {
      const Matrix p01 = build_osc(OscLabel::pjk(0, 1), d).m;
      return {label, aplus * aplus * parity_projection(d, +1) + a * a * parity_projection(d, -1) + p01};
    }
  }
  throw Error(ErrorCode::BadParams, "unknown oscillator label");
}

OscOperator build_ushift(long d) { return build_osc({OscKind::Ushift}, d); }

long renumbering(long k) noexcept { return k >= 0 ? 2 * k : -2 * k - 1; }

long renumbering_inverse(long n) noexcept { return n % 2 == 0 ? n / 2 : -(n + 1) / 2; }

Matrix conjugate_to_z(const Matrix& osc, const IndexWindow& interior) {
  const long d = osc.rows();
  const long need = std::max(renumbering(interior.lo()), renumbering(interior.hi()));
  if (need >= d) {
    throw Error(ErrorCode::WindowTooSmall, "interior window maps past the truncation");
  }
  Matrix out(interior.size(), interior.size());
  for (long l = interior.lo(); l <= interior.hi(); ++l) {
    for (long k = interior.lo(); k <= interior.hi(); ++k) {
      out(interior.offset(l), interior.offset(k)) = osc(renumbering(l), renumbering(k));
    }
  }
  return out;
}

Matrix z_shift_matrix(const IndexWindow& w) {
  Matrix m = Matrix::Zero(w.size(), w.size());
  for (long k = w.lo(); k < w.hi(); ++k) m(w.offset(k + 1), w.offset(k)) = 1.0;
  return m;
}

AveragePowerKind AveragePowerKind::parse(std::string_view text) {
  if (text == "osc_shift") return {Type::OscShift, 0};
  if (text == "z_shift") return {Type::ZShift, 0};
  constexpr std::string_view prefix = "finite_block";
  if (text.substr(0, prefix.size()) == prefix && text.size() > prefix.size() + 1) {
    std::string_view rest = text.substr(prefix.size() + 1);
    if (!rest.empty() && rest.back() == ')') rest.remove_suffix(1);
    long n = 0;
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), n);
    if (ec == std::errc{} && ptr == rest.data() + rest.size() && n >= 1) return {Type::FiniteBlock, n};
  }
  throw Error(ErrorCode::BadParams, "unknown operator kind '" + std::string(text) + "'");
}

std::string AveragePowerKind::name() const {
  switch (type) {
    case Type::OscShift: return "osc_shift";
    case Type::ZShift: return "z_shift";
    case Type::FiniteBlock: return "finite_block:" + std::to_string(block);
  }
  return "unknown";
}

long AveragePowerKind::sigma(long n) const noexcept {
  switch (type) {
    case Type::ZShift: return n + 1;
    case Type::OscShift:
      if (n % 2 == 0) return n + 2;
      return n == 1 ? 0 : n - 2;
    case Type::FiniteBlock: return n < block ? (n + 1) % block : n;
  }
  return n;
}

double average_power_sample(const AveragePowerKind& kind, std::span<const double> x, long n_terms) {
  double acc = 0.0;
  for (long n = 1; n <= n_terms; ++n) {
    const long s = kind.sigma(n);
    if (s >= static_cast<long>(x.size()) || n >= static_cast<long>(x.size())) {
      throw Error(ErrorCode::BadParams, "coordinate sample too short");
    }
    const double diff = x[static_cast<std::size_t>(s)] - x[static_cast<std::size_t>(n)];
    acc += diff * diff;
  }
  return acc / static_cast<double>(n_terms);
}

double average_power_matrix(const Matrix& u, std::span<const double> x, long n_terms) {
  if (n_terms >= u.cols() || static_cast<long>(x.size()) < u.rows()) {
    throw Error(ErrorCode::BadParams, "matrix or sample too small for the requested terms");
  }
  const Eigen::Map<const Eigen::VectorXd> coords(x.data(), u.rows());
  double acc = 0.0;
  for (long n = 1; n <= n_terms; ++n) {
    Complex pairing = coords.cast<Complex>().dot(u.col(n));
    pairing -= x[static_cast<std::size_t>(n)];
    acc += std::norm(pairing);
  }
  return acc / static_cast<double>(n_terms);
}

MonteCarloEstimate average_power_mc(const AveragePowerKind& kind, long n_terms, int trials,
                                    std::uint64_t seed, int jobs) {
  if (n_terms < 1000 || trials < 2 || jobs < 1) {
    throw Error(ErrorCode::BadParams, "average power needs N >= 1000, trials >= 2, jobs >= 1");
  }
  if (kind.type == AveragePowerKind::Type::FiniteBlock && kind.block < 1) {
    throw Error(ErrorCode::BadParams, "finite block size must be positive");
  }
  const std::size_t coords = static_cast<std::size_t>(n_terms) + 3 +
                             static_cast<std::size_t>(std::max(kind.block, 0L));

  auto run_trial = [&](int t) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(t));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> x(coords);
    for (auto& v : x) v = gauss(rng);
    return average_power_sample(kind, x, n_terms);
  };

  std::vector<double> values(static_cast<std::size_t>(trials));
  const int workers = std::min(jobs, trials);
  if (workers == 1) {
    for (int t = 0; t < trials; ++t) values[static_cast<std::size_t>(t)] = run_trial(t);
  } else {
    std::vector<std::thread> pool;
    for (int wk = 0; wk < workers; ++wk) {
      pool.emplace_back([&, wk] {
        for (int t = wk; t < trials; t += workers) values[static_cast<std::size_t>(t)] = run_trial(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= trials;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= (trials - 1);
  return {mean, std::sqrt(var / trials)};
}

long lie_closure_dim(std::span<const Matrix> generators, long d_int, double tol, long max_dim) {
  if (generators.empty() || max_dim < 1 || !(tol > 0.0)) {
    throw Error(ErrorCode::BadParams, "need generators, max_dim >= 1 and tol > 0");
  }
  const long d = generators.front().rows();
  if (d_int < 1 || d_int > d - 4) {
    throw Error(ErrorCode::BadParams, "interior block must satisfy 1 <= d_int <= d - 4");
  }
  for (const auto& g : generators) {
    if (g.rows() != d || g.cols() != d) throw Error(ErrorCode::BadDim, "generator shapes differ");
    if (hermiticity_defect(g) > kHermitianTol) {
      throw Error(ErrorCode::NotHermitian, "Lie generator is not Hermitian");
    }
  }

  std::vector<Matrix> elements;
  std::vector<Eigen::VectorXd> orthonormal;

  auto try_add = [&](const Matrix& x) {
    const double full = x.norm();
    if (full == 0.0) return false;
    const Eigen::VectorXd v = interior_vector(x, d_int);
    Eigen::VectorXd r = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : orthonormal) r -= q.dot(r) * q;
    }
    const double rn = r.norm();
    if (rn <= tol * full) return false;
    orthonormal.push_back(r / rn);
    elements.push_back(x / full);
    return true;
  };

  for (const auto& g : generators) {
    try_add(g);
    if (static_cast<long>(elements.size()) >= max_dim) return max_dim;
  }
  const Complex im{0.0, 1.0};
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const Matrix c = im * (elements[i] * elements[j] - elements[j] * elements[i]);
      if (try_add(c) && static_cast<long>(elements.size()) >= max_dim) return max_dim;
    }
  }
  return static_cast<long>(elements.size());
}

std::vector<Matrix> lie_generator_set(std::string_view name, long d) {
  require_dim(d);
  if (name == "driven_oscillator") {
    const Matrix a = ladder_lowering(d);
    const Matrix x = (a + a.adjoint()) / std::sqrt(2.0);
    return {number_operator(d), x, Matrix::Identity(d, d)};
  }
  if (name == "ushift" || name == "ushift_su2") {
    const Matrix u = build_ushift(d).m;
    const Complex im{0.0, 1.0};
    std::vector<Matrix> out{u + u.adjoint(), im * (u - u.adjoint())};
    if (name == "ushift_su2") {
      for (int which = 0; which < 3; ++which) out.push_back(su2_on_pair(d, 0, 2, which));
    }
    return out;
  }
  throw Error(ErrorCode::BadParams, "unknown generator set '" + std::string(name) + "'");
}

}  // namespace hs
