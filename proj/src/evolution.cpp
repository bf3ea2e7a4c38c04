#include "hs/evolution.hpp"

#include "hs/errors.hpp"

#include <cmath>
#include <map>
#include <tuple>

namespace hs {

HamiltonianSpec HamiltonianSpec::parse(std::string_view name) {
  if (name == "zero") return zero();
  if (name == "free_rotator" || name == "k2") return free_rotator();
  throw Error(ErrorCode::ParseError, "unknown H0 kind '" + std::string(name) + "'");
}

std::string_view HamiltonianSpec::name() const noexcept {
  switch (kind_) {
    case Kind::Zero: return "zero";
    case Kind::FreeRotator: return "free_rotator";
  }
  return "unknown";
}

double HamiltonianSpec::value(long k) const noexcept {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::FreeRotator: return static_cast<double>(k) * static_cast<double>(k);
  }
  return 0.0;
}

Eigen::VectorXd HamiltonianSpec::diagonal(const IndexWindow& w) const {
  Eigen::VectorXd out(w.size());
  for (long k = w.lo(); k <= w.hi(); ++k) out[w.offset(k)] = value(k);
  return out;
}

std::shared_ptr<const ControlOperator> ControlOperator::bp(int p, const IndexWindow& w) {
  auto op = std::make_shared<ControlOperator>();
  op->id = "bp" + std::to_string(p);
  op->kind = Kind::Bp;
  op->band = p;
  op->window = w;
  op->matrix = build_bp(p, w).dense();
  return op;
}

std::shared_ptr<const ControlOperator> ControlOperator::block01(std::string id,
                                                                const Matrix2& generator,
                                                                const IndexWindow& w) {
  if (!w.contains(0) || !w.contains(1)) {
    throw Error(ErrorCode::WindowMissesBlock, "window does not contain indices 0 and 1");
  }
  if (hermiticity_defect(generator) > kHermitianTol) {
    throw Error(ErrorCode::NotHermitian, "block generator '" + id + "' is not Hermitian");
  }
  auto op = std::make_shared<ControlOperator>();
  op->id = std::move(id);
  op->kind = Kind::Block01;
  op->block = generator;
  op->window = w;
  op->matrix = Matrix::Zero(w.size(), w.size());
  op->matrix.block(w.offset(0), w.offset(0), 2, 2) = generator;
  return op;
}

std::shared_ptr<const ControlOperator> ControlOperator::dense(std::string id, Matrix h,
                                                              const IndexWindow& w) {
  if (h.rows() != w.size() || h.cols() != w.size()) {
    throw Error(ErrorCode::WindowMismatch, "operator '" + id + "' has the wrong shape");
  }
  if (hermiticity_defect(h) > kHermitianTol) {
    throw Error(ErrorCode::NotHermitian, "operator '" + id + "' is not Hermitian");
  }
  auto op = std::make_shared<ControlOperator>();
  op->id = std::move(id);
  op->kind = Kind::Dense;
  op->window = w;
  op->matrix = std::move(h);
  return op;
}

double ControlSchedule::total_duration() const {
  double t = 0.0;
  for (const auto& seg : segments) t += seg.duration;
  return t;
}

UnitaryMatrix step_propagator(const ControlSegment& seg, const IndexWindow& w,
                              Convention convention) {
  if (!(seg.duration > 0.0)) {
    throw Error(ErrorCode::BadParams, "segment duration must be positive");
  }
  if (!seg.op) throw Error(ErrorCode::BadParams, "segment has no control operator");
  if (!(seg.op->window == w)) {
    throw Error(ErrorCode::WindowMismatch,
                "operator '" + seg.op->id + "' is not defined on the schedule window");
  }
  Matrix generator = seg.amplitude * seg.op->matrix;
  generator.diagonal() += seg.h0.diagonal(w).cast<Complex>();
  generator *= seg.duration;
  if (convention == Convention::Physical) generator = -generator;
  return exp_hermitian(generator, w);
}

std::vector<StateVector> simulate_schedule(const StateVector& s0, const ControlSchedule& sched) {
  if (const auto sup = s0.support(0.0); sup && !sched.window.contains(*sup)) {
    throw Error(ErrorCode::WindowMismatch, "initial state does not fit the schedule window");
  }
  std::vector<StateVector> trajectory;
  trajectory.reserve(sched.segments.size() + 1);
  trajectory.push_back(embed(s0, sched.window));

  // Compiled plans reuse a handful of distinct pulses many times.
  using Key = std::tuple<const ControlOperator*, double, double, HamiltonianSpec::Kind>;
  std::map<Key, Matrix> cache;
  for (const auto& seg : sched.segments) {
    const Key key{seg.op.get(), seg.duration, seg.amplitude, seg.h0.kind()};
    auto it = cache.find(key);
    if (it == cache.end()) {
      it = cache.emplace(key, step_propagator(seg, sched.window, sched.convention).m).first;
    }
    trajectory.emplace_back(sched.window, it->second * trajectory.back().coeffs());
  }
  return trajectory;
}

double trotter_step_error(const Matrix& target_b, const HamiltonianSpec& h0, double dt,
                          const StateVector& psi) {
  if (!(dt > 0.0)) throw Error(ErrorCode::BadParams, "dt must be positive");
  const IndexWindow& w = psi.window();
  const Vector target = exp_hermitian(target_b, w).m * psi.coeffs();
  Matrix pulse = target_b;
  pulse.diagonal() += (dt * h0.diagonal(w)).cast<Complex>();
  const Vector compiled = exp_hermitian(pulse, w).m * psi.coeffs();
  return (target - compiled).norm();
}

}  // namespace hs
