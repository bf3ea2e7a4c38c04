#include "hs/statespace.hpp"

#include "hs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hs {

IndexWindow::IndexWindow(long lo, long hi) : lo_(lo), hi_(hi) {
  if (lo > hi) {
    throw Error(ErrorCode::BadParams,
                "window [" + std::to_string(lo) + "," + std::to_string(hi) + "] is empty");
  }
}

IndexWindow IndexWindow::hull(const IndexWindow& w) const {
  return {std::min(lo_, w.lo_), std::max(hi_, w.hi_)};
}

StateVector::StateVector(IndexWindow window, Vector coeffs)
    : window_(window), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != window_.size()) {
    throw Error(ErrorCode::BadParams, "coefficient count " + std::to_string(coeffs_.size()) +
                                          " does not match window size " +
                                          std::to_string(window_.size()));
  }
}

StateVector::StateVector(IndexWindow window)
    : window_(window), coeffs_(Vector::Zero(window.size())) {}

StateVector StateVector::basis(long k, IndexWindow w) {
  if (!w.contains(k)) {
    throw Error(ErrorCode::WindowTooSmall, "basis index " + std::to_string(k) + " outside window");
  }
  StateVector s(w);
  s.coeffs_[w.offset(k)] = 1.0;
  return s;
}

StateVector StateVector::from_entries(const std::vector<std::pair<long, Complex>>& entries) {
  if (entries.empty()) throw Error(ErrorCode::EmptySupport, "no entries");
  long lo = entries.front().first;
  long hi = lo;
  for (const auto& [k, v] : entries) {
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  StateVector s(IndexWindow(lo, hi));
  for (const auto& [k, v] : entries) s.coeffs_[s.window_.offset(k)] += v;
  return s;
}

Complex StateVector::at(long k) const noexcept {
  return window_.contains(k) ? coeffs_[window_.offset(k)] : Complex{};
}

std::optional<IndexWindow> StateVector::support(double tol) const {
  std::optional<long> lo;
  long hi = 0;
  for (long i = 0; i < coeffs_.size(); ++i) {
    if (std::abs(coeffs_[i]) > tol) {
      if (!lo) lo = i;
      hi = i;
    }
  }
  if (!lo) return std::nullopt;
  return IndexWindow(window_.lo() + *lo, window_.lo() + hi);
}

bool StateVector::is_normalized(double tol) const { return std::abs(norm() - 1.0) <= tol; }

StateVector normalize(const StateVector& s) {
  const double n = s.norm();
  if (n <= kZeroNorm) throw Error(ErrorCode::ZeroState, "cannot normalize a zero state");
  return StateVector(s.window(), s.coeffs() / n);
}

Complex inner(const StateVector& s, const StateVector& t) {
  const long lo = std::max(s.window().lo(), t.window().lo());
  const long hi = std::min(s.window().hi(), t.window().hi());
  Complex acc{};
  for (long k = lo; k <= hi; ++k) acc += std::conj(s.at(k)) * t.at(k);
  return acc;
}

double distance(const StateVector& s, const StateVector& t) {
  const IndexWindow w = s.window().hull(t.window());
  double acc = 0.0;
  for (long k = w.lo(); k <= w.hi(); ++k) acc += std::norm(s.at(k) - t.at(k));
  return std::sqrt(acc);
}

StateVector embed(const StateVector& s, const IndexWindow& w) {
  if (const auto sup = s.support(0.0); sup && !w.contains(*sup)) {
    throw Error(ErrorCode::WindowTooSmall,
                "support [" + std::to_string(sup->lo()) + "," + std::to_string(sup->hi()) +
                    "] does not fit target window [" + std::to_string(w.lo()) + "," +
                    std::to_string(w.hi()) + "]");
  }
  Vector c = Vector::Zero(w.size());
  const long lo = std::max(w.lo(), s.window().lo());
  const long hi = std::min(w.hi(), s.window().hi());
  for (long k = lo; k <= hi; ++k) c[w.offset(k)] = s.at(k);
  return StateVector(w, std::move(c));
}

Truncation truncate_tail(const StateVector& s, double tol) {
  const auto sup = s.support(tol);
  if (!sup) throw Error(ErrorCode::ZeroState, "no coefficient above the support tolerance");
  const Vector kept = s.coeffs().segment(s.window().offset(sup->lo()), sup->size());
  double tail2 = 0.0;
  for (long k = s.window().lo(); k <= s.window().hi(); ++k) {
    if (!sup->contains(k)) tail2 += std::norm(s.at(k));
  }
  return {normalize(StateVector(*sup, kept)), std::sqrt(tail2)};
}

}  // namespace hs
