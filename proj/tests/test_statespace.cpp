#include "hs/errors.hpp"
#include "hs/statespace.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace hs;

namespace {

StateVector entries(std::vector<std::pair<long, Complex>> e) { return StateVector::from_entries(e); }

}  // namespace

TEST_CASE("index window") {
  const IndexWindow w(-2, 3);
  CHECK(w.size() == 6);
  CHECK(w.offset(-2) == 0);
  CHECK(w.contains(3));
  CHECK_FALSE(w.contains(4));
  CHECK(w.contains(IndexWindow(0, 1)));
  CHECK(w.padded(2) == IndexWindow(-4, 5));
  CHECK(w.hull(IndexWindow(7, 8)) == IndexWindow(-2, 8));
  CHECK(IndexWindow::centered(3) == IndexWindow(-3, 3));
  CHECK_THROWS_AS(IndexWindow(2, 1), Error);
}

TEST_CASE("normalize") {
  const auto a = normalize(entries({{0, 2.0}}));
  CHECK(std::abs(a.at(0) - 1.0) < 1e-15);

  const auto b = normalize(entries({{0, 1.0}, {1, 1.0}}));
  CHECK(std::abs(b.at(0) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(b.at(1) - 1.0 / std::sqrt(2.0)) < 1e-15);

  const auto c = normalize(entries({{0, Complex(0.0, 3.0)}, {1, 4.0}}));
  CHECK(std::abs(c.at(0) - Complex(0.0, 0.6)) < 1e-15);
  CHECK(std::abs(c.at(1) - 0.8) < 1e-15);
  CHECK(c.is_normalized());

  try {
    normalize(StateVector(IndexWindow(0, 3)));
    FAIL("expected ZeroState");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroState);
  }
}

TEST_CASE("inner and distance") {
  const IndexWindow w(0, 2);
  const auto e0 = StateVector::basis(0, w);
  const auto e1 = StateVector::basis(1, IndexWindow(1, 1));
  CHECK(inner(e0, e0) == Complex(1.0, 0.0));
  CHECK(inner(e0, e1) == Complex(0.0, 0.0));
  CHECK(inner(entries({{0, Complex(0.0, 1.0)}}), entries({{0, 1.0}})) == Complex(0.0, -1.0));

  CHECK(distance(e0, e0) == 0.0);
  CHECK(std::abs(distance(e0, e1) - std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(distance(e0, entries({{0, -1.0}})) - 2.0) < 1e-15);
}

TEST_CASE("inner is aligned by index across windows") {
  std::mt19937_64 rng(11);
  const auto s = oracle::random_state(rng, -3, 2, IndexWindow(-3, 2));
  const auto t = oracle::random_state(rng, 0, 5, IndexWindow(0, 5));
  Complex expected = 0.0;
  for (long k = 0; k <= 2; ++k) expected += std::conj(s.at(k)) * t.at(k);
  CHECK(std::abs(inner(s, t) - expected) < 1e-15);
  CHECK(std::abs(inner(s, t) - std::conj(inner(t, s))) < 1e-15);
}

TEST_CASE("embed") {
  const auto a = embed(StateVector::basis(0, IndexWindow(0, 0)), IndexWindow(-2, 2));
  CHECK(a.coeffs().size() == 5);
  CHECK(a.coeffs()[2] == Complex(1.0, 0.0));
  CHECK(a.coeffs().norm() == 1.0);

  const auto b = embed(StateVector::basis(1, IndexWindow(0, 1)), IndexWindow(0, 3));
  CHECK(b.coeffs()[1] == Complex(1.0, 0.0));
  CHECK(b.coeffs().norm() == 1.0);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto s = oracle::random_state(rng, -2, 4, IndexWindow(-2, 4));
    CHECK(distance(embed(s, IndexWindow(-9, 9)), s) == 0.0);
  }

  try {
    embed(StateVector::basis(3, IndexWindow(0, 3)), IndexWindow(0, 2));
    FAIL("expected WindowTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WindowTooSmall);
  }
}

TEST_CASE("support") {
  const auto s = entries({{-1, 1e-20}, {0, 1.0}, {2, 0.5}, {4, 1e-16}});
  REQUIRE(s.support().has_value());
  CHECK(*s.support() == IndexWindow(0, 2));
  CHECK(*s.support(0.0) == IndexWindow(-1, 4));
  CHECK_FALSE(StateVector(IndexWindow(0, 3)).support().has_value());
}

TEST_CASE("truncate_tail") {
  const auto e0 = StateVector::basis(0, IndexWindow(-2, 2));
  const auto t0 = truncate_tail(e0, 1e-6);
  CHECK(t0.tail == 0.0);
  CHECK(distance(t0.state, e0) == 0.0);

  const double eps = 1e-4;
  const auto s = entries({{0, std::sqrt(1 - eps * eps)}, {1, eps}});
  const auto t1 = truncate_tail(s, 1e-3);
  CHECK(t1.state.window() == IndexWindow(0, 0));
  CHECK(std::abs(t1.state.at(0) - 1.0) < 1e-15);
  CHECK(std::abs(t1.tail - eps) < 1e-18);

  // Geometric decay a_k = r^|k|, cut where r^|k| <= 1e-8; the tail is
  // summed here from the closed form of a geometric series.
  const double r = 0.5;
  std::vector<std::pair<long, Complex>> geo;
  for (long k = -60; k <= 60; ++k) geo.emplace_back(k, std::pow(r, std::abs(k)));
  const auto g = normalize(StateVector::from_entries(geo));
  const auto tg = truncate_tail(g, 1e-8);
  const double scale = std::abs(g.at(0));
  const long cut = tg.state.window().hi() + 1;
  const double tail_closed =
      scale * std::sqrt(2.0 * (std::pow(r * r, cut) - std::pow(r * r, 61)) / (1.0 - r * r));
  CHECK(tg.tail <= 1e-7);
  CHECK(std::abs(tg.tail - tail_closed) < 1e-15);
  CHECK(tg.state.is_normalized());
}
