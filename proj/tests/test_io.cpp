#include "hs/errors.hpp"
#include "hs/io.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cstdlib>

using namespace hs;

namespace {

ErrorCode parse_code(std::string_view text) {
  try {
    io::parse_state(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::BadParams;
}

}  // namespace

TEST_CASE("format_double round-trips") {
  std::mt19937_64 rng(71);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = g(rng) * std::pow(10.0, g(rng) * 5);
    CHECK(std::strtod(io::format_double(x).c_str(), nullptr) == x);
  }
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(1e-12) == "1e-12");
}

TEST_CASE("state formats") {
  const auto a = io::parse_state("[[0, 0.6, 0], [2, 0, 0.8]]");
  CHECK(a.window() == IndexWindow(0, 2));
  CHECK(a.at(2) == Complex(0.0, 0.8));
  CHECK(a.at(1) == Complex(0.0, 0.0));

  const auto b = io::parse_state(R"({"coeffs": [[-1, 1, 0]]})");
  CHECK(b.window() == IndexWindow(-1, -1));

  const auto c = io::parse_state("k,re,im\n-2,0.5,0\n3,0,-0.5\n");
  CHECK(c.window() == IndexWindow(-2, 3));
  CHECK(c.at(3) == Complex(0.0, -0.5));

  CHECK(parse_code("") == ErrorCode::ParseError);
  CHECK(parse_code("[[0, 1]]") == ErrorCode::ParseError);
  CHECK(parse_code("[[0.5, 1, 0]]") == ErrorCode::ParseError);
  CHECK(parse_code("[[0, 1, 0], [0, 1, 0]]") == ErrorCode::ParseError);
  CHECK(parse_code("k,re,im\n1,x,0\n") == ErrorCode::ParseError);
  CHECK(parse_code("a,b,c\n1,1,0\n") == ErrorCode::ParseError);
  CHECK(parse_code("{\"state\": []}") == ErrorCode::ParseError);
}

TEST_CASE("state round trips") {
  std::mt19937_64 rng(73);
  const IndexWindow w(-4, 5);
  for (int i = 0; i < 20; ++i) {
    const auto s = oracle::random_state(rng, -4, 5, w);
    CHECK(distance(io::parse_state(io::state_to_csv(s)), s) == 0.0);
    CHECK(distance(io::parse_state(io::state_to_json(s).dump()), s) == 0.0);
  }
}

TEST_CASE("plan round trip") {
  std::mt19937_64 rng(79);
  const auto s0 = oracle::random_state(rng, -2, 3, IndexWindow(-2, 3));
  const auto target = oracle::random_state(rng, 1, 4, IndexWindow(1, 4));
  const Plan plan = synthesize_plan(s0, target, 1e-12);
  const std::string text = io::plan_to_jsonl(plan);
  const Plan back = io::with_excursion(io::plan_from_jsonl(text), s0);
  REQUIRE(back.ops.size() == plan.ops.size());
  for (std::size_t i = 0; i < plan.ops.size(); ++i) {
    CHECK(back.ops[i].is_shift() == plan.ops[i].is_shift());
    CHECK(back.ops[i].direction() == plan.ops[i].direction());
    if (!plan.ops[i].is_shift()) CHECK(back.ops[i].matrix() == plan.ops[i].matrix());
  }
  CHECK(back.excursion == plan.excursion);
  CHECK(io::plan_to_jsonl(back) == text);

  CHECK_THROWS_AS(io::plan_from_jsonl("{\"op\":\"shift\",\"dir\":2}\n"), Error);
  CHECK_THROWS_AS(io::plan_from_jsonl("{\"op\":\"jump\"}\n"), Error);
  CHECK_THROWS_AS(io::plan_from_jsonl("{\"op\":\"u2\",\"matrix\":[[2,0],[0,0],[0,0],[1,0]]}\n"), Error);
}

TEST_CASE("schedule round trip") {
  const auto e0 = StateVector::basis(0, IndexWindow(0, 0));
  const auto e2 = StateVector::basis(2, IndexWindow(2, 2));
  const Plan plan = synthesize_plan(e0, e2, 1e-12);
  ErrorBudget b;
  b.p = 4;
  b.dt = 0.01;
  b.L = plan.L();
  b.N = plan.N();
  b.delta = 1.0;
  const IndexWindow w = simulation_window(e0, plan, b.p);
  ControlSchedule sched = compile_plan(plan, b, HamiltonianSpec::free_rotator(), w);
  const IndexWindow dw(0, 1);
  Matrix h(2, 2);
  h << 1.0, Complex(0.0, 0.5), Complex(0.0, -0.5), -1.0;
  ControlSchedule dense_sched(dw);
  dense_sched.segments.push_back({0.5, 1.0, ControlOperator::dense("h", h, dw), HamiltonianSpec::zero()});
  dense_sched.convention = Convention::Physical;

  for (const auto* s : {&sched, &dense_sched}) {
    const auto j = io::schedule_to_json(*s);
    const auto back = io::schedule_from_json(io::json::parse(j.dump()));
    CHECK(io::schedule_to_json(back) == j);
    CHECK(back.convention == s->convention);
    const auto t1 = simulate_schedule(embed(e0, s->window), *s).back();
    const auto t2 = simulate_schedule(embed(e0, s->window), back).back();
    CHECK(distance(t1, t2) == 0.0);
  }
  const auto back = io::schedule_from_json(io::schedule_to_json(sched));
  REQUIRE(back.ledger.has_value());
  CHECK(back.ledger->p == 4);
  CHECK(back.ledger->dt == 0.01);

  auto broken = io::schedule_to_json(sched);
  broken["segments"][0]["operator_id"] = "missing";
  CHECK_THROWS_AS(io::schedule_from_json(broken), Error);
}

TEST_CASE("csv writers") {
  ErrorBudget b;
  b.delta = 0.1;
  b.L = 2;
  CHECK(io::ledger_csv(b).rfind("line,value\ndelta,0.1\n", 0) == 0);

  const IndexWindow w(0, 1);
  std::vector<StateVector> traj{StateVector::basis(0, w), StateVector::basis(1, w)};
  CHECK(io::trajectory_csv(traj) == "step,k,re,im\n0,0,1,0\n1,1,1,0\n");

  Matrix m = Matrix::Zero(2, 2);
  m(1, 0) = Complex(0.0, 1.0);
  CHECK(io::matrix_csv(m, w) == "j,k,re,im\n1,0,0,1\n");
  CHECK_THROWS_AS(io::matrix_csv(m, IndexWindow(0, 2)), Error);
}
