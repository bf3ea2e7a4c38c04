#include "hs/harness.hpp"

#include "hs/errors.hpp"
#include "hs/io.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <thread>

namespace hs {

namespace {

using io::format_double;

std::string op_name(const PrimitiveOp& op) {
  if (op.is_shift()) return op.direction() > 0 ? "shift+" : "shift-";
  return "u2";
}

template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  const int workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int wk = 0; wk < workers; ++wk) {
    pool.emplace_back([&, wk] {
      try {
        for (std::size_t i = static_cast<std::size_t>(wk); i < count; i += static_cast<std::size_t>(workers)) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(wk)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

void RunConfig::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::BadParams, what); };
  if (!(tail_tol > 0.0)) bad("tail_tol must be > 0");
  if (!(delta > 0.0 && delta < 2.0)) bad("delta must lie in (0, 2)");
  if (!(dt_start > 0.0) || !(dt_min > 0.0) || dt_min > dt_start) bad("need 0 < dt_min <= dt_start");
  if (jobs < 1) bad("jobs must be >= 1");
  if (max_dim < 4 || max_dim > 1024) bad("max_dim must lie in [4, 1024]");
  if (p_max < 1) bad("p_max must be >= 1");
  HamiltonianSpec::parse(h0);
}

std::string EndToEndReport::text() const {
  std::ostringstream out;
  out << "status: " << (passed ? "PASS" : "FAILED") << "\n";
  if (!passed) out << "failure: " << failure << "\n";
  out << "L: " << budget.L << "\n";
  out << "N: " << budget.N << "\n";
  out << "p: " << budget.p << "\n";
  out << "dt: " << format_double(budget.dt) << "\n";
  out << "window: [" << window.lo() << ", " << window.hi() << "] (d = " << window.size() << ")\n";
  out << "ledger: L*(eps_shift + eps_trotter) + N*eps_u2 + delta_tail = " << budget.L << "*("
      << format_double(budget.eps_shift) << " + " << format_double(budget.eps_trotter) << ") + " << budget.N
      << "*" << format_double(budget.eps_u2) << " + " << format_double(budget.delta_tail) << " = "
      << format_double(budget.lhs()) << (budget.holds() ? " <= " : " > ") << "delta = "
      << format_double(budget.delta) << "\n";
  if (achieved >= 0.0) {
    out << "achieved_distance: " << format_double(achieved) << "\n";
  } else {
    out << "achieved_distance: not simulated\n";
  }
  if (!steps.empty()) {
    out << "\nstep  op      local           bound           actual\n";
    for (const auto& r : steps) {
      char line[160];
      std::snprintf(line, sizeof line, "%-5d %-7s %-15.9g %-15.9g %.9g\n", r.step, r.op.c_str(), r.local,
                    r.bound, r.actual);
      out << line;
    }
  }
  return out.str();
}

std::string EndToEndReport::steps_csv() const {
  std::string out = "step,op,local,bound,actual\n";
  for (const auto& r : steps) {
    out += std::to_string(r.step) + "," + r.op + "," + format_double(r.local) + "," + format_double(r.bound) +
           "," + format_double(r.actual) + "\n";
  }
  return out;
}

EndToEndReport run_end_to_end(const StateVector& s0_in, const StateVector& target_in, const RunConfig& cfg) {
  cfg.validate();
  EndToEndReport report;
  auto fail = [&](const std::string& line) {
    if (report.failure.empty()) report.failure = line;
  };

  const StateVector s0 = normalize(s0_in);
  const StateVector target = normalize(target_in);
  const Truncation t0 = truncate_tail(s0, cfg.tail_tol);
  const Truncation tt = truncate_tail(target, cfg.tail_tol);
  const double delta_tail = distance(t0.state, s0) + distance(tt.state, target);
  if (!(delta_tail < cfg.delta)) {
    report.failure = "delta_tail: truncation distance " + format_double(delta_tail) + " >= delta";
    return report;
  }

  report.plan = synthesize_plan(s0, target, cfg.tail_tol);
  const HamiltonianSpec h0 = HamiltonianSpec::parse(cfg.h0);

  BudgetOptions options;
  options.p_max = cfg.p_max;
  options.dt_start = cfg.dt_start;
  options.dt_min = cfg.dt_min;
  options.max_dim = cfg.max_dim;
  options.best_effort = true;
  report.budget = allocate_budget(report.plan, cfg.delta, delta_tail, h0, t0.state, options);
  if (!report.budget.feasible) fail("budget: " + report.budget.violation);
  if (!report.budget.holds()) {
    fail("ledger: lhs " + format_double(report.budget.lhs()) + " > delta " + format_double(cfg.delta));
  }

  report.window = simulation_window(t0.state, report.plan, report.budget.p);
  if (report.window.size() > cfg.max_dim) {
    fail("window: d = " + std::to_string(report.window.size()) + " exceeds max_dim " +
         std::to_string(cfg.max_dim));
  }

  std::vector<StateVector> exact;
  try {
    exact = plan_trajectory(embed(t0.state, report.window), report.plan);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::EdgeSpill) throw;
    fail(std::string("edge spill: ") + e.what());
    return report;
  }

  const ControlSchedule sched = compile_plan(report.plan, report.budget, h0, report.window);
  const auto compiled = simulate_schedule(t0.state, sched);

  std::map<std::pair<const ControlOperator*, double>, Matrix> cache;
  double bound = 0.0;
  for (std::size_t i = 0; i < sched.segments.size(); ++i) {
    const auto& seg = sched.segments[i];
    auto key = std::make_pair(seg.op.get(), seg.amplitude);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, step_propagator(seg, report.window, sched.convention).m).first;
    StepRow row;
    row.step = static_cast<int>(i) + 1;
    row.op = op_name(report.plan.ops[i]);
    row.local = (it->second * exact[i].coeffs() - exact[i + 1].coeffs()).norm();
    bound += row.local;
    row.bound = bound;
    row.actual = distance(compiled[i + 1], exact[i + 1]);
    report.steps.push_back(row);
  }

  report.achieved = distance(compiled.back(), target);
  if (!(report.achieved <= cfg.delta)) {
    fail("distance: achieved " + format_double(report.achieved) + " > delta " + format_double(cfg.delta));
  }
  report.passed = report.failure.empty();
  return report;
}

EndToEndReport run_end_to_end_files(const std::filesystem::path& s0_file,
                                    const std::filesystem::path& target_file, const RunConfig& cfg) {
  try {
    const StateVector s0 = io::read_state(s0_file);
    const StateVector target = io::read_state(target_file);
    return run_end_to_end(s0, target, cfg);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError || e.code() == ErrorCode::ZeroState ||
        e.code() == ErrorCode::EmptySupport || e.code() == ErrorCode::BudgetInfeasible ||
        e.code() == ErrorCode::EdgeSpill) {
      EndToEndReport report;
      report.failure = e.what();
      return report;
    }
    throw;
  }
}

void write_end_to_end(const EndToEndReport& report, const std::filesystem::path& dir) {
  io::write_text(dir / "report.txt", report.text());
  io::write_text(dir / "steps.csv", report.steps_csv());
  io::write_text(dir / "ledger.csv", io::ledger_csv(report.budget));
  io::write_text(dir / "plan.jsonl", io::plan_to_jsonl(report.plan));
}

std::vector<StateVector> random_interior_states(int count, long radius, const IndexWindow& w,
                                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<long> centre(-radius, radius);
  std::vector<StateVector> out;
  for (int i = 0; i < count; ++i) {
    const long c = centre(rng);
    StateVector s(w);
    Vector v = Vector::Zero(w.size());
    for (long k = c - 2; k <= c + 2; ++k) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      v[w.offset(k)] = Complex(re, im);
    }
    out.push_back(normalize(StateVector(w, v)));
  }
  return out;
}

std::vector<BenchRow> run_bench_bp(const std::vector<int>& p_list, int n_quad, long dim, int samples,
                                   const RunConfig& cfg) {
  if (p_list.empty() || dim < 5 || samples < 1) throw Error(ErrorCode::BadParams, "empty bench");
  const IndexWindow w = IndexWindow::centered(dim / 2);
  const auto states = random_interior_states(samples, 8, w, cfg.seed);
  const StateVector e0 = StateVector::basis(0, w);

  std::vector<BenchRow> rows(p_list.size());
  parallel_for(p_list.size(), cfg.jobs, [&](std::size_t i) {
    const int p = p_list[i];
    BenchRow row;
    row.p = p;
    row.bound = remainder_bound(p, n_quad > 0 ? n_quad : default_quadrature_nodes(p));
    row.envelope = std::sqrt(2.0 / p);
    row.measured_e0 = shift_approx_error(p, w, std::span<const StateVector>(&e0, 1));
    row.measured_random = shift_approx_error(p, w, states);
    row.holds = row.measured_random <= row.bound;
    rows[i] = row;
  });
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "p,epsilon,sqrt_2_over_p,measured_e0,measured_random_max,holds\n";
  for (const auto& r : rows) {
    out += std::to_string(r.p) + "," + format_double(r.bound) + "," + format_double(r.envelope) + "," +
           format_double(r.measured_e0) + "," + format_double(r.measured_random) + "," + (r.holds ? "1" : "0") +
           "\n";
  }
  return out;
}

std::vector<AvgPowerRow> run_avg_power(const AveragePowerKind& kind, const std::vector<long>& n_list,
                                       int trials, const RunConfig& cfg) {
  std::vector<AvgPowerRow> rows;
  for (const long n : n_list) rows.push_back({n, average_power_mc(kind, n, trials, cfg.seed, cfg.jobs)});
  return rows;
}

std::string avg_power_csv(const std::vector<AvgPowerRow>& rows) {
  std::string out = "N,mean,stderr\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n_terms) + "," + format_double(r.estimate.mean) + "," +
           format_double(r.estimate.std_error) + "\n";
  }
  return out;
}

std::vector<LieRow> run_lie_closure(const std::string& set, long d, const std::vector<long>& d_int_list,
                                    double tol, long max_dim, const RunConfig& cfg) {
  std::vector<LieRow> rows(d_int_list.size());
  parallel_for(d_int_list.size(), cfg.jobs, [&](std::size_t i) {
    const long d_int = d_int_list[i];
    long dim = d > 0 ? d : d_int + 8;
    if (dim % 2 != 0) ++dim;
    const auto gens = lie_generator_set(set, dim);
    rows[i] = {d_int, dim, lie_closure_dim(gens, d_int, tol, max_dim)};
  });
  return rows;
}

std::string lie_csv(const std::vector<LieRow>& rows) {
  std::string out = "d_int,closure_dim\n";
  for (const auto& r : rows) out += std::to_string(r.d_int) + "," + std::to_string(r.closure_dim) + "\n";
  return out;
}

}  // namespace hs
