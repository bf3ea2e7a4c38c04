// hsteer: command-line front end for planning, compiling, simulating and the
// diagnostic sweeps. Run `hsteer <subcommand> --help` for options.

#include "hs/errors.hpp"
#include "hs/harness.hpp"
#include "hs/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

using namespace hs;

std::filesystem::path output_dir(const RunConfig& cfg) {
  if (const char* env = std::getenv("HS_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return cfg.output_dir;
}

void emit(const std::filesystem::path& path, const std::string& text) {
  io::write_text(path, text);
  std::cerr << "wrote " << path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steering plans, compiled bilinear pulses and shift-operator diagnostics"};
  app.set_config("--config", "", "TOML/INI config file (keys match long option names)");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::string out_dir = cfg.output_dir.string();
  app.add_option("--output-dir", out_dir, "Directory for reports (HS_OUTPUT_DIR overrides)");
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--jobs", cfg.jobs, "Worker threads for independent sweep points")->check(CLI::PositiveNumber);

  // plan
  std::string s0_file;
  std::string target_file;
  auto* plan_cmd = app.add_subcommand("plan", "Exact shift / two-level plan between two states");
  plan_cmd->add_option("--s0", s0_file, "Initial state file (JSON or CSV)")->required();
  plan_cmd->add_option("--target", target_file, "Target state file")->required();
  plan_cmd->add_option("--tail-tol", cfg.tail_tol, "Support truncation tolerance");

  // compile
  std::string plan_file;
  std::string state_file;
  double delta_tail = 0.0;
  bool best_effort = false;
  auto* compile_cmd = app.add_subcommand("compile", "Budget a plan and compile it into a pulse schedule");
  compile_cmd->add_option("--plan", plan_file, "Plan file (JSONL)")->required();
  compile_cmd->add_option("--state", state_file, "Initial state the plan starts from")->required();
  compile_cmd->add_option("--delta", cfg.delta, "Target accuracy");
  compile_cmd->add_option("--delta-tail", delta_tail, "Truncation share of delta");
  compile_cmd->add_option("--h0", cfg.h0, "Free Hamiltonian: free_rotator | zero");
  compile_cmd->add_option("--max-dim", cfg.max_dim, "Largest simulation window");
  compile_cmd->add_option("--p-max", cfg.p_max, "Largest band p");
  compile_cmd->add_flag("--best-effort", best_effort, "Clamp p / dt instead of failing");

  // simulate
  std::string schedule_file;
  auto* simulate_cmd = app.add_subcommand("simulate", "Propagate a state through a schedule");
  simulate_cmd->add_option("--schedule", schedule_file, "Schedule file (JSON)")->required();
  simulate_cmd->add_option("--state", state_file, "Initial state file")->required();

  // end-to-end
  auto* e2e_cmd = app.add_subcommand("end-to-end", "Plan, budget, compile and simulate in one run");
  e2e_cmd->add_option("--s0", s0_file, "Initial state file")->required();
  e2e_cmd->add_option("--target", target_file, "Target state file")->required();
  e2e_cmd->add_option("--delta", cfg.delta, "Target accuracy");
  e2e_cmd->add_option("--tail-tol", cfg.tail_tol, "Support truncation tolerance");
  e2e_cmd->add_option("--h0", cfg.h0, "Free Hamiltonian: free_rotator | zero");
  e2e_cmd->add_option("--max-dim", cfg.max_dim, "Largest simulation window");
  e2e_cmd->add_option("--p-max", cfg.p_max, "Largest band p");
  e2e_cmd->add_option("--dt-start", cfg.dt_start, "First time step tried");
  e2e_cmd->add_option("--dt-min", cfg.dt_min, "Smallest time step tried");

  // bench-bp
  std::vector<int> p_list{2, 8, 32, 64};
  int n_quad = 0;
  long bench_dim = 257;
  int samples = 20;
  auto* bench_cmd = app.add_subcommand("bench-bp", "Tabulate remainder bounds and measured shift errors");
  bench_cmd->add_option("--p", p_list, "Band list")->delimiter(',');
  bench_cmd->add_option("--n-quad", n_quad, "Quadrature nodes (0 = automatic)");
  bench_cmd->add_option("--dim", bench_dim, "Window size");
  bench_cmd->add_option("--samples", samples, "Random interior states");

  // avg-power
  std::string kind_text = "z_shift";
  std::vector<long> n_list{100000};
  int trials = 20;
  auto* avg_cmd = app.add_subcommand("avg-power", "Monte-Carlo average power");
  avg_cmd->add_option("--kind", kind_text, "osc_shift | z_shift | finite_block:<n>");
  avg_cmd->add_option("--n", n_list, "Number of terms (list allowed)")->delimiter(',');
  avg_cmd->add_option("--trials", trials, "Independent samples");

  // lie-closure
  std::string set_name = "driven_oscillator";
  long lie_d = 0;
  std::vector<long> d_int_list{8, 16, 24};
  double lie_tol = 1e-9;
  long lie_max = 0;
  auto* lie_cmd = app.add_subcommand("lie-closure", "Dimension of the generated Lie algebra");
  lie_cmd->add_option("--set", set_name, "driven_oscillator | ushift | ushift_su2");
  lie_cmd->add_option("--d", lie_d, "Truncation (0 = d_int + 8)");
  lie_cmd->add_option("--d-int", d_int_list, "Interior block sizes")->delimiter(',');
  lie_cmd->add_option("--tol", lie_tol, "Independence tolerance");
  lie_cmd->add_option("--max-dim", lie_max, "Stop at this dimension (0 = 4 d_int^2)");

  CLI11_PARSE(app, argc, argv);
  cfg.output_dir = out_dir;
  const auto dir = output_dir(cfg);

  try {
    if (*plan_cmd) {
      const StateVector s0 = normalize(io::read_state(s0_file));
      const StateVector target = normalize(io::read_state(target_file));
      const Plan plan = synthesize_plan(s0, target, cfg.tail_tol);
      emit(dir / "plan.jsonl", io::plan_to_jsonl(plan));
      const double err = distance(apply_plan_exact(embed(s0, plan_window(s0, plan, 1)), plan), target);
      std::cout << "L=" << plan.L() << " N=" << plan.N() << " excursion=[" << plan.excursion.lo() << ","
                << plan.excursion.hi() << "] exact_distance=" << io::format_double(err) << "\n";
    } else if (*compile_cmd) {
      const StateVector s0 = normalize(io::read_state(state_file));
      const Plan plan = io::with_excursion(io::plan_from_jsonl(io::read_text(plan_file)), s0);
      const HamiltonianSpec h0 = HamiltonianSpec::parse(cfg.h0);
      BudgetOptions options;
      options.p_max = cfg.p_max;
      options.max_dim = cfg.max_dim;
      options.best_effort = best_effort;
      const ErrorBudget budget = allocate_budget(plan, cfg.delta, delta_tail, h0, s0, options);
      const IndexWindow w = simulation_window(s0, plan, budget.p);
      const ControlSchedule sched = compile_plan(plan, budget, h0, w);
      emit(dir / "schedule.json", io::schedule_to_json(sched).dump(2) + "\n");
      emit(dir / "ledger.csv", io::ledger_csv(budget));
      std::cout << "p=" << budget.p << " dt=" << io::format_double(budget.dt) << " L=" << budget.L
                << " N=" << budget.N << " lhs=" << io::format_double(budget.lhs())
                << (budget.feasible ? "" : " INFEASIBLE: " + budget.violation) << "\n";
      return budget.feasible ? 0 : 2;
    } else if (*simulate_cmd) {
      const ControlSchedule sched = io::schedule_from_json(io::json::parse(io::read_text(schedule_file)));
      const StateVector s0 = normalize(io::read_state(state_file));
      const auto traj = simulate_schedule(s0, sched);
      emit(dir / "trajectory.csv", io::trajectory_csv(traj));
      emit(dir / "final_state.csv", io::state_to_csv(traj.back()));
      std::cout << "segments=" << sched.segments.size() << " duration=" << io::format_double(sched.total_duration())
                << " final_norm=" << io::format_double(traj.back().norm()) << "\n";
    } else if (*e2e_cmd) {
      const EndToEndReport report = run_end_to_end_files(s0_file, target_file, cfg);
      write_end_to_end(report, dir);
      std::cout << report.text();
      return report.passed ? 0 : 2;
    } else if (*bench_cmd) {
      const auto rows = run_bench_bp(p_list, n_quad, bench_dim, samples, cfg);
      const std::string csv = bench_csv(rows);
      emit(dir / "bench_bp.csv", csv);
      std::cout << csv;
    } else if (*avg_cmd) {
      const auto rows = run_avg_power(AveragePowerKind::parse(kind_text), n_list, trials, cfg);
      const std::string csv = avg_power_csv(rows);
      emit(dir / "avg_power.csv", csv);
      std::cout << csv;
    } else if (*lie_cmd) {
      long cap = lie_max;
      if (cap == 0) {
        for (long d_int : d_int_list) cap = std::max(cap, 4 * d_int * d_int);
      }
      const auto rows = run_lie_closure(set_name, lie_d, d_int_list, lie_tol, cap, cfg);
      const std::string csv = lie_csv(rows);
      emit(dir / "lie_closure.csv", csv);
      std::cout << csv;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
