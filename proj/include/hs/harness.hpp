#pragma once

// Run orchestration for the CLI: end-to-end steering, the B_p bench, average
// power and Lie-closure sweeps. Every run is a pure function of its inputs
// and RunConfig, so reports rerun bit-for-bit.

#include "hs/budget.hpp"
#include "hs/oscillator.hpp"
#include "hs/planner.hpp"
#include "hs/statespace.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace hs {

struct RunConfig {
  std::filesystem::path output_dir = "hs_out";
  std::uint64_t seed = 1;
  int jobs = 1;

  double tail_tol = 1e-12;
  double delta = 0.1;
  std::string h0 = "free_rotator";
  long max_dim = 257;
  int p_max = 1 << 14;
  double dt_start = 0.1;
  double dt_min = 1e-8;

  /// Throws BadParams unless tolerances are positive, jobs >= 1 and
  /// max_dim <= 1024.
  void validate() const;
};

/// One row of the accumulation table: local is ||(U'_k - U_k) psi_{k-1}||
/// along the exact trajectory, bound the running sum of local errors and
/// actual the distance between compiled and exact states after step k.
struct StepRow {
  int step = 0;
  std::string op;
  double local = 0.0;
  double bound = 0.0;
  double actual = 0.0;
};

struct EndToEndReport {
  bool passed = false;
  /// First violated line (budget, ledger arithmetic, edge spill, distance or
  /// input error); empty on PASS.
  std::string failure;
  Plan plan;
  ErrorBudget budget;
  IndexWindow window{0, 1};
  double achieved = -1.0;  // < 0 if the simulation did not run
  std::vector<StepRow> steps;

  std::string text() const;
  std::string steps_csv() const;
};

/// truncate -> synthesize_plan -> allocate_budget -> compile_plan ->
/// simulate_schedule. delta_tail is the truncation distance of both states.
/// When the budget cannot be met at p <= (max_dim limit) the compiled
/// schedule is still simulated at the clamped p / dt as a diagnostic and the
/// report is FAILED.
EndToEndReport run_end_to_end(const StateVector& s0, const StateVector& target, const RunConfig& cfg);

/// File front end: parse errors are reported as a FAILED report.
EndToEndReport run_end_to_end_files(const std::filesystem::path& s0_file,
                                    const std::filesystem::path& target_file, const RunConfig& cfg);

/// Writes report.txt, steps.csv, ledger.csv, plan.jsonl into dir.
void write_end_to_end(const EndToEndReport& report, const std::filesystem::path& dir);

struct BenchRow {
  int p = 0;
  double bound = 0.0;
  double envelope = 0.0;  // sqrt(2/p)
  double measured_e0 = 0.0;
  double measured_random = 0.0;  // max over the random interior states
  bool holds = false;            // measured_random <= bound
};

/// Measurements on the centered window of size dim with `samples` random
/// complex-Gaussian states of support width 5 near the origin. n_quad = 0
/// picks default_quadrature_nodes(p).
std::vector<BenchRow> run_bench_bp(const std::vector<int>& p_list, int n_quad, long dim, int samples,
                                   const RunConfig& cfg);
std::string bench_csv(const std::vector<BenchRow>& rows);

/// Random interior states used by the bench: support {c-2, ..., c+2}, c drawn
/// from [-radius, radius].
std::vector<StateVector> random_interior_states(int count, long radius, const IndexWindow& w,
                                                std::uint64_t seed);

struct AvgPowerRow {
  long n_terms = 0;
  MonteCarloEstimate estimate;
};

std::vector<AvgPowerRow> run_avg_power(const AveragePowerKind& kind, const std::vector<long>& n_list,
                                       int trials, const RunConfig& cfg);
std::string avg_power_csv(const std::vector<AvgPowerRow>& rows);

struct LieRow {
  long d_int = 0;
  long d = 0;
  long closure_dim = 0;
};

/// d = 0 uses d_int + 8 (rounded up to even) for each row.
std::vector<LieRow> run_lie_closure(const std::string& set, long d, const std::vector<long>& d_int_list,
                                    double tol, long max_dim, const RunConfig& cfg);
std::string lie_csv(const std::vector<LieRow>& rows);

}  // namespace hs
