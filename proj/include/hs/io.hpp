#pragma once

// Structured-text and CSV readers/writers. Doubles are written in shortest
// round-trip form so reruns diff clean.

#include "hs/budget.hpp"
#include "hs/evolution.hpp"
#include "hs/planner.hpp"
#include "hs/statespace.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hs::io {

using nlohmann::json;

std::string format_double(double x);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

/// JSON: [[k, re, im], ...] or {"coeffs": [[k, re, im], ...]}. CSV: header
/// k,re,im then one row per entry. The format is sniffed from the first
/// non-blank character. Entries are not normalized.
StateVector parse_state(std::string_view text);
StateVector read_state(const std::filesystem::path& path);

json state_to_json(const StateVector& s);
std::string state_to_csv(const StateVector& s);

/// One JSON object per line: {"op":"shift","dir":1} or
/// {"op":"u2","matrix":[[re,im],[re,im],[re,im],[re,im]]} (row-major).
std::string plan_to_jsonl(const Plan& plan);
/// The excursion of a parsed plan is left at {0, 1}; see with_excursion.
Plan plan_from_jsonl(std::string_view text);

/// Recomputes plan.excursion by exact application to s0.
Plan with_excursion(const Plan& plan, const StateVector& s0);

json budget_to_json(const ErrorBudget& b);
ErrorBudget budget_from_json(const json& j);

json schedule_to_json(const ControlSchedule& sched);
ControlSchedule schedule_from_json(const json& j);

std::string ledger_csv(const ErrorBudget& b);
std::string trajectory_csv(const std::vector<StateVector>& states);
std::string matrix_csv(const Matrix& m, const IndexWindow& w);

}  // namespace hs::io
