#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "egotime/ego_network.hpp"
#include "egotime/model_params.hpp"
#include "egotime/simplex.hpp"

namespace egotime {

// Absolute tolerance, in hours, for construction-time identities and
// constraint residuals.
inline constexpr double kFeasibilityTolHours = 1e-9;
// Relative tolerance when comparing the analytic solver with the simplex
// oracle.
inline constexpr double kOracleRelTol = 1e-6;

/// Delegation regimes. A: at least one alter is worth delegating to
/// (gamma < 1/beta_v for some v). B: debriefing always costs more than it
/// saves, so the avatar stays unused. Boundary: the best alter breaks even
/// exactly.
enum class Regime { kA, kB, kBoundary };

std::string_view to_string(Regime regime);

struct AllocationProblem {
  EgoNetwork network;
  ModelParams params;
};

/// Per-alter split of the yearly budget after delegation.
struct AlterAllocation {
  std::uint64_t alter_id;
  double user_hours;     // x_v, direct time kept by the user
  double avatar_hours;   // y_v, time delegated to the avatar
  double debrief_hours;  // z_v = gamma * y_v
};

struct AllocationPlan {
  std::vector<AlterAllocation> allocations;
  double total_user_hours = 0.0;
  double total_avatar_hours = 0.0;
  double total_debrief_hours = 0.0;
  double objective_value = 0.0;  // user + debrief hours = baseline - spare
  double spare_hours = 0.0;
  Regime regime = Regime::kB;
};

Regime classify_regime(std::span<const double> betas, double gamma);

/// Exact solution of the spare-time problem. Each alter's delegation value
/// is w_v = 1/beta_v - gamma; only positive-value alters receive avatar
/// time, filled in decreasing value order against the budget
/// min{Y, Z/gamma} and the per-alter caps beta_v * x_tilde_v. Alters tied
/// on value split the leftover budget proportionally to their caps, which
/// keeps relative attention unchanged and makes the solution deterministic
/// on the degenerate optimal face.
AllocationPlan solve(const AllocationProblem& problem);

/// Shortcut for a homogeneous-beta instance:
/// (1/beta - gamma) * min{Y, Z/gamma, beta * total_baseline}.
/// Rejects gamma > 1/beta; use solve for that regime (spare is then 0).
double spare_time_closed_form(double total_baseline_hours, double beta,
                              double gamma, double avatar_capacity,
                              double debrief_budget);

/// The original LP over (x_1..x_n, y_1..y_n):
///   min sum x_v + gamma*y_v
///   x_v + y_v/beta_v >= x_tilde_v          per alter
///   sum (x_v + gamma*y_v) <= total_baseline
///   sum y_v <= Y
///   sum gamma*y_v <= Z
///   x, y >= 0
/// Fed to the simplex oracle to cross-check solve().
LpProblem build_lp(const AllocationProblem& problem);

/// Worst violations of the plan against the problem's constraints, all in
/// hours (positive = violated by that much; identities report |error|).
struct PlanResiduals {
  double presence_identity = 0.0;   // max |x_v + y_v/beta_v - x_tilde_v|
  double debrief_identity = 0.0;    // max |z_v - gamma*y_v|
  double user_time_budget = 0.0;    // (X + Z_used) - total_baseline, clamped
  double avatar_capacity = 0.0;     // Y_used - Y, clamped
  double debrief_budget = 0.0;      // Z_used - Z, clamped
  double nonnegativity = 0.0;       // worst negative x_v or y_v, as a positive

  double max_violation() const;
};

PlanResiduals plan_residuals(const AllocationProblem& problem,
                             const AllocationPlan& plan);

std::string serialize_plan(const AllocationPlan& plan);
void save_plan(const AllocationPlan& plan, const std::filesystem::path& path);

}  // namespace egotime
