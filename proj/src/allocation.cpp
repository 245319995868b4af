#include "egotime/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "egotime/errors.hpp"

namespace egotime {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Total avatar time available: the avatar's own capacity or what the user
// can absorb in debriefing, whichever is tighter. gamma = 0 means debriefing
// is free and only Y binds.
double avatar_budget(double capacity_y, double debrief_z, double gamma) {
  return gamma > 0.0 ? std::min(capacity_y, debrief_z / gamma) : capacity_y;
}

}  // namespace

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::kA: return "A";
    case Regime::kB: return "B";
    case Regime::kBoundary: return "boundary";
  }
  return "unknown";
}

Regime classify_regime(std::span<const double> betas, double gamma) {
  double max_benefit = -kInf;
  for (double beta : betas)
    max_benefit = std::max(max_benefit, 1.0 / beta - gamma);
  if (max_benefit > 0.0) return Regime::kA;
  if (max_benefit == 0.0) return Regime::kBoundary;
  return Regime::kB;  // also the empty network: nothing to delegate
}

AllocationPlan solve(const AllocationProblem& problem) {
  const EgoNetwork& net = problem.network;
  const ModelParams& params = problem.params;
  const double gamma = params.gamma();
  const std::size_t n = net.size();

  std::vector<double> betas(n);
  for (std::size_t v = 0; v < n; ++v) betas[v] = net.alters()[v].beta;

  AllocationPlan plan;
  plan.regime = classify_regime(betas, gamma);
  plan.allocations.resize(n);

  // Alters worth delegating to, most valuable first; index breaks ties
  // deterministically before the proportional split below.
  std::vector<std::size_t> order;
  std::vector<double> value(n);
  for (std::size_t v = 0; v < n; ++v) {
    value[v] = 1.0 / betas[v] - gamma;
    if (value[v] > 0.0) order.push_back(v);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (value[a] != value[b]) return value[a] > value[b];
    return a < b;
  });

  std::vector<double> avatar_hours(n, 0.0);
  std::vector<char> at_cap(n, 0);
  double remaining = avatar_budget(params.avatar_capacity_y(),
                                   params.debrief_budget_z(), gamma);
  std::size_t i = 0;
  while (i < order.size() && remaining > 0.0) {
    // One group of equally valuable alters.
    std::size_t j = i;
    double cap_sum = 0.0;
    while (j < order.size() && value[order[j]] == value[order[i]]) {
      const Alter& alter = net.alters()[order[j]];
      cap_sum += alter.beta * alter.baseline_hours;
      ++j;
    }
    if (cap_sum <= remaining) {
      for (std::size_t k = i; k < j; ++k) {
        const std::size_t v = order[k];
        const Alter& alter = net.alters()[v];
        avatar_hours[v] = alter.beta * alter.baseline_hours;
        at_cap[v] = 1;
      }
      remaining -= cap_sum;
    } else {
      const double fill = remaining / cap_sum;
      for (std::size_t k = i; k < j; ++k) {
        const std::size_t v = order[k];
        const Alter& alter = net.alters()[v];
        avatar_hours[v] = alter.beta * alter.baseline_hours * fill;
      }
      remaining = 0.0;
    }
    i = j;
  }

  double spare = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    const Alter& alter = net.alters()[v];
    const double y = avatar_hours[v];
    // At the cap the user keeps no direct time for this alter by definition;
    // computing it would only reintroduce rounding dust.
    const double x =
        at_cap[v] ? 0.0 : std::max(0.0, alter.baseline_hours - y / alter.beta);
    const double z = gamma * y;
    plan.allocations[v] = {alter.id, x, y, z};
    plan.total_user_hours += x;
    plan.total_avatar_hours += y;
    plan.total_debrief_hours += z;
    spare += value[v] > 0.0 ? value[v] * y : 0.0;
  }
  plan.spare_hours = spare;
  plan.objective_value = net.total_baseline_hours() - spare;

  const PlanResiduals residuals = plan_residuals(problem, plan);
  if (residuals.max_violation() > kFeasibilityTolHours)
    throw std::logic_error("allocation plan violates its own constraints");
  return plan;
}

double spare_time_closed_form(double total_baseline_hours, double beta,
                              double gamma, double avatar_capacity,
                              double debrief_budget) {
  if (!(std::isfinite(beta) && beta > 0.0))
    throw ValidationError("beta must be positive");
  if (!(std::isfinite(gamma) && gamma >= 0.0))
    throw ValidationError("gamma must be nonnegative");
  if (gamma > 1.0 / beta)
    throw ValidationError(
        "closed form needs gamma <= 1/beta; solve() covers the other regime");
  if (!(total_baseline_hours >= 0.0 && avatar_capacity >= 0.0 &&
        debrief_budget >= 0.0))
    throw ValidationError("hours must be nonnegative");
  const double budget =
      std::min(avatar_budget(avatar_capacity, debrief_budget, gamma),
               beta * total_baseline_hours);
  return (1.0 / beta - gamma) * budget;
}

LpProblem build_lp(const AllocationProblem& problem) {
  const EgoNetwork& net = problem.network;
  const double gamma = problem.params.gamma();
  const std::size_t n = net.size();

  LpProblem lp;
  lp.direction = OptimizeDirection::kMinimize;
  lp.objective.assign(2 * n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    lp.objective[v] = 1.0;
    lp.objective[n + v] = gamma;
  }

  // Per-alter presence floor.
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<double> row(2 * n, 0.0);
    row[v] = 1.0;
    row[n + v] = 1.0 / net.alters()[v].beta;
    lp.constraint_matrix.push_back(std::move(row));
    lp.senses.push_back(ConstraintSense::kGreaterEqual);
    lp.rhs.push_back(net.alters()[v].baseline_hours);
  }
  // Total user time (direct + debriefing) within the old budget.
  {
    std::vector<double> row(2 * n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      row[v] = 1.0;
      row[n + v] = gamma;
    }
    lp.constraint_matrix.push_back(std::move(row));
    lp.senses.push_back(ConstraintSense::kLessEqual);
    lp.rhs.push_back(net.total_baseline_hours());
  }
  // Avatar capacity.
  {
    std::vector<double> row(2 * n, 0.0);
    for (std::size_t v = 0; v < n; ++v) row[n + v] = 1.0;
    lp.constraint_matrix.push_back(std::move(row));
    lp.senses.push_back(ConstraintSense::kLessEqual);
    lp.rhs.push_back(problem.params.avatar_capacity_y());
  }
  // Debriefing budget.
  {
    std::vector<double> row(2 * n, 0.0);
    for (std::size_t v = 0; v < n; ++v) row[n + v] = gamma;
    lp.constraint_matrix.push_back(std::move(row));
    lp.senses.push_back(ConstraintSense::kLessEqual);
    lp.rhs.push_back(problem.params.debrief_budget_z());
  }
  return lp;
}

double PlanResiduals::max_violation() const {
  return std::max({presence_identity, debrief_identity, user_time_budget,
                   avatar_capacity, debrief_budget, nonnegativity});
}

PlanResiduals plan_residuals(const AllocationProblem& problem,
                             const AllocationPlan& plan) {
  const EgoNetwork& net = problem.network;
  const ModelParams& params = problem.params;
  const double gamma = params.gamma();
  PlanResiduals r;

  double total_user = 0.0;
  double total_avatar = 0.0;
  double total_debrief = 0.0;
  for (std::size_t v = 0; v < net.size(); ++v) {
    const Alter& alter = net.alters()[v];
    const AlterAllocation& a = plan.allocations[v];
    r.presence_identity =
        std::max(r.presence_identity,
                 std::abs(a.user_hours + a.avatar_hours / alter.beta -
                          alter.baseline_hours));
    r.debrief_identity = std::max(
        r.debrief_identity, std::abs(a.debrief_hours - gamma * a.avatar_hours));
    r.nonnegativity =
        std::max({r.nonnegativity, -a.user_hours, -a.avatar_hours});
    total_user += a.user_hours;
    total_avatar += a.avatar_hours;
    total_debrief += a.debrief_hours;
  }
  r.user_time_budget = std::max(
      0.0, total_user + total_debrief - net.total_baseline_hours());
  r.avatar_capacity =
      std::max(0.0, total_avatar - params.avatar_capacity_y());
  r.debrief_budget =
      std::max(0.0, total_debrief - params.debrief_budget_z());
  return r;
}

std::string serialize_plan(const AllocationPlan& plan) {
  nlohmann::json doc;
  doc["regime"] = std::string(to_string(plan.regime));
  doc["objective_hours"] = plan.objective_value;
  doc["spare_hours"] = plan.spare_hours;
  doc["totals"] = {{"user_hours", plan.total_user_hours},
                   {"avatar_hours", plan.total_avatar_hours},
                   {"debrief_hours", plan.total_debrief_hours}};
  nlohmann::json rows = nlohmann::json::array();
  for (const AlterAllocation& a : plan.allocations) {
    rows.push_back({{"id", a.alter_id},
                    {"user_hours", a.user_hours},
                    {"avatar_hours", a.avatar_hours},
                    {"debrief_hours", a.debrief_hours}});
  }
  doc["alters"] = std::move(rows);
  return doc.dump(2) + "\n";
}

void save_plan(const AllocationPlan& plan, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open plan file for writing: " + path.string());
  out << serialize_plan(plan);
  out.flush();
  if (!out) throw IoError("failed writing plan file: " + path.string());
}

}  // namespace egotime
