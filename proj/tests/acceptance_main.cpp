// Acceptance suite: every release-gating check in one binary, one PASS/FAIL
// line each. Exits with the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "egotime/allocation.hpp"
#include "egotime/ego_network.hpp"
#include "egotime/model_params.hpp"
#include "egotime/simplex.hpp"
#include "egotime/sweep.hpp"
#include "test_support.hpp"

namespace {

namespace fs = std::filesystem;
using namespace egotime;
using Clock = std::chrono::steady_clock;

struct Checker {
  bool ok = true;
  std::ostringstream details;

  void expect(bool condition, const std::string& what) {
    if (condition) return;
    if (!ok) details << "; ";
    ok = false;
    details << what;
  }
};

int g_failures = 0;

void criterion(int number, const std::string& name,
               const std::function<void(Checker&)>& body) {
  Checker check;
  try {
    body(check);
  } catch (const std::exception& e) {
    check.expect(false, std::string("exception: ") + e.what());
  }
  if (check.ok) {
    std::printf("[PASS] criterion %d: %s\n", number, name.c_str());
  } else {
    std::printf("[FAIL] criterion %d: %s -- %s\n", number, name.c_str(),
                check.details.str().c_str());
    ++g_failures;
  }
}

std::string fmt(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.9g", v);
  return buffer;
}

double simplex_avatar_total(const AllocationProblem& problem,
                            const LpSolution& solution) {
  double total = 0.0;
  const std::size_t n = problem.network.size();
  for (std::size_t v = n; v < 2 * n; ++v)
    total += solution.variable_values[v];
  return total;
}

// --------------------------------------------------------------- criteria

void calibration_constants(Checker& check) {
  const double beta = beta_from_presence_scores(4.182, 3.236);
  check.expect(std::abs(beta - 4.182 / 3.236) <= 1e-6,
               "beta != 4.182/3.236: " + fmt(beta));
  check.expect(std::round(beta * 1e4) / 1e4 == 1.2923,
               "beta does not round to 1.2923: " + fmt(beta));

  const double gamma = gamma_from_cues(0.54, 7.0 / 6.0);
  check.expect(std::abs(gamma - 0.63) <= 1e-9,
               "gamma != 0.63: " + fmt(gamma));

  const double zmax = zmax_from_attention(50.0, 365.0);
  check.expect(std::abs(zmax - 304.0) <= 0.2, "zmax not near 304: " + fmt(zmax));

  const double expected = expected_socializing_time(8760.0, 0.2);
  check.expect(expected == 1752.0, "expected total != 1752: " + fmt(expected));
}

void worked_instance(Checker& check) {
  const auto start = Clock::now();
  const AllocationProblem problem = testing::worked_instance();
  const AllocationPlan plan = solve(problem);
  const LpSolution oracle = solve_lp(build_lp(problem));
  const double ms = std::chrono::duration<double, std::milli>(
                        Clock::now() - start)
                        .count();

  check.expect(std::abs(plan.total_avatar_hours - 45.0) <= 1e-6,
               "analytic avatar total: " + fmt(plan.total_avatar_hours));
  check.expect(std::abs(plan.spare_hours - 6.75) <= 1e-6,
               "analytic spare: " + fmt(plan.spare_hours));
  check.expect(oracle.status == LpStatus::kOptimal, "oracle not optimal");
  const double oracle_spare =
      problem.network.total_baseline_hours() - oracle.objective;
  check.expect(std::abs(oracle_spare - 6.75) <= 1e-6,
               "oracle spare: " + fmt(oracle_spare));
  check.expect(
      std::abs(simplex_avatar_total(problem, oracle) - 45.0) <= 1e-6,
      "oracle avatar total: " + fmt(simplex_avatar_total(problem, oracle)));
  check.expect(ms < 10.0, "runtime " + fmt(ms) + " ms >= 10 ms");
}

void oracle_equivalence(Checker& check) {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240109);
  double worst_gap = 0.0;
  double worst_residual = 0.0;
  int delegating = 0;
  int idle = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const AllocationProblem problem = testing::random_problem(rng, 200);
    const AllocationPlan plan = solve(problem);
    const LpSolution oracle = solve_lp(build_lp(problem));
    if (oracle.status != LpStatus::kOptimal) {
      check.expect(false, "oracle not optimal on trial " + fmt(trial));
      return;
    }
    const double gap = std::abs(plan.objective_value - oracle.objective) /
                       std::max(1.0, std::abs(plan.objective_value));
    worst_gap = std::max(worst_gap, gap);
    worst_residual = std::max(
        worst_residual, plan_residuals(problem, plan).max_violation());
    (plan.regime == Regime::kA ? delegating : idle) += 1;
  }
  const double seconds =
      std::chrono::duration<double>(Clock::now() - start).count();
  check.expect(worst_gap <= kOracleRelTol,
               "worst relative objective gap " + fmt(worst_gap));
  check.expect(worst_residual <= kFeasibilityTolHours,
               "worst constraint residual " + fmt(worst_residual));
  check.expect(delegating >= 50 && idle >= 50,
               "instances do not span both regimes: " + fmt(delegating) +
                   " A vs " + fmt(idle) + " B");
  check.expect(seconds < 30.0, "runtime " + fmt(seconds) + " s >= 30 s");
}

void regime_dichotomy(Checker& check) {
  std::mt19937_64 rng(20240211);
  int case_a = 0;
  int case_b = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const AllocationProblem problem = testing::random_problem(rng, 80);
    const AllocationPlan plan = solve(problem);
    double max_inv_beta = 0.0;
    for (const Alter& alter : problem.network.alters())
      max_inv_beta = std::max(max_inv_beta, 1.0 / alter.beta);
    if (problem.params.gamma() > max_inv_beta) {
      ++case_b;
      check.expect(plan.total_avatar_hours == 0.0,
                   "case B with avatar time on trial " + fmt(trial));
      check.expect(plan.spare_hours == 0.0,
                   "case B with spare time on trial " + fmt(trial));
    } else if (problem.params.gamma() < max_inv_beta) {
      ++case_a;
      const double expected = testing::expected_total_avatar(problem);
      check.expect(
          std::abs(plan.total_avatar_hours - expected) <=
              kFeasibilityTolHours,
          "case A avatar total off by " +
              fmt(std::abs(plan.total_avatar_hours - expected)));
    }
    if (!check.ok) return;
  }
  check.expect(case_a >= 100, "too few case-A instances: " + fmt(case_a));
  check.expect(case_b >= 100, "too few case-B instances: " + fmt(case_b));
}

void sweep_curves(Checker& check) {
  const fs::path fixture = fs::path(EGOTIME_DATA_DIR) / "network_117.json";
  const EgoNetwork net = load_network(fixture);
  check.expect(net.size() == 117, "fixture size " + fmt(net.size()));
  check.expect(std::abs(net.total_baseline_hours() - 1288.0) <= 1e-6,
               "fixture total " + fmt(net.total_baseline_hours()));

  SweepConfig config;
  config.beta = 1.29;
  config.debrief_budget = 300.0;
  config.gamma_grid = make_gamma_grid(1.29, 40);
  config.y_scenarios =
      y_scenarios_from_multiples(net.total_baseline_hours());
  const auto records = run_sweep(net, config);
  check.expect(records.size() == 120, "record count " + fmt(records.size()));

  const std::size_t g = config.gamma_grid.size();
  for (std::size_t s = 0; s < 3; ++s) {
    for (std::size_t i = 1; i < g; ++i)
      check.expect(records[s * g + i].spare_hours <=
                       records[s * g + i - 1].spare_hours +
                           kFeasibilityTolHours,
                   "spare increases along gamma");
    check.expect(records[s * g + g - 1].spare_hours < 1.0,
                 "spare at the last grid point is " +
                     fmt(records[s * g + g - 1].spare_hours));
  }
  for (std::size_t i = 0; i < g; ++i) {
    check.expect(records[2 * g + i].spare_hours >=
                     records[1 * g + i].spare_hours - kFeasibilityTolHours,
                 "2x curve below 1x curve");
    check.expect(records[1 * g + i].spare_hours >=
                     records[0 * g + i].spare_hours - kFeasibilityTolHours,
                 "1x curve below 0.5x curve");
  }

  // Spot value at gamma = 0.3 with the capacity-rich scenario.
  const AllocationProblem spot = sweep_point_problem(
      net, config, 0.3, 2.0 * net.total_baseline_hours());
  const double spare = solve(spot).spare_hours;
  const double derived = (1.0 / 1.29 - 0.3) * 1000.0;
  check.expect(std::abs(spare - derived) <= 1e-3,
               "spot spare " + fmt(spare) + " vs derived " + fmt(derived));
  check.expect(std::abs(spare - 475.19) < 5e-3,
               "spot spare does not round to 475.19: " + fmt(spare));
  const double closed = spare_time_closed_form(
      1288.0, 1.29, 0.3, 2.0 * 1288.0, 300.0);
  check.expect(std::abs(closed - derived) <= 1e-3,
               "closed form " + fmt(closed) + " vs derived " + fmt(derived));
}

void generator_statistics(Checker& check) {
  const auto start = Clock::now();
  const auto specs = default_layer_specs();
  const int samples = 10000;
  std::array<double, kLayerCount> size_sum{};
  std::array<double, kLayerCount> hour_sum{};
  double total_sum = 0.0;
  for (int seed = 1; seed <= samples; ++seed) {
    const EgoNetwork net = generate_network(seed, specs, 1.29);
    const auto sizes = layer_sizes(net);
    const auto hours = layer_total_hours(net);
    for (std::size_t i = 0; i < kLayerCount; ++i) {
      size_sum[i] += static_cast<double>(sizes[i]);
      hour_sum[i] += hours[i];
    }
    total_sum += net.total_baseline_hours();
  }
  double cumulative = 0.0;
  for (std::size_t i = 0; i < kLayerCount; ++i) {
    cumulative += size_sum[i] / samples;
    const double target = specs[i].cumulative_size_mean;
    check.expect(std::abs(cumulative - target) <= 0.05 * target,
                 "cumulative size mean " + fmt(cumulative) + " vs " +
                     fmt(target));
    const double time_mean = hour_sum[i] / size_sum[i];
    check.expect(
        std::abs(time_mean - specs[i].per_alter_time_mean) <=
            0.05 * specs[i].per_alter_time_mean,
        "per-alter mean " + fmt(time_mean) + " vs " +
            fmt(specs[i].per_alter_time_mean));
  }
  const double expected_total = 4.6 * 74.0 + 9.7 * 38.72 + 118.2 * 8.81;
  check.expect(
      std::abs(total_sum / samples - expected_total) <= 0.05 * expected_total,
      "mean total " + fmt(total_sum / samples) + " vs " + fmt(expected_total));
  const double seconds =
      std::chrono::duration<double>(Clock::now() - start).count();
  check.expect(seconds < 60.0, "runtime " + fmt(seconds) + " s >= 60 s");
}

void reinvestment_arithmetic(Checker& check) {
  const double active_size = 1041.51 / 8.81;
  check.expect(std::abs(active_size - 118.2) <= 0.5,
               "active layer size from totals: " + fmt(active_size));
  const auto counts = reinvest_capacity(1000.0, default_layer_specs());
  const double relative =
      std::abs(static_cast<double>(counts[2]) - 118.2) / 118.2;
  check.expect(relative <= 0.10,
               "1000 h buys " + fmt(counts[2]) +
                   " active alters, off the layer size by " + fmt(relative));
}

void cli_determinism(Checker& check) {
  const std::string cli = EGOTIME_CLI_PATH;
  const fs::path fixture = fs::path(EGOTIME_DATA_DIR) / "network_117.json";
  const fs::path run_a = testing::make_temp_dir("accept-a");
  const fs::path run_b = testing::make_temp_dir("accept-b");

  for (const fs::path& dir : {run_a, run_b}) {
    const std::string cd = "cd " + dir.string() + " && " + cli;
    auto r1 = testing::run_command(cd + " generate --seed 7 --out net.json");
    check.expect(r1.exit_code == 0, "generate failed: " + r1.output);
    auto r2 = testing::run_command(
        cd + " solve --net net.json --gamma 0.63 --avatar-hours 200"
             " --debrief-hours 150 --out plan.json");
    check.expect(r2.exit_code == 0, "solve failed: " + r2.output);
    auto r3 = testing::run_command(cd + " sweep --net " + fixture.string() +
                                   " --out-dir .");
    check.expect(r3.exit_code == 0, "sweep failed: " + r3.output);
    if (!check.ok) return;
  }
  for (const char* name : {"net.json", "plan.json", "sweep.csv",
                           "reinvest.csv", "manifest.json"}) {
    check.expect(testing::read_file(run_a / name) ==
                     testing::read_file(run_b / name),
                 std::string(name) + " differs between runs");
  }
}

}  // namespace

int main() {
  criterion(1, "calibration constants", calibration_constants);
  criterion(2, "worked two-alter instance, both solvers", worked_instance);
  criterion(3, "oracle equivalence on 1000 random instances",
            oracle_equivalence);
  criterion(4, "regime dichotomy on 600 random instances", regime_dichotomy);
  criterion(5, "sweep curves on the pinned 117-alter fixture", sweep_curves);
  criterion(6, "generator statistics over 10000 seeds", generator_statistics);
  criterion(7, "reinvestment arithmetic", reinvestment_arithmetic);
  criterion(8, "byte-identical CLI reruns", cli_determinism);

  if (g_failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  return g_failures;
}
