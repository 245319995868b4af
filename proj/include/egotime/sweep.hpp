#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "egotime/allocation.hpp"
#include "egotime/ego_network.hpp"

namespace egotime {

// Beta used by the gamma-sweep experiments.
inline constexpr double kSweepBeta = 1.29;

/// Which budget stops the avatar from taking more work at the optimum.
enum class BindingBudget { kAvatarCapacity, kDebriefBudget, kPresenceCaps };

std::string_view to_string(BindingBudget budget);
BindingBudget binding_budget_from_string(std::string_view name);

struct SweepRecord {
  double gamma;
  double avatar_capacity;  // Y for this scenario
  double spare_hours;
  double total_avatar_hours;
  BindingBudget binding_budget;
};

/// Where the sweep gets its network from: a fixture file or the generator.
struct NetworkSource {
  std::optional<std::filesystem::path> fixture_path;
  std::optional<std::uint64_t> generator_seed;
};

struct SweepConfig {
  std::vector<double> gamma_grid;      // each strictly below 1/beta
  std::vector<double> y_scenarios;     // avatar capacities, hours
  double debrief_budget = 300.0;
  double debrief_cap = -1.0;           // negative => attention-span default
  double beta = kSweepBeta;            // applied to every alter
  double horizon_hours = kDefaultHorizonHours;
  NetworkSource network_source;
};

/// `points` evenly spaced gammas on [0, 1/beta - end_margin].
std::vector<double> make_gamma_grid(double beta, std::size_t points = 40,
                                    double end_margin = 1e-6);

/// Standard capacity scenarios: multiples of the network's baseline total
/// (default 0.5x, 1x, 2x).
std::vector<double> y_scenarios_from_multiples(
    double total_baseline_hours, const std::vector<double>& multiples = {
                                     0.5, 1.0, 2.0});

void validate_sweep_config(const SweepConfig& config);
EgoNetwork resolve_network(const NetworkSource& source);

BindingBudget classify_binding_budget(const AllocationProblem& problem,
                                      const AllocationPlan& plan);

/// The exact problem solved for one sweep point (config beta applied to
/// every alter). Exposed so callers can replay records against the simplex
/// oracle.
AllocationProblem sweep_point_problem(const EgoNetwork& net,
                                      const SweepConfig& config, double gamma,
                                      double avatar_capacity);

/// One solve per (Y scenario, gamma) pair, sorted by (Y, gamma).
std::vector<SweepRecord> run_sweep(const EgoNetwork& net,
                                   const SweepConfig& config);
std::vector<SweepRecord> run_sweep(const SweepConfig& config);

/// Whole new relationships affordable per layer: floor(spare / mean time
/// per member of that layer).
std::array<std::uint64_t, kLayerCount> reinvest_capacity(
    double spare_hours, const std::vector<LayerSpec>& specs);

/// CSV schema: gamma,Y,spare_hours,total_y_hours,binding_budget with six
/// decimal places, LF line endings. `verified` appends a pass flag column.
void export_records(const std::vector<SweepRecord>& records,
                    const std::filesystem::path& path,
                    const std::vector<bool>* verified = nullptr);
std::vector<SweepRecord> import_records(const std::filesystem::path& path);

/// CSV schema: layer,spare_hours,new_alters,current_layer_size.
void write_reinvestment_csv(double spare_hours,
                            const std::vector<LayerSpec>& specs,
                            const std::array<std::size_t, kLayerCount>& sizes,
                            const std::filesystem::path& path);

}  // namespace egotime
