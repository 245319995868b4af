#include "egotime/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "egotime/errors.hpp"

namespace egotime {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

std::string format_row(double gamma, double y, double spare, double total_y) {
  char buffer[160];
  std::snprintf(buffer, sizeof(buffer), "%.6f,%.6f,%.6f,%.6f", gamma, y, spare,
                total_y);
  return buffer;
}

double parse_double_field(const std::string& field, const std::string& where) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(field, &used);
  } catch (const std::exception&) {
    throw ValidationError("not a number in " + where + ": '" + field + "'");
  }
  if (used != field.size())
    throw ValidationError("trailing junk in " + where + ": '" + field + "'");
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

std::string_view to_string(BindingBudget budget) {
  switch (budget) {
    case BindingBudget::kAvatarCapacity: return "avatar_capacity";
    case BindingBudget::kDebriefBudget: return "debrief_budget";
    case BindingBudget::kPresenceCaps: return "presence_caps";
  }
  return "unknown";
}

BindingBudget binding_budget_from_string(std::string_view name) {
  if (name == "avatar_capacity") return BindingBudget::kAvatarCapacity;
  if (name == "debrief_budget") return BindingBudget::kDebriefBudget;
  if (name == "presence_caps") return BindingBudget::kPresenceCaps;
  throw ValidationError("unknown binding budget label: " + std::string(name));
}

std::vector<double> make_gamma_grid(double beta, std::size_t points,
                                    double end_margin) {
  require(std::isfinite(beta) && beta > 0.0, "beta must be positive");
  require(end_margin > 0.0 && end_margin < 1.0 / beta,
          "end_margin must lie in (0, 1/beta)");
  if (points == 0) return {};
  const double top = 1.0 / beta - end_margin;
  if (points == 1) return {0.0};
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = top * static_cast<double>(i) / static_cast<double>(points - 1);
  return grid;
}

std::vector<double> y_scenarios_from_multiples(
    double total_baseline_hours, const std::vector<double>& multiples) {
  require(total_baseline_hours >= 0.0, "baseline hours must be nonnegative");
  std::vector<double> scenarios;
  scenarios.reserve(multiples.size());
  for (double m : multiples) {
    require(std::isfinite(m) && m >= 0.0, "multiples must be nonnegative");
    scenarios.push_back(m * total_baseline_hours);
  }
  return scenarios;
}

void validate_sweep_config(const SweepConfig& config) {
  require(std::isfinite(config.beta) && config.beta >= 1.0,
          "sweep beta must be >= 1");
  const double limit = 1.0 / config.beta;
  for (double gamma : config.gamma_grid)
    require(std::isfinite(gamma) && gamma >= 0.0 && gamma < limit,
            "sweep gammas must lie in [0, 1/beta)");
  for (double y : config.y_scenarios)
    require(std::isfinite(y) && y >= 0.0,
            "Y scenarios must be nonnegative hours");
  require(std::isfinite(config.debrief_budget) && config.debrief_budget >= 0.0,
          "debrief budget must be nonnegative");
  require(std::isfinite(config.horizon_hours) && config.horizon_hours > 0.0,
          "horizon must be positive");
}

EgoNetwork resolve_network(const NetworkSource& source) {
  if (source.fixture_path && source.generator_seed)
    throw ValidationError(
        "network source must be either a fixture path or a seed, not both");
  if (source.fixture_path) return load_network(*source.fixture_path);
  if (source.generator_seed)
    return generate_network(*source.generator_seed, default_layer_specs(),
                            default_beta());
  throw ValidationError("network source is empty");
}

BindingBudget classify_binding_budget(const AllocationProblem& problem,
                                      const AllocationPlan& plan) {
  const ModelParams& params = problem.params;
  const double gamma = params.gamma();
  const double total_y = plan.total_avatar_hours;
  if (std::abs(total_y - params.avatar_capacity_y()) <= kFeasibilityTolHours)
    return BindingBudget::kAvatarCapacity;
  const double debrief_limit =
      gamma > 0.0 ? params.debrief_budget_z() / gamma : kInf;
  if (std::isfinite(debrief_limit) &&
      std::abs(total_y - debrief_limit) <= kFeasibilityTolHours)
    return BindingBudget::kDebriefBudget;
  return BindingBudget::kPresenceCaps;
}

AllocationProblem sweep_point_problem(const EgoNetwork& net,
                                      const SweepConfig& config, double gamma,
                                      double avatar_capacity) {
  // The sweep studies a single conversion factor, so it overrides whatever
  // betas the network carries.
  std::vector<Alter> alters = net.alters();
  for (Alter& alter : alters) alter.beta = config.beta;
  EgoNetwork sweep_net(net.seed(), std::move(alters));

  ModelParams::Config pc;
  pc.horizon_hours = config.horizon_hours;
  pc.avatar_capacity_y = avatar_capacity;
  pc.debrief_budget_z = config.debrief_budget;
  pc.debrief_cap_zmax = config.debrief_cap;
  pc.gamma_override = gamma;
  pc.default_beta = config.beta;
  return {std::move(sweep_net), ModelParams(pc)};
}

std::vector<SweepRecord> run_sweep(const EgoNetwork& net,
                                   const SweepConfig& config) {
  validate_sweep_config(config);

  std::vector<double> gammas = config.gamma_grid;
  std::sort(gammas.begin(), gammas.end());
  std::vector<double> scenarios = config.y_scenarios;
  std::sort(scenarios.begin(), scenarios.end());

  const double inv_beta = 1.0 / config.beta;
  std::vector<SweepRecord> records;
  records.reserve(gammas.size() * scenarios.size());
  for (double capacity : scenarios) {
    for (double gamma : gammas) {
      const AllocationProblem problem =
          sweep_point_problem(net, config, gamma, capacity);
      const AllocationPlan plan = solve(problem);
      SweepRecord record{gamma, capacity, plan.spare_hours,
                         plan.total_avatar_hours,
                         classify_binding_budget(problem, plan)};
      // Homogeneous beta makes spare = (1/beta - gamma) * total_y; anything
      // else is a solver bug.
      if (std::abs(record.spare_hours -
                   (inv_beta - gamma) * record.total_avatar_hours) >
          kFeasibilityTolHours)
        throw std::logic_error("sweep record violates the spare identity");
      records.push_back(record);
    }
  }
  return records;
}

std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
  return run_sweep(resolve_network(config.network_source), config);
}

std::array<std::uint64_t, kLayerCount> reinvest_capacity(
    double spare_hours, const std::vector<LayerSpec>& specs) {
  require(std::isfinite(spare_hours) && spare_hours >= 0.0,
          "spare hours must be nonnegative");
  validate_layer_specs(specs);
  std::array<std::uint64_t, kLayerCount> counts{};
  for (std::size_t i = 0; i < specs.size(); ++i) {
    counts[i] = specs[i].per_alter_time_mean > 0.0
                    ? static_cast<std::uint64_t>(
                          spare_hours / specs[i].per_alter_time_mean)
                    : 0;
  }
  return counts;
}

void export_records(const std::vector<SweepRecord>& records,
                    const std::filesystem::path& path,
                    const std::vector<bool>* verified) {
  if (verified && verified->size() != records.size())
    throw ValidationError("verification flags do not match record count");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open sweep CSV for writing: " + path.string());
  out << "gamma,Y,spare_hours,total_y_hours,binding_budget";
  if (verified) out << ",verified";
  out << '\n';
  for (std::size_t i = 0; i < records.size(); ++i) {
    const SweepRecord& r = records[i];
    out << format_row(r.gamma, r.avatar_capacity, r.spare_hours,
                      r.total_avatar_hours)
        << ',' << to_string(r.binding_budget);
    if (verified) out << ',' << ((*verified)[i] ? "true" : "false");
    out << '\n';
  }
  out.flush();
  if (!out) throw IoError("failed writing sweep CSV: " + path.string());
}

std::vector<SweepRecord> import_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open sweep CSV: " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw ValidationError("sweep CSV is empty: " + path.string());
  const bool with_verified =
      line == "gamma,Y,spare_hours,total_y_hours,binding_budget,verified";
  if (!with_verified &&
      line != "gamma,Y,spare_hours,total_y_hours,binding_budget")
    throw ValidationError("unexpected sweep CSV header: " + line);

  std::vector<SweepRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    const std::size_t expected = with_verified ? 6 : 5;
    if (fields.size() != expected) {
      std::ostringstream os;
      os << "line " << line_no << ": expected " << expected << " fields, got "
         << fields.size();
      throw ValidationError(os.str());
    }
    std::ostringstream where;
    where << "line " << line_no;
    records.push_back({parse_double_field(fields[0], where.str()),
                       parse_double_field(fields[1], where.str()),
                       parse_double_field(fields[2], where.str()),
                       parse_double_field(fields[3], where.str()),
                       binding_budget_from_string(fields[4])});
  }
  return records;
}

void write_reinvestment_csv(double spare_hours,
                            const std::vector<LayerSpec>& specs,
                            const std::array<std::size_t, kLayerCount>& sizes,
                            const std::filesystem::path& path) {
  const auto counts = reinvest_capacity(spare_hours, specs);
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot open reinvestment CSV for writing: " + path.string());
  out << "layer,spare_hours,new_alters,current_layer_size\n";
  for (std::size_t i = 0; i < specs.size(); ++i) {
    char buffer[96];
    std::snprintf(buffer, sizeof(buffer), "%.6f", spare_hours);
    out << to_string(specs[i].layer) << ',' << buffer << ',' << counts[i]
        << ',' << sizes[i] << '\n';
  }
  out.flush();
  if (!out) throw IoError("failed writing reinvestment CSV: " + path.string());
}

}  // namespace egotime
