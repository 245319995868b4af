// Command-line front end: generate networks, solve single instances,
// run gamma sweeps, and verify the analytic solver against the simplex
// oracle. Every run that writes files also writes a manifest echoing the
// effective configuration, so outputs can be reproduced byte for byte with
// --config <manifest>.
//
// Exit codes: 0 success, 2 configuration or validation error, 3 I/O error,
// 4 verification failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "egotime/allocation.hpp"
#include "egotime/ego_network.hpp"
#include "egotime/errors.hpp"
#include "egotime/model_params.hpp"
#include "egotime/simplex.hpp"
#include "egotime/sweep.hpp"
#include "egotime/version.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitVerification = 4;

bool verbose() {
  static const bool enabled = [] {
    const char* value = std::getenv("EGOTIME_VERBOSE");
    return value != nullptr && std::string_view(value) != "0" &&
           std::string_view(value) != "";
  }();
  return enabled;
}

void info(const std::string& message) {
  if (verbose()) std::cerr << "[egotime] " << message << '\n';
}

json load_config_file(const fs::path& path, const std::string& command) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw egotime::IoError("cannot open config file: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw egotime::ValidationError("config file is not valid JSON: " +
                                   std::string(e.what()));
  }
  if (!doc.is_object())
    throw egotime::ValidationError("config file must hold a JSON object");
  // A manifest wraps the config next to the command it belongs to.
  if (doc.contains("config")) {
    if (doc.contains("command") && doc["command"] != command)
      throw egotime::ValidationError(
          "manifest was written by command '" +
          doc["command"].get<std::string>() + "', not '" + command + "'");
    doc = doc["config"];
    if (!doc.is_object())
      throw egotime::ValidationError("manifest 'config' must be an object");
  }
  return doc;
}

// Applies config-file values to options the user did not pass on the
// command line (flags win), and rejects unknown keys.
class ConfigMerge {
 public:
  ConfigMerge(CLI::App* cmd, std::optional<json> cfg)
      : cmd_(cmd), cfg_(std::move(cfg)) {}

  template <typename T>
  void field(const std::string& flag, const std::string& key, T& value) {
    allowed_.insert(key);
    if (!cfg_ || cmd_->count(flag) > 0 || !cfg_->contains(key)) return;
    try {
      value = cfg_->at(key).get<T>();
    } catch (const json::exception&) {
      throw egotime::ValidationError("config key '" + key +
                                     "' has the wrong type");
    }
  }

  // As above, but also reports whether the value came from anywhere.
  template <typename T>
  bool field_seen(const std::string& flag, const std::string& key, T& value) {
    const bool from_cli = cmd_->count(flag) > 0;
    field(flag, key, value);
    return from_cli || (cfg_ && cfg_->contains(key));
  }

  void finish() const {
    if (!cfg_) return;
    for (const auto& [key, value] : cfg_->items()) {
      (void)value;
      if (!allowed_.contains(key))
        throw egotime::ValidationError("unknown config key: " + key);
    }
  }

 private:
  CLI::App* cmd_;
  std::optional<json> cfg_;
  std::set<std::string> allowed_;
};

void ensure_parent_dir(const fs::path& path) {
  const fs::path parent = path.parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  fs::create_directories(parent, ec);
  if (ec)
    throw egotime::IoError("cannot create directory " + parent.string() +
                           ": " + ec.message());
}

void require_input_file(const fs::path& path) {
  if (!fs::exists(path))
    throw egotime::IoError("input file does not exist: " + path.string());
}

void write_manifest(const std::string& command, const json& config,
                    const fs::path& path) {
  json doc;
  doc["command"] = command;
  doc["version"] = std::string(egotime::kVersion);
  doc["config"] = config;
  ensure_parent_dir(path);
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw egotime::IoError("cannot write manifest: " + path.string());
  out << doc.dump(2) << '\n';
  out.flush();
  if (!out) throw egotime::IoError("failed writing manifest: " + path.string());
}

int config_error(CLI::App* cmd, const std::string& message) {
  std::cerr << "error: " << message << "\n\n" << cmd->help();
  return kExitConfig;
}

std::vector<egotime::LayerSpec> specs_from_lists(
    const std::vector<double>& means, const std::vector<double>& times) {
  if (means.size() != egotime::kLayerCount ||
      times.size() != egotime::kLayerCount)
    throw egotime::ValidationError(
        "--layer-means and --layer-times need exactly three values "
        "(support, sympathy, active)");
  std::vector<egotime::LayerSpec> specs;
  for (std::size_t i = 0; i < egotime::kLayerCount; ++i)
    specs.push_back({egotime::kLayers[i], means[i], times[i]});
  egotime::validate_layer_specs(specs);
  return specs;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out;
  std::vector<double> layer_means = {4.6, 14.3, 132.5};
  std::vector<double> layer_times = {74.0, 38.72, 8.81};
  double beta = egotime::default_beta();
  double time_cv = 0.5;
};

int run_generate(CLI::App* cmd, GenerateArgs& args) {
  std::optional<json> cfg;
  if (!args.config_path.empty())
    cfg = load_config_file(args.config_path, "generate");
  ConfigMerge merge(cmd, cfg);
  merge.field("--seed", "seed", args.seed);
  merge.field("--out", "out", args.out);
  merge.field("--layer-means", "layer_means", args.layer_means);
  merge.field("--layer-times", "layer_times", args.layer_times);
  merge.field("--beta", "beta", args.beta);
  merge.field("--time-cv", "time_cv", args.time_cv);
  merge.finish();
  if (args.out.empty()) return config_error(cmd, "--out is required");

  const auto specs = specs_from_lists(args.layer_means, args.layer_times);
  egotime::GeneratorOptions options;
  options.time_cv = args.time_cv;
  const egotime::EgoNetwork net =
      egotime::generate_network(args.seed, specs, args.beta, options);
  info("generated " + std::to_string(net.size()) + " alters");

  ensure_parent_dir(args.out);
  egotime::save_network(net, args.out);

  json config{{"seed", args.seed},
              {"out", args.out},
              {"layer_means", args.layer_means},
              {"layer_times", args.layer_times},
              {"beta", args.beta},
              {"time_cv", args.time_cv}};
  write_manifest("generate", config, args.out + ".manifest.json");
  std::cout << "wrote " << args.out << " (" << net.size() << " alters, "
            << net.total_baseline_hours() << " h baseline)\n";
  return kExitOk;
}

// ------------------------------------------------------------------- solve

struct SolveArgs {
  std::string config_path;
  std::string net;
  std::string out;
  double gamma = -1.0;  // negative => derive from c * delta
  double compression_c = egotime::kDefaultCompressionRatio;
  double delta = egotime::kDefaultAnthropomorphism;
  double avatar_capacity = egotime::kDefaultHorizonHours;
  double debrief_budget = -1.0;  // negative => zmax
  double zmax = -1.0;            // negative => attention default
  double horizon = egotime::kDefaultHorizonHours;
};

egotime::ModelParams params_from_solve_args(const SolveArgs& args) {
  egotime::ModelParams::Config pc;
  pc.horizon_hours = args.horizon;
  pc.avatar_capacity_y = args.avatar_capacity;
  pc.debrief_budget_z = args.debrief_budget;
  pc.debrief_cap_zmax = args.zmax;
  pc.compression_c = args.compression_c;
  pc.anthropomorphism_delta = args.delta;
  if (args.gamma >= 0.0) pc.gamma_override = args.gamma;
  return egotime::ModelParams(pc);
}

void merge_solve_params(ConfigMerge& merge, SolveArgs& args) {
  merge.field("--net", "net", args.net);
  merge.field("--gamma", "gamma", args.gamma);
  merge.field("--compression", "compression", args.compression_c);
  merge.field("--delta", "delta", args.delta);
  merge.field("--avatar-hours", "avatar_hours", args.avatar_capacity);
  merge.field("--debrief-hours", "debrief_hours", args.debrief_budget);
  merge.field("--zmax", "zmax", args.zmax);
  merge.field("--horizon", "horizon", args.horizon);
}

json solve_config_json(const SolveArgs& args) {
  return json{{"net", args.net},
              {"out", args.out},
              {"gamma", args.gamma},
              {"compression", args.compression_c},
              {"delta", args.delta},
              {"avatar_hours", args.avatar_capacity},
              {"debrief_hours", args.debrief_budget},
              {"zmax", args.zmax},
              {"horizon", args.horizon}};
}

void print_plan_summary(const egotime::AllocationProblem& problem,
                        const egotime::AllocationPlan& plan) {
  const egotime::EgoNetwork& net = problem.network;
  std::printf("network:        %zu alters, baseline %.6f h\n", net.size(),
              net.total_baseline_hours());
  std::printf("gamma:          %.6f\n", problem.params.gamma());
  std::printf("regime:         %s\n",
              std::string(to_string(plan.regime)).c_str());
  std::printf("objective:      %.6f h\n", plan.objective_value);
  std::printf("spare time:     %.6f h\n", plan.spare_hours);
  std::printf("user hours:     %.6f h\n", plan.total_user_hours);
  std::printf("avatar hours:   %.6f h\n", plan.total_avatar_hours);
  std::printf("debrief hours:  %.6f h\n", plan.total_debrief_hours);
  std::printf("binding budget: %s\n",
              std::string(to_string(classify_binding_budget(problem, plan)))
                  .c_str());
  if (plan.regime != egotime::Regime::kA)
    std::printf("note:           avatar not used (delegation saves no time)\n");
}

int run_solve(CLI::App* cmd, SolveArgs& args) {
  std::optional<json> cfg;
  if (!args.config_path.empty())
    cfg = load_config_file(args.config_path, "solve");
  ConfigMerge merge(cmd, cfg);
  merge_solve_params(merge, args);
  merge.field("--out", "out", args.out);
  merge.finish();
  if (args.net.empty()) return config_error(cmd, "--net is required");
  if (args.out.empty()) return config_error(cmd, "--out is required");
  require_input_file(args.net);

  const egotime::EgoNetwork net = egotime::load_network(args.net);
  const egotime::AllocationProblem problem{net, params_from_solve_args(args)};
  const egotime::AllocationPlan plan = egotime::solve(problem);

  print_plan_summary(problem, plan);
  ensure_parent_dir(args.out);
  egotime::save_plan(plan, args.out);
  std::printf("plan:           %s\n", args.out.c_str());

  write_manifest("solve", solve_config_json(args), args.out + ".manifest.json");
  return kExitOk;
}

// ------------------------------------------------------------------ verify

int run_verify(CLI::App* cmd, SolveArgs& args) {
  std::optional<json> cfg;
  if (!args.config_path.empty())
    cfg = load_config_file(args.config_path, "verify");
  ConfigMerge merge(cmd, cfg);
  merge_solve_params(merge, args);
  merge.finish();
  if (args.net.empty()) return config_error(cmd, "--net is required");
  require_input_file(args.net);

  const egotime::EgoNetwork net = egotime::load_network(args.net);
  const egotime::AllocationProblem problem{net, params_from_solve_args(args)};
  const egotime::AllocationPlan plan = egotime::solve(problem);
  const egotime::LpSolution oracle =
      egotime::solve_lp(egotime::build_lp(problem));

  std::printf("analytic objective: %.9f h\n", plan.objective_value);
  std::printf("simplex objective:  %.9f h (%s, %zu pivots)\n",
              oracle.objective, std::string(to_string(oracle.status)).c_str(),
              oracle.iterations);
  const double diff = std::abs(plan.objective_value - oracle.objective);
  const double tol =
      egotime::kOracleRelTol * std::max(1.0, std::abs(plan.objective_value));
  const auto residuals = egotime::plan_residuals(problem, plan);
  std::printf("objective difference: %.3e (tolerance %.3e)\n", diff, tol);
  std::printf("worst plan residual:  %.3e h\n", residuals.max_violation());
  const bool ok = oracle.status == egotime::LpStatus::kOptimal && diff <= tol &&
                  residuals.max_violation() <= egotime::kFeasibilityTolHours;
  std::printf("verification: %s\n", ok ? "PASS" : "FAIL");
  return ok ? kExitOk : kExitVerification;
}

// ------------------------------------------------------------------- sweep

struct SweepArgs {
  std::string config_path;
  std::string net;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  double beta = egotime::kSweepBeta;
  double debrief_budget = 300.0;
  double zmax = -1.0;
  double horizon = egotime::kDefaultHorizonHours;
  std::size_t gamma_points = 40;
  double gamma_max = -1.0;  // negative => 1/beta - 1e-6
  std::vector<double> gamma_grid;
  std::vector<double> y_multiples = {0.5, 1.0, 2.0};
  std::vector<double> y_hours;
  bool verify = false;
};

int run_sweep_cmd(CLI::App* cmd, SweepArgs& args) {
  std::optional<json> cfg;
  if (!args.config_path.empty())
    cfg = load_config_file(args.config_path, "sweep");
  ConfigMerge merge(cmd, cfg);
  merge.field("--net", "net", args.net);
  const bool seed_given = merge.field_seen("--seed", "seed", args.seed);
  merge.field("--out-dir", "out_dir", args.out_dir);
  merge.field("--beta", "beta", args.beta);
  merge.field("--debrief-hours", "debrief_hours", args.debrief_budget);
  merge.field("--zmax", "zmax", args.zmax);
  merge.field("--horizon", "horizon", args.horizon);
  merge.field("--gamma-points", "gamma_points", args.gamma_points);
  merge.field("--gamma-max", "gamma_max", args.gamma_max);
  merge.field("--gamma-grid", "gamma_grid", args.gamma_grid);
  merge.field("--y-mult", "y_mult", args.y_multiples);
  merge.field("--y-hours", "y_hours", args.y_hours);
  merge.field("--verify", "verify", args.verify);
  merge.finish();

  const bool has_net = !args.net.empty();
  if (has_net == seed_given)
    return config_error(cmd,
                        "pass exactly one network source: --net or --seed");
  if (has_net) require_input_file(args.net);
  if (cmd->count("--y-hours") > 0 && cmd->count("--y-mult") > 0)
    return config_error(cmd, "--y-hours and --y-mult are mutually exclusive");

  egotime::SweepConfig config;
  config.beta = args.beta;
  config.debrief_budget = args.debrief_budget;
  config.debrief_cap = args.zmax;
  config.horizon_hours = args.horizon;
  if (has_net)
    config.network_source.fixture_path = args.net;
  else
    config.network_source.generator_seed = args.seed;

  if (!args.gamma_grid.empty()) {
    config.gamma_grid = args.gamma_grid;
  } else {
    const double top =
        args.gamma_max >= 0.0 ? args.gamma_max : 1.0 / args.beta - 1e-6;
    config.gamma_grid.resize(args.gamma_points);
    for (std::size_t i = 0; i < args.gamma_points; ++i)
      config.gamma_grid[i] =
          args.gamma_points == 1
              ? 0.0
              : top * static_cast<double>(i) /
                    static_cast<double>(args.gamma_points - 1);
  }

  const egotime::EgoNetwork net =
      egotime::resolve_network(config.network_source);
  info("network: " + std::to_string(net.size()) + " alters");
  config.y_scenarios =
      !args.y_hours.empty()
          ? args.y_hours
          : egotime::y_scenarios_from_multiples(net.total_baseline_hours(),
                                                args.y_multiples);

  const std::vector<egotime::SweepRecord> records =
      egotime::run_sweep(net, config);

  // Replay each record against the simplex oracle when asked.
  std::vector<bool> verified;
  bool all_ok = true;
  if (args.verify) {
    verified.reserve(records.size());
    for (const egotime::SweepRecord& record : records) {
      const egotime::AllocationProblem problem = egotime::sweep_point_problem(
          net, config, record.gamma, record.avatar_capacity);
      const egotime::LpSolution oracle =
          egotime::solve_lp(egotime::build_lp(problem));
      const double expected =
          problem.network.total_baseline_hours() - record.spare_hours;
      const bool ok =
          oracle.status == egotime::LpStatus::kOptimal &&
          std::abs(oracle.objective - expected) <=
              egotime::kOracleRelTol * std::max(1.0, std::abs(expected));
      verified.push_back(ok);
      all_ok = all_ok && ok;
    }
  }

  const fs::path out_dir(args.out_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec)
    throw egotime::IoError("cannot create output directory " +
                           out_dir.string() + ": " + ec.message());
  const fs::path sweep_csv = out_dir / "sweep.csv";
  const fs::path reinvest_csv = out_dir / "reinvest.csv";
  egotime::export_records(records, sweep_csv,
                          args.verify ? &verified : nullptr);

  // Reinvestment capacity at the sweep's best spare time.
  double best_spare = 0.0;
  for (const egotime::SweepRecord& record : records)
    best_spare = std::max(best_spare, record.spare_hours);
  egotime::write_reinvestment_csv(best_spare, egotime::default_layer_specs(),
                                  egotime::layer_sizes(net), reinvest_csv);

  json config_echo{{"out_dir", args.out_dir},
                   {"beta", args.beta},
                   {"debrief_hours", args.debrief_budget},
                   {"zmax", args.zmax},
                   {"horizon", args.horizon},
                   {"gamma_grid", config.gamma_grid},
                   {"y_hours", config.y_scenarios},
                   {"verify", args.verify}};
  if (has_net)
    config_echo["net"] = args.net;
  else
    config_echo["seed"] = args.seed;
  write_manifest("sweep", config_echo, out_dir / "manifest.json");

  std::cout << "wrote " << sweep_csv.string() << " (" << records.size()
            << " rows) and " << reinvest_csv.string() << '\n';
  if (args.verify) {
    const std::size_t failures =
        static_cast<std::size_t>(std::count(verified.begin(), verified.end(),
                                            false));
    std::cout << "oracle verification: "
              << (all_ok ? "all rows PASS"
                         : std::to_string(failures) + " rows FAIL")
              << '\n';
    if (!all_ok) return kExitVerification;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Avatar-augmented socializing time: ego-network generation, "
               "spare-time optimization, and parameter sweeps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(egotime::kVersion));

  GenerateArgs gen_args;
  CLI::App* gen = app.add_subcommand(
      "generate", "Generate a synthetic ego network file");
  gen->add_option("--config", gen_args.config_path,
                  "JSON config file (flags win)");
  gen->add_option("--seed", gen_args.seed, "Random seed");
  gen->add_option("--out", gen_args.out, "Output network JSON path");
  gen->add_option("--layer-means", gen_args.layer_means,
                  "Cumulative layer size means, inner to outer")
      ->delimiter(',');
  gen->add_option("--layer-times", gen_args.layer_times,
                  "Per-alter yearly hours per layer, inner to outer")
      ->delimiter(',');
  gen->add_option("--beta", gen_args.beta,
                  "Avatar-to-direct conversion factor for every alter");
  gen->add_option("--time-cv", gen_args.time_cv,
                  "Coefficient of variation of per-alter times");

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand(
      "solve", "Solve the spare-time problem for one network");
  SolveArgs verify_args;
  CLI::App* verify = app.add_subcommand(
      "verify", "Cross-check the analytic solution against the simplex oracle");
  for (auto& [sub, sa] : {std::pair<CLI::App*, SolveArgs*>{solve, &solve_args},
                          {verify, &verify_args}}) {
    sub->add_option("--config", sa->config_path,
                    "JSON config file (flags win)");
    sub->add_option("--net", sa->net, "Network JSON file");
    sub->add_option("--gamma", sa->gamma,
                    "Debriefing efficiency (overrides compression * delta)");
    sub->add_option("--compression", sa->compression_c,
                    "Conversation compression ratio in (0,1]");
    sub->add_option("--delta", sa->delta, "Avatar social-cue efficiency");
    sub->add_option("--avatar-hours", sa->avatar_capacity,
                    "Avatar capacity Y, hours");
    sub->add_option("--debrief-hours", sa->debrief_budget,
                    "Debriefing budget Z, hours");
    sub->add_option("--zmax", sa->zmax, "Attention cap on Z, hours");
    sub->add_option("--horizon", sa->horizon, "Time horizon, hours");
  }
  solve->add_option("--out", solve_args.out, "Output plan JSON path");

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Gamma sweep over avatar-capacity scenarios, CSV output");
  sweep->add_option("--config", sweep_args.config_path,
                    "JSON config file (flags win)");
  sweep->add_option("--net", sweep_args.net, "Network JSON file");
  sweep->add_option("--seed", sweep_args.seed,
                    "Generate the network from this seed instead");
  sweep->add_option("--out-dir", sweep_args.out_dir,
                    "Directory for sweep.csv, reinvest.csv, manifest.json");
  sweep->add_option("--beta", sweep_args.beta,
                    "Conversion factor applied to every alter");
  sweep->add_option("--debrief-hours", sweep_args.debrief_budget,
                    "Debriefing budget Z, hours");
  sweep->add_option("--zmax", sweep_args.zmax, "Attention cap on Z, hours");
  sweep->add_option("--horizon", sweep_args.horizon, "Time horizon, hours");
  sweep->add_option("--gamma-points", sweep_args.gamma_points,
                    "Number of evenly spaced gamma values");
  sweep->add_option("--gamma-max", sweep_args.gamma_max,
                    "Top of the gamma grid (must stay below 1/beta)");
  sweep->add_option("--gamma-grid", sweep_args.gamma_grid,
                    "Explicit gamma values (overrides points/max)")
      ->delimiter(',');
  sweep->add_option("--y-mult", sweep_args.y_multiples,
                    "Avatar capacity scenarios as multiples of the baseline")
      ->delimiter(',');
  sweep->add_option("--y-hours", sweep_args.y_hours,
                    "Avatar capacity scenarios in absolute hours")
      ->delimiter(',');
  sweep->add_flag("--verify", sweep_args.verify,
                  "Replay every sweep point through the simplex oracle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (gen->parsed()) return run_generate(gen, gen_args);
    if (solve->parsed()) return run_solve(solve, solve_args);
    if (verify->parsed()) return run_verify(verify, verify_args);
    if (sweep->parsed()) return run_sweep_cmd(sweep, sweep_args);
  } catch (const egotime::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const egotime::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
