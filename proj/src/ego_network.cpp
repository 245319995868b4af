#include "egotime/ego_network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "egotime/errors.hpp"

namespace egotime {

namespace {

using nlohmann::json;

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

std::string alter_message(std::uint64_t id, const std::string& what) {
  std::ostringstream os;
  os << "alter " << id << ": " << what;
  return os.str();
}

}  // namespace

std::string_view to_string(Layer layer) {
  switch (layer) {
    case Layer::kSupportClique: return "support_clique";
    case Layer::kSympathyGroup: return "sympathy_group";
    case Layer::kActiveNetwork: return "active_network";
  }
  return "unknown";
}

Layer layer_from_string(std::string_view name) {
  for (Layer layer : kLayers)
    if (name == to_string(layer)) return layer;
  throw ValidationError("unknown layer name: " + std::string(name));
}

std::vector<LayerSpec> default_layer_specs() {
  return {
      {Layer::kSupportClique, 4.6, 74.0},
      {Layer::kSympathyGroup, 14.3, 38.72},
      {Layer::kActiveNetwork, 132.5, 8.81},
  };
}

void validate_layer_specs(const std::vector<LayerSpec>& specs) {
  require(specs.size() == kLayerCount,
          "layer specs must list the three layers inner to outer");
  double prev_cumulative = 0.0;
  double prev_time = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const LayerSpec& spec = specs[i];
    require(spec.layer == kLayers[i],
            "layer specs must be ordered support_clique, sympathy_group, "
            "active_network");
    require(std::isfinite(spec.cumulative_size_mean) &&
                spec.cumulative_size_mean >= 0.0,
            "cumulative_size_mean must be nonnegative");
    require(std::isfinite(spec.per_alter_time_mean) &&
                spec.per_alter_time_mean >= 0.0,
            "per_alter_time_mean must be nonnegative");
    require(spec.cumulative_size_mean >= prev_cumulative,
            "cumulative sizes must not decrease from inner to outer layer");
    require(spec.per_alter_time_mean <= prev_time,
            "per-alter times must not increase from inner to outer layer");
    if (spec.cumulative_size_mean > prev_cumulative)
      require(spec.per_alter_time_mean > 0.0,
              "a layer with expected members needs a positive time mean");
    prev_cumulative = spec.cumulative_size_mean;
    prev_time = spec.per_alter_time_mean;
  }
}

std::array<double, kLayerCount> exclusive_size_means(
    const std::vector<LayerSpec>& specs) {
  validate_layer_specs(specs);
  std::array<double, kLayerCount> means{};
  double prev = 0.0;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    means[i] = specs[i].cumulative_size_mean - prev;
    prev = specs[i].cumulative_size_mean;
  }
  return means;
}

EgoNetwork::EgoNetwork(std::uint64_t seed, std::vector<Alter> alters)
    : seed_(seed), alters_(std::move(alters)) {
  std::unordered_set<std::uint64_t> ids;
  ids.reserve(alters_.size());
  double total = 0.0;
  for (const Alter& alter : alters_) {
    require(std::isfinite(alter.baseline_hours) && alter.baseline_hours > 0.0,
            alter_message(alter.id, "x_tilde must be positive"));
    require(std::isfinite(alter.beta) && alter.beta >= 1.0,
            alter_message(alter.id, "beta must be >= 1"));
    require(ids.insert(alter.id).second,
            alter_message(alter.id, "duplicate id"));
    total += alter.baseline_hours;
  }
  total_baseline_hours_ = total;
}

EgoNetwork generate_network(std::uint64_t seed,
                            const std::vector<LayerSpec>& specs,
                            double default_beta,
                            const GeneratorOptions& options) {
  validate_layer_specs(specs);
  require(std::isfinite(default_beta) && default_beta >= 1.0,
          "default_beta must be >= 1");
  require(std::isfinite(options.time_cv) && options.time_cv > 0.0,
          "time_cv must be positive");
  require(std::isfinite(options.min_time_hours) &&
              options.min_time_hours > 0.0,
          "min_time_hours must be positive");

  const auto exclusive = exclusive_size_means(specs);
  std::mt19937_64 rng(seed);
  std::vector<Alter> alters;
  std::uint64_t next_id = 1;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (exclusive[i] <= 0.0) continue;
    std::poisson_distribution<std::int64_t> size_dist(exclusive[i]);
    const std::int64_t count = size_dist(rng);
    // Gamma with the published mean and the configured coefficient of
    // variation: shape 1/cv^2, scale mean*cv^2.
    const double cv2 = options.time_cv * options.time_cv;
    std::gamma_distribution<double> time_dist(
        1.0 / cv2, specs[i].per_alter_time_mean * cv2);
    for (std::int64_t k = 0; k < count; ++k) {
      const double hours = std::max(time_dist(rng), options.min_time_hours);
      alters.push_back({next_id++, specs[i].layer, hours, default_beta});
    }
  }
  return EgoNetwork(seed, std::move(alters));
}

std::array<double, kLayerCount> layer_total_hours(const EgoNetwork& net) {
  std::array<double, kLayerCount> totals{};
  for (const Alter& alter : net.alters())
    totals[static_cast<std::size_t>(alter.layer)] += alter.baseline_hours;
  return totals;
}

std::array<std::size_t, kLayerCount> layer_sizes(const EgoNetwork& net) {
  std::array<std::size_t, kLayerCount> sizes{};
  for (const Alter& alter : net.alters())
    ++sizes[static_cast<std::size_t>(alter.layer)];
  return sizes;
}

std::string serialize_network(const EgoNetwork& net) {
  json doc;
  doc["seed"] = net.seed();
  json alters = json::array();
  for (const Alter& alter : net.alters()) {
    alters.push_back({{"id", alter.id},
                      {"layer", std::string(to_string(alter.layer))},
                      {"x_tilde", alter.baseline_hours},
                      {"beta", alter.beta}});
  }
  doc["alters"] = std::move(alters);
  return doc.dump(2) + "\n";
}

EgoNetwork parse_network(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("network file is not valid JSON: ") +
                          e.what());
  }
  require(doc.is_object(), "network document must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    require(key == "seed" || key == "alters",
            "unknown field in network document: " + key);
  }
  require(doc.contains("seed") && doc["seed"].is_number_unsigned(),
          "network document needs an unsigned integer 'seed'");
  require(doc.contains("alters") && doc["alters"].is_array(),
          "network document needs an 'alters' array");

  std::vector<Alter> alters;
  alters.reserve(doc["alters"].size());
  for (const json& entry : doc["alters"]) {
    require(entry.is_object(), "each alter must be a JSON object");
    for (const auto& [key, value] : entry.items()) {
      (void)value;
      require(key == "id" || key == "layer" || key == "x_tilde" ||
                  key == "beta",
              "unknown field in alter entry: " + key);
    }
    require(entry.contains("id") && entry["id"].is_number_unsigned(),
            "alter entry needs an unsigned integer 'id'");
    require(entry.contains("layer") && entry["layer"].is_string(),
            "alter entry needs a string 'layer'");
    require(entry.contains("x_tilde") && entry["x_tilde"].is_number(),
            "alter entry needs a numeric 'x_tilde'");
    require(entry.contains("beta") && entry["beta"].is_number(),
            "alter entry needs a numeric 'beta'");
    alters.push_back({entry["id"].get<std::uint64_t>(),
                      layer_from_string(entry["layer"].get<std::string>()),
                      entry["x_tilde"].get<double>(),
                      entry["beta"].get<double>()});
  }
  return EgoNetwork(doc["seed"].get<std::uint64_t>(), std::move(alters));
}

EgoNetwork load_network(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open network file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed reading network file: " + path.string());
  return parse_network(buffer.str());
}

void save_network(const EgoNetwork& net, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open network file for writing: " +
                          path.string());
  out << serialize_network(net);
  out.flush();
  if (!out) throw IoError("failed writing network file: " + path.string());
}

}  // namespace egotime
