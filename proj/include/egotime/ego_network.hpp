#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace egotime {

/// The three concentric circles used throughout, inner to outer. The
/// "affinity group" circle of the five-layer model is deliberately absent.
enum class Layer : std::uint8_t {
  kSupportClique = 0,
  kSympathyGroup = 1,
  kActiveNetwork = 2,
};

inline constexpr std::size_t kLayerCount = 3;
inline constexpr std::array<Layer, kLayerCount> kLayers = {
    Layer::kSupportClique, Layer::kSympathyGroup, Layer::kActiveNetwork};

std::string_view to_string(Layer layer);
Layer layer_from_string(std::string_view name);

/// Published statistics for one circle: mean cumulative size (members of
/// this circle plus all inner ones) and mean yearly hours spent per member.
struct LayerSpec {
  Layer layer;
  double cumulative_size_mean;
  double per_alter_time_mean;
};

/// Mean cumulative sizes 4.6 / 14.3 / 132.5 with per-member yearly hours
/// 74 / 38.72 / 8.81.
std::vector<LayerSpec> default_layer_specs();

/// Specs must list the three layers inner to outer with non-decreasing
/// cumulative sizes and non-increasing per-member times; any layer with
/// positive expected exclusive size needs a positive time mean.
void validate_layer_specs(const std::vector<LayerSpec>& specs);

/// Expected exclusive (per-circle) sizes: adjacent differences of the
/// cumulative means.
std::array<double, kLayerCount> exclusive_size_means(
    const std::vector<LayerSpec>& specs);

struct Alter {
  std::uint64_t id;
  Layer layer;
  double baseline_hours;  // yearly direct socializing time, > 0
  double beta;            // avatar-to-direct time conversion, >= 1
};

/// An ego's contacts with their yearly time budgets. Immutable after
/// construction; construction validates every member and derives the total.
class EgoNetwork {
 public:
  EgoNetwork() = default;
  EgoNetwork(std::uint64_t seed, std::vector<Alter> alters);

  const std::vector<Alter>& alters() const { return alters_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t size() const { return alters_.size(); }
  bool empty() const { return alters_.empty(); }

  /// Sum of per-alter baseline hours.
  double total_baseline_hours() const { return total_baseline_hours_; }

 private:
  std::uint64_t seed_ = 0;
  std::vector<Alter> alters_;
  double total_baseline_hours_ = 0.0;
};

struct GeneratorOptions {
  double time_cv = 0.5;          // coefficient of variation of per-alter times
  double min_time_hours = 0.01;  // truncation floor for sampled times
};

/// Draws a synthetic network: exclusive circle sizes are Poisson with the
/// spec means, per-alter times are Gamma with the circle's mean and the
/// configured coefficient of variation, truncated below. Every alter gets
/// default_beta. A fixed seed reproduces the network exactly.
EgoNetwork generate_network(std::uint64_t seed,
                            const std::vector<LayerSpec>& specs,
                            double default_beta,
                            const GeneratorOptions& options = {});

std::array<double, kLayerCount> layer_total_hours(const EgoNetwork& net);
std::array<std::size_t, kLayerCount> layer_sizes(const EgoNetwork& net);

/// Canonical JSON form: {"seed": ..., "alters": [{id, layer, x_tilde, beta}]}.
/// Serialization round-trips exactly; parsing is strict (unknown or missing
/// fields are rejected, as is any invariant violation).
std::string serialize_network(const EgoNetwork& net);
EgoNetwork parse_network(const std::string& text);

EgoNetwork load_network(const std::filesystem::path& path);
void save_network(const EgoNetwork& net, const std::filesystem::path& path);

}  // namespace egotime
