#pragma once

#include <optional>

namespace egotime {

// Calibration defaults, all over a one-year horizon.
inline constexpr double kDefaultHorizonHours = 8760.0;
inline constexpr double kDefaultSocializingFraction = 0.2;
inline constexpr double kDefaultCompressionRatio = 0.54;
inline constexpr double kDefaultAnthropomorphism = 7.0 / 6.0;
inline constexpr double kHumanPresenceScore = 4.182;   // mean score, human-human
inline constexpr double kAvatarPresenceScore = 3.236;  // mean score, human-agent
inline constexpr double kAttentionMinutesPerDay = 50.0;
inline constexpr double kDaysPerYear = 365.0;

/// Hours of direct socializing expected over a horizon, given the fraction
/// of time spent socializing. Rejects fractions outside [0, 1].
double expected_socializing_time(double horizon_hours, double fraction);

/// Conversion factor from avatar-mediated to direct socializing time:
/// an avatar must spend beta hours to match one hour of direct presence.
/// Requires sp_avatar > 0 and sp_human >= sp_avatar, so beta >= 1.
double beta_from_presence_scores(double sp_human, double sp_avatar);

/// Debriefing efficiency: fraction of avatar time the user spends catching
/// up on what the avatar did. Product of conversation compression and the
/// avatar's social-cue efficiency. Requires 0 < compression_c <= 1, delta > 0.
double gamma_from_cues(double compression_c, double delta);

/// Hours needed to debrief avatar_hours of delegated socializing.
double debrief_time(double avatar_hours, double gamma);

/// Attention-span bound on total debriefing time, in hours.
double zmax_from_attention(double daily_minutes, double days);

inline double default_beta() {
  return beta_from_presence_scores(kHumanPresenceScore, kAvatarPresenceScore);
}

inline double default_gamma() {
  return gamma_from_cues(kDefaultCompressionRatio, kDefaultAnthropomorphism);
}

inline double default_debrief_cap() {
  return zmax_from_attention(kAttentionMinutesPerDay, kDaysPerYear);
}

inline double default_expected_total() {
  return expected_socializing_time(kDefaultHorizonHours,
                                   kDefaultSocializingFraction);
}

/// Scalar model constants shared by the solver and the experiments.
/// Immutable once constructed; construction validates every invariant and
/// derives gamma = compression_c * anthropomorphism_delta unless an explicit
/// override is given (gamma = 0, perfectly compressed debriefing, is legal
/// only via override).
class ModelParams {
 public:
  struct Config {
    double horizon_hours = kDefaultHorizonHours;
    double x_tilde_total_expected = 0.0;  // 0 => derived from horizon * 0.2
    double avatar_capacity_y = kDefaultHorizonHours;
    double debrief_budget_z = -1.0;  // negative => defaults to debrief_cap_zmax
    double debrief_cap_zmax = -1.0;  // negative => attention-span default
    double compression_c = kDefaultCompressionRatio;
    double anthropomorphism_delta = kDefaultAnthropomorphism;
    std::optional<double> gamma_override;
    double default_beta = -1.0;  // negative => presence-score default
  };

  ModelParams() : ModelParams(Config{}) {}
  explicit ModelParams(const Config& config);

  double horizon_hours() const { return horizon_hours_; }
  double x_tilde_total_expected() const { return x_tilde_total_expected_; }
  double avatar_capacity_y() const { return avatar_capacity_y_; }
  double debrief_budget_z() const { return debrief_budget_z_; }
  double debrief_cap_zmax() const { return debrief_cap_zmax_; }
  double compression_c() const { return compression_c_; }
  double anthropomorphism_delta() const { return anthropomorphism_delta_; }
  double gamma() const { return gamma_; }
  bool gamma_overridden() const { return gamma_overridden_; }
  double default_beta() const { return default_beta_; }

 private:
  double horizon_hours_;
  double x_tilde_total_expected_;
  double avatar_capacity_y_;
  double debrief_budget_z_;
  double debrief_cap_zmax_;
  double compression_c_;
  double anthropomorphism_delta_;
  double gamma_;
  bool gamma_overridden_;
  double default_beta_;
};

}  // namespace egotime
