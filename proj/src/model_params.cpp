#include "egotime/model_params.hpp"

#include <cmath>
#include <sstream>

#include "egotime/errors.hpp"

namespace egotime {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

std::string with_value(const char* what, double v) {
  std::ostringstream os;
  os << what << " (got " << v << ")";
  return os.str();
}

}  // namespace

double expected_socializing_time(double horizon_hours, double fraction) {
  require(std::isfinite(horizon_hours) && horizon_hours > 0.0,
          with_value("horizon_hours must be positive", horizon_hours));
  require(std::isfinite(fraction) && fraction >= 0.0 && fraction <= 1.0,
          with_value("fraction must lie in [0, 1]", fraction));
  return horizon_hours * fraction;
}

double beta_from_presence_scores(double sp_human, double sp_avatar) {
  require(std::isfinite(sp_avatar) && sp_avatar > 0.0,
          with_value("sp_avatar must be positive", sp_avatar));
  require(std::isfinite(sp_human) && sp_human >= sp_avatar,
          with_value("sp_human must be >= sp_avatar", sp_human));
  return sp_human / sp_avatar;
}

double gamma_from_cues(double compression_c, double delta) {
  require(std::isfinite(compression_c) && compression_c > 0.0 &&
              compression_c <= 1.0,
          with_value("compression_c must lie in (0, 1]", compression_c));
  require(std::isfinite(delta) && delta > 0.0,
          with_value("delta must be positive", delta));
  return compression_c * delta;
}

double debrief_time(double avatar_hours, double gamma) {
  require(std::isfinite(avatar_hours) && avatar_hours >= 0.0,
          with_value("avatar_hours must be nonnegative", avatar_hours));
  require(std::isfinite(gamma) && gamma >= 0.0,
          with_value("gamma must be nonnegative", gamma));
  return gamma * avatar_hours;
}

double zmax_from_attention(double daily_minutes, double days) {
  require(std::isfinite(daily_minutes) && daily_minutes >= 0.0,
          with_value("daily_minutes must be nonnegative", daily_minutes));
  require(std::isfinite(days) && days >= 0.0,
          with_value("days must be nonnegative", days));
  return daily_minutes * days / 60.0;
}

ModelParams::ModelParams(const Config& config) {
  horizon_hours_ = config.horizon_hours;
  require(std::isfinite(horizon_hours_) && horizon_hours_ > 0.0,
          with_value("horizon_hours must be positive", horizon_hours_));

  x_tilde_total_expected_ = config.x_tilde_total_expected > 0.0
                                ? config.x_tilde_total_expected
                                : expected_socializing_time(
                                      horizon_hours_,
                                      kDefaultSocializingFraction);
  require(std::isfinite(x_tilde_total_expected_) &&
              x_tilde_total_expected_ >= 0.0,
          with_value("x_tilde_total_expected must be nonnegative",
                     x_tilde_total_expected_));

  compression_c_ = config.compression_c;
  anthropomorphism_delta_ = config.anthropomorphism_delta;
  if (config.gamma_override.has_value()) {
    gamma_ = *config.gamma_override;
    gamma_overridden_ = true;
    require(std::isfinite(gamma_) && gamma_ >= 0.0,
            with_value("gamma override must be nonnegative", gamma_));
  } else {
    // Derived on every construction, never cached from a previous value.
    gamma_ = gamma_from_cues(compression_c_, anthropomorphism_delta_);
    gamma_overridden_ = false;
  }

  debrief_cap_zmax_ = config.debrief_cap_zmax >= 0.0 ? config.debrief_cap_zmax
                                                     : default_debrief_cap();
  require(std::isfinite(debrief_cap_zmax_),
          "debrief_cap_zmax must be finite");
  debrief_budget_z_ = config.debrief_budget_z >= 0.0 ? config.debrief_budget_z
                                                     : debrief_cap_zmax_;
  require(std::isfinite(debrief_budget_z_) &&
              debrief_budget_z_ <= debrief_cap_zmax_,
          with_value("debrief_budget_z must lie in [0, debrief_cap_zmax]",
                     debrief_budget_z_));

  avatar_capacity_y_ = config.avatar_capacity_y;
  require(std::isfinite(avatar_capacity_y_) && avatar_capacity_y_ >= 0.0,
          with_value("avatar_capacity_y must be nonnegative",
                     avatar_capacity_y_));
  require(avatar_capacity_y_ <= horizon_hours_,
          with_value("avatar_capacity_y must not exceed horizon_hours",
                     avatar_capacity_y_));

  default_beta_ = config.default_beta >= 0.0 ? config.default_beta
                                             : ::egotime::default_beta();
  require(std::isfinite(default_beta_) && default_beta_ >= 1.0,
          with_value("default_beta must be >= 1", default_beta_));
}

}  // namespace egotime
