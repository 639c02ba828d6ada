#include "chosim/power_control.hpp"

#include <algorithm>
#include <cmath>

namespace chosim {

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

BoostResult PowerController::request_boost() {
  if (boost_remaining_ > 0.0 || cooldown_remaining_ > 0.0) return BoostResult::Suppressed;
  const double boosted_mw = dbm_to_mw(current_power_) + params_.increment_mw;
  current_power_ = std::min(mw_to_dbm(boosted_mw), cap_);
  boost_remaining_ = params_.boost_ms;
  return BoostResult::Applied;
}

ReversionEvent PowerController::tick(double dt_ms) {
  if (boost_remaining_ > 0.0) {
    boost_remaining_ -= dt_ms;
    if (boost_remaining_ <= 0.0) {
      boost_remaining_ = 0.0;
      current_power_ = base_power_;
      cooldown_remaining_ = params_.cooldown_ms;
      return ReversionEvent::Reverted;
    }
  } else if (cooldown_remaining_ > 0.0) {
    cooldown_remaining_ = std::max(cooldown_remaining_ - dt_ms, 0.0);
  }
  return ReversionEvent::None;
}

}  // namespace chosim
