#pragma once

namespace chosim {

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

struct PowerParams {
  double increment_mw = 2000.0;
  double cap_dbm = 38.5;  // K
  double boost_ms = 500.0;
  double cooldown_ms = 500.0;
};

enum class BoostResult { Applied, Suppressed };
enum class ReversionEvent { None, Reverted };

// Transmit-power controller for one gNB. A granted boost adds a fixed mW
// increment (clamped at the cap), lasts boost_ms, then reverts to the base
// power and opens a cooldown window. Requests during an active boost or
// cooldown are suppressed, so boosts never stack.
class PowerController {
 public:
  PowerController(double base_power_dbm, const PowerParams& p)
      : params_(p),
        base_power_(base_power_dbm),
        current_power_(base_power_dbm),
        // A base power above K (training draws go up to 40 dBm) raises the
        // effective cap; the boost then clamps at the base, never below it.
        cap_(p.cap_dbm > base_power_dbm ? p.cap_dbm : base_power_dbm) {}

  BoostResult request_boost();

  // Advances timers by dt; reverts the power when the boost lease runs out.
  ReversionEvent tick(double dt_ms);

  double current_power() const { return current_power_; }
  double base_power() const { return base_power_; }
  bool boost_active() const { return boost_remaining_ > 0.0; }
  bool cooldown_active() const { return cooldown_remaining_ > 0.0; }

 private:
  PowerParams params_;
  double base_power_;
  double current_power_;
  double cap_;
  double boost_remaining_ = 0.0;
  double cooldown_remaining_ = 0.0;
};

}  // namespace chosim
