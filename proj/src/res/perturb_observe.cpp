#include "powerdyn/res/perturb_observe.hpp"

#include <algorithm>
#include <cmath>

#include "powerdyn/core/errors.hpp"

namespace powerdyn::res {

void BoostState::validate() const {
  if (!(d_max > 0.0 && d_max < 1.0)) throw ConfigError("boost d_max must lie in (0, 1)");
  if (!(duty >= 0.0 && duty <= d_max)) throw ConfigError("boost duty must lie in [0, d_max]");
  if (!(delta_d > 0.0)) throw ConfigError("P&O step must be positive");
}

double tracking_feedback(TrackingMode mode, double p_pv, double p_demand) {
  return mode == TrackingMode::Mpp ? p_pv : -std::abs(p_pv - p_demand);
}

double perturb_observe_step(BoostState& s, double feedback) {
  if (s.has_sample && !(feedback > s.last_feedback)) s.direction = -s.direction;
  s.last_feedback = feedback;
  s.has_sample = true;
  s.duty = std::clamp(s.duty + s.direction * s.delta_d, 0.0, s.d_max);
  return s.duty;
}

double boost_interface(double duty, double v_dc) { return (1.0 - duty) * v_dc; }

}  // namespace powerdyn::res
