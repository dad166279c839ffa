#pragma once

namespace powerdyn::res {

/// MPP climbs the power; DPP climbs -|P_pv - P_demand| to follow a demand.
enum class TrackingMode { Mpp, Dpp };

struct BoostState {
  double duty = 0.5;
  double delta_d = 0.002;
  double d_max = 0.95;
  double last_feedback = 0.0;
  int direction = 1;
  bool has_sample = false;

  void validate() const;
};

/// Tracker objective for the given mode.
double tracking_feedback(TrackingMode mode, double p_pv, double p_demand);

/// One perturb-and-observe decision: keep the perturbation direction while
/// the feedback improves, reverse it otherwise, then move the duty by
/// delta_d within [0, d_max]. Returns the new duty.
double perturb_observe_step(BoostState& s, double feedback);

/// PV-side voltage of a boost converter in continuous conduction.
double boost_interface(double duty, double v_dc);

}  // namespace powerdyn::res
