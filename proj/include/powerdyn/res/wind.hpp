#pragma once

#include <vector>

#include "powerdyn/res/cp_table.hpp"

namespace powerdyn::res {

/// Wind plant of identical turbines, aggregated by scaling one turbine.
/// Speeds and torques refer to the low-speed shaft; pitch is in degrees.
struct WindParams {
  double radius = 63.0;          // m
  double rho = 1.225;            // kg/m^3
  double rated_power_w = 5e6;    // per turbine, electrical
  double n_turbines = 20.0;
  double j_rotor = 3.54e7;       // kg m^2
  double j_gen = 5.02e6;         // kg m^2, referred to the rotor side
  double k_shaft = 8.68e8;       // N m / rad
  double d_shaft = 6.2e6;        // N m s / rad
  double omega_rated = 1.267;    // rad/s
  double efficiency = 0.944;     // generator and converter
  double beta_min = 0.0;
  double beta_max = 30.0;
  double pitch_rate = 8.0;       // deg/s
  double t_pitch = 0.2;          // s
  double t_torque = 0.05;        // s
  double torque_kp = 5.66e7;     // N m per rad/s
  double torque_ki = 4.04e7;     // N m per rad
  double pitch_kp = 10.0;        // deg per p.u. power error, at zero pitch
  double pitch_ki = 5.0;         // deg per p.u. power error per s
  double schedule_knee = 6.3;    // deg; gains scale with 1 / (1 + beta / knee)
  std::vector<double> schedule_points{0.0, 5.0, 10.0, 15.0, 20.0};

  void validate() const;
  double swept_area() const;
};

/// Aerodynamic power of one turbine.
double aero_power(double v, double omega, double beta, const WindParams& p, const CpTable& cp);

/// Plant power available to the static model: the power law at the table
/// optimum, capped at the plant rating.
double wind_available_power(double v, const WindParams& p, const CpTable& cp);
/// Static plant output: min(setpoint, available), reached immediately.
double wind_static_power(double v, double p_setpoint_w, const WindParams& p, const CpTable& cp);

/// Triangular convex weights of beta over the schedule points.
std::vector<double> scheduling_weights(double beta, const std::vector<double>& points);
/// Controller gain factor blended over the schedule points.
double scheduled_gain(double beta, const WindParams& p);

struct WindDynamicState {
  double omega_r = 0.0;     // rotor speed
  double omega_g = 0.0;     // generator speed
  double twist = 0.0;       // shaft twist angle
  double beta = 0.0;        // pitch (actuator output)
  double pitch_int = 0.0;   // pitch PI integrator, deg
  double torque = 0.0;      // generator torque (actuator output)
  double torque_int = 0.0;  // speed PI integrator, N m
};

struct WindDerivatives {
  WindDynamicState d;
  double p_elec_w = 0.0;  // plant electrical output
  double beta_ref = 0.0;
  double omega_ref = 0.0;
};

/// Speed reference: optimal tip-speed ratio below rated, rated speed above.
double wind_speed_reference(double v, const WindParams& p, const CpTable& cp);
/// Largest plant output the closed loop can hold at wind speed v.
double wind_dynamic_available(double v, const WindParams& p, const CpTable& cp);
/// Operating point with all derivatives zero for a plant setpoint.
WindDynamicState wind_equilibrium(double v, double p_setpoint_w, const WindParams& p, const CpTable& cp);

WindDerivatives wind_dynamic_derivatives(const WindDynamicState& s, double v, double p_setpoint_w,
                                         const WindParams& p, const CpTable& cp);
/// Keeps pitch within its range after an integration step.
void wind_post_step(WindDynamicState& s, const WindParams& p);
/// Euler step of the closed loop; returns the plant electrical power at the
/// start of the step.
double wind_dynamic_step(WindDynamicState& s, double v, double p_setpoint_w, const WindParams& p,
                         const CpTable& cp, double h);

}  // namespace powerdyn::res
