#include "powerdyn/res/wind.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "powerdyn/core/errors.hpp"

namespace powerdyn::res {

void WindParams::validate() const {
  std::vector<std::string> problems;
  for (auto [v, n] : {std::pair{radius, "radius"}, {rho, "rho"}, {rated_power_w, "rated_power_w"},
                      {n_turbines, "n_turbines"}, {j_rotor, "j_rotor"}, {j_gen, "j_gen"},
                      {k_shaft, "k_shaft"}, {omega_rated, "omega_rated"}, {efficiency, "efficiency"},
                      {pitch_rate, "pitch_rate"}, {t_pitch, "t_pitch"}, {t_torque, "t_torque"},
                      {schedule_knee, "schedule_knee"}}) {
    if (!(v > 0.0) || !std::isfinite(v)) problems.push_back(std::string("wind ") + n + " must be positive");
  }
  if (!(beta_max > beta_min)) problems.push_back("wind pitch range is empty");
  if (schedule_points.size() < 2 || !std::is_sorted(schedule_points.begin(), schedule_points.end()) ||
      std::adjacent_find(schedule_points.begin(), schedule_points.end()) != schedule_points.end()) {
    problems.push_back("wind schedule points must be at least two increasing values");
  }
  if (!problems.empty()) throw ConfigError(problems);
}

double WindParams::swept_area() const { return std::numbers::pi * radius * radius; }

double aero_power(double v, double omega, double beta, const WindParams& p, const CpTable& cp) {
  if (v <= 0.0) return 0.0;
  const double lambda = omega * p.radius / v;
  return 0.5 * cp(lambda, beta) * p.rho * p.swept_area() * v * v * v;
}

double wind_available_power(double v, const WindParams& p, const CpTable& cp) {
  if (v <= 0.0) return 0.0;
  const double one = 0.5 * cp.peak().cp * p.rho * p.swept_area() * v * v * v;
  return p.n_turbines * std::min(one, p.rated_power_w);
}

double wind_static_power(double v, double p_setpoint_w, const WindParams& p, const CpTable& cp) {
  return std::clamp(p_setpoint_w, 0.0, wind_available_power(v, p, cp));
}

std::vector<double> scheduling_weights(double beta, const std::vector<double>& points) {
  std::vector<double> w(points.size(), 0.0);
  if (beta <= points.front()) {
    w.front() = 1.0;
    return w;
  }
  if (beta >= points.back()) {
    w.back() = 1.0;
    return w;
  }
  const auto it = std::upper_bound(points.begin(), points.end(), beta);
  const auto k = static_cast<std::size_t>(it - points.begin()) - 1;
  const double t = (beta - points[k]) / (points[k + 1] - points[k]);
  w[k] = 1.0 - t;
  w[k + 1] = t;
  return w;
}

double scheduled_gain(double beta, const WindParams& p) {
  const auto w = scheduling_weights(beta, p.schedule_points);
  double g = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) g += w[k] / (1.0 + p.schedule_points[k] / p.schedule_knee);
  return g;
}

double wind_speed_reference(double v, const WindParams& p, const CpTable& cp) {
  return std::min(cp.peak().lambda * std::max(v, 0.0) / p.radius, p.omega_rated);
}

double wind_dynamic_available(double v, const WindParams& p, const CpTable& cp) {
  const double omega = wind_speed_reference(v, p, cp);
  const double one = p.efficiency * aero_power(v, omega, p.beta_min, p, cp);
  return p.n_turbines * std::min(one, p.rated_power_w);
}

namespace {

double turbine_setpoint(double p_setpoint_w, const WindParams& p) {
  return std::clamp(p_setpoint_w / p.n_turbines, 0.0, p.rated_power_w);
}

double torque_limit(const WindParams& p) {
  return 1.2 * p.rated_power_w / (p.efficiency * p.omega_rated);
}

}  // namespace

WindDynamicState wind_equilibrium(double v, double p_setpoint_w, const WindParams& p, const CpTable& cp) {
  WindDynamicState s;
  const double omega = wind_speed_reference(v, p, cp);
  const double target = std::min(turbine_setpoint(p_setpoint_w, p),
                                 wind_dynamic_available(v, p, cp) / p.n_turbines);
  double beta = p.beta_min;
  auto electrical = [&](double b) { return p.efficiency * aero_power(v, omega, b, p, cp); };
  if (electrical(p.beta_min) > target) {
    double lo = p.beta_min;
    double hi = p.beta_max;
    for (int k = 0; k < 100; ++k) {
      const double mid = 0.5 * (lo + hi);
      (electrical(mid) > target ? lo : hi) = mid;
    }
    beta = 0.5 * (lo + hi);
  }
  const double p_aero = aero_power(v, omega, beta, p, cp);
  s.omega_r = omega;
  s.omega_g = omega;
  s.beta = beta;
  s.pitch_int = beta;
  s.torque = omega > 0.0 ? p_aero / omega : 0.0;
  s.torque_int = s.torque;
  s.twist = s.torque / p.k_shaft;
  return s;
}

WindDerivatives wind_dynamic_derivatives(const WindDynamicState& s, double v, double p_setpoint_w,
                                         const WindParams& p, const CpTable& cp) {
  WindDerivatives out;
  const double omega_ref = wind_speed_reference(v, p, cp);
  out.omega_ref = omega_ref;
  const double p_aero = aero_power(v, s.omega_r, s.beta, p, cp);
  const double t_aero = s.omega_r > 1e-3 ? p_aero / s.omega_r : 0.0;
  const double shaft = p.k_shaft * s.twist + p.d_shaft * (s.omega_r - s.omega_g);
  out.d.omega_r = (t_aero - shaft) / p.j_rotor;
  out.d.omega_g = (shaft - s.torque) / p.j_gen;
  out.d.twist = s.omega_r - s.omega_g;

  // Generator torque holds the speed reference.
  const double t_max = torque_limit(p);
  const double speed_err = s.omega_g - omega_ref;
  const double t_ref_raw = p.torque_kp * speed_err + s.torque_int;
  const double t_ref = std::clamp(t_ref_raw, 0.0, t_max);
  const bool t_wound = (t_ref_raw >= t_max && speed_err > 0.0) || (t_ref_raw <= 0.0 && speed_err < 0.0);
  out.d.torque_int = t_wound ? 0.0 : p.torque_ki * speed_err;
  out.d.torque = (t_ref - s.torque) / p.t_torque;

  // Pitch sheds the aerodynamic surplus over the power setpoint.
  const double p_e = p.efficiency * s.torque * s.omega_g;
  const double err = (p_e - turbine_setpoint(p_setpoint_w, p)) / p.rated_power_w;
  const double gain = scheduled_gain(s.beta, p);
  const double beta_ref_raw = gain * p.pitch_kp * err + s.pitch_int;
  const double beta_ref = std::clamp(beta_ref_raw, p.beta_min, p.beta_max);
  const bool b_wound = (beta_ref_raw <= p.beta_min && err < 0.0) || (beta_ref_raw >= p.beta_max && err > 0.0);
  out.d.pitch_int = b_wound ? 0.0 : gain * p.pitch_ki * err;
  out.d.beta = std::clamp((beta_ref - s.beta) / p.t_pitch, -p.pitch_rate, p.pitch_rate);
  out.beta_ref = beta_ref;
  out.p_elec_w = p.n_turbines * p_e;
  return out;
}

void wind_post_step(WindDynamicState& s, const WindParams& p) {
  s.beta = std::clamp(s.beta, p.beta_min, p.beta_max);
  s.pitch_int = std::clamp(s.pitch_int, p.beta_min - 5.0, p.beta_max + 5.0);
  s.omega_r = std::max(s.omega_r, 0.0);
  s.omega_g = std::max(s.omega_g, 0.0);
}

double wind_dynamic_step(WindDynamicState& s, double v, double p_setpoint_w, const WindParams& p,
                         const CpTable& cp, double h) {
  const auto d = wind_dynamic_derivatives(s, v, p_setpoint_w, p, cp);
  s.omega_r += h * d.d.omega_r;
  s.omega_g += h * d.d.omega_g;
  s.twist += h * d.d.twist;
  s.beta += h * d.d.beta;
  s.pitch_int += h * d.d.pitch_int;
  s.torque += h * d.d.torque;
  s.torque_int += h * d.d.torque_int;
  wind_post_step(s, p);
  return d.p_elec_w;
}

}  // namespace powerdyn::res
