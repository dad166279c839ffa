#include "powerdyn/machines/controls.hpp"

#include <algorithm>

namespace powerdyn::machines {

double avr_output(const AvrState& s, double v_ref, const AvrParams& p) {
  return std::clamp(s.integrator + p.kp * (v_ref - s.v_meas), p.vf_min, p.vf_max);
}

AvrDerivative avr_derivative(const AvrState& s, double v_terminal, double v_ref,
                             const AvrParams& p) {
  const double error = v_ref - s.v_meas;
  const double unclamped = s.integrator + p.kp * error;
  // Conditional integration: hold the integrator while the output is pinned
  // at a ceiling and the error pushes further into it.
  const bool wound_up = (unclamped >= p.vf_max && error > 0.0) ||
                        (unclamped <= p.vf_min && error < 0.0);
  return {(v_terminal - s.v_meas) / p.t_meas, wound_up ? 0.0 : p.ki * error};
}

AvrState avr_step(const AvrState& s, double v_terminal, double v_ref, const AvrParams& p,
                  double h) {
  const auto d = avr_derivative(s, v_terminal, v_ref, p);
  return {s.v_meas + h * d.v_meas, s.integrator + h * d.integrator};
}

AvrState avr_initialize(double v_terminal, double vf) { return {v_terminal, vf}; }

double governor_target(double p_ref, double omega, const GovernorParams& p) {
  return std::clamp(p_ref + (1.0 - omega) / p.droop, 0.0, p.pm_max);
}

double governor_derivative(double pm, double p_ref, double omega, const GovernorParams& p) {
  return (governor_target(p_ref, omega, p) - pm) / p.t_servo;
}

double governor_step(double pm, double p_ref, double omega, const GovernorParams& p, double h) {
  return std::clamp(pm + h * governor_derivative(pm, p_ref, omega, p), 0.0, p.pm_max);
}

}  // namespace powerdyn::machines
