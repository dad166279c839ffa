#pragma once

namespace powerdyn::machines {

/// First-order-measurement AVR with a PI regulator and output ceilings.
struct AvrParams {
  double t_meas = 0.02;  // s
  double kp = 20.0;
  double ki = 20.0;      // 1/s
  double vf_min = 0.0;
  double vf_max = 5.0;
};

struct AvrState {
  double v_meas = 1.0;
  double integrator = 0.0;
};

struct AvrDerivative {
  double v_meas = 0.0;
  double integrator = 0.0;
};

double avr_output(const AvrState& s, double v_ref, const AvrParams& p);
AvrDerivative avr_derivative(const AvrState& s, double v_terminal, double v_ref,
                             const AvrParams& p);
/// One Euler step of the AVR.
AvrState avr_step(const AvrState& s, double v_terminal, double v_ref, const AvrParams& p,
                  double h);
/// Steady state that holds `vf` at |V| = v_ref.
AvrState avr_initialize(double v_terminal, double vf);

/// Droop governor with a first-order servo. P_m is the only state.
struct GovernorParams {
  double droop = 0.05;   // p.u. speed per p.u. power
  double t_servo = 0.5;  // s
  double pm_max = 1.0;   // p.u. on machine base
};

double governor_target(double p_ref, double omega, const GovernorParams& p);
double governor_derivative(double pm, double p_ref, double omega, const GovernorParams& p);
double governor_step(double pm, double p_ref, double omega, const GovernorParams& p, double h);

}  // namespace powerdyn::machines
