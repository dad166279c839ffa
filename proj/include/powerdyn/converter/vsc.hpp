#pragma once

#include <complex>

namespace powerdyn::converter {

/// Grid-side converter data, p.u. on the converter rating.
///
/// Current convention: i_d is active current and a positive i_q is
/// capacitive (exports reactive power), so with the PLL aligned
/// P = v_d * i_d and Q = v_d * i_q. The Park q component of the phase
/// currents is therefore -i_q.
struct VscParams {
  double s_rated_mva = 100.0;
  double f_nom = 50.0;
  double r_filter = 0.003;
  double x_filter = 0.15;
  double c_dc = 0.05;         // s, energy constant of the DC link
  double i_max = 1.1;
  double droop_gain = 20.0;   // p.u. power per p.u. frequency
  double deadband_hz = 0.1;
  double frt_threshold = 0.9;
  double frt_gain = 2.0;      // reactive current per p.u. voltage dip, times I_max
  double pll_kp = 0.2828;     // about 10 Hz natural frequency, damping 0.707
  double pll_ki = 12.57;
  double pll_limit = 0.2;     // bound on the PLL frequency deviation, p.u.
  double outer_kp = 0.1;
  double outer_ki = 10.0;
  double t_meas = 0.005;
  double t_current = 0.005;   // closed-loop time constant of the current loop
  double k_dc = 5.0;          // DC voltage support, p.u. power per p.u. voltage
  double chopper_on = 1.15;
  double chopper_gain = 50.0;

  void validate() const;
};

struct CurrentRef {
  double i_d = 0.0;
  double i_q = 0.0;
};

// ---------------------------------------------------------------------------
// Phase-locked loop. The angle is relative to the nominal rotating frame.

struct PllState {
  double angle = 0.0;
  double integrator = 0.0;  // frequency deviation, p.u.
};

struct PllDerivatives {
  double d_angle = 0.0;
  double d_integrator = 0.0;
  double freq_hz = 0.0;  // measured frequency
};

/// Synchronous-frame PLL: a PI on the q-axis voltage sets the frequency
/// deviation that advances the angle.
PllDerivatives pll_derivatives(const PllState& s, double v_q, const VscParams& p);
/// One Euler step; returns the measured frequency at the start of the step.
double pll_step(PllState& s, double v_q, const VscParams& p, double h);

// ---------------------------------------------------------------------------
// Outer power loop.

struct OuterState {
  double p_meas = 0.0;
  double q_meas = 0.0;
  double v_meas = 1.0;
  double p_int = 0.0;
  double q_int = 0.0;
};

struct OuterDerivatives {
  double d_p_meas = 0.0;
  double d_q_meas = 0.0;
  double d_v_meas = 0.0;
  double d_p_int = 0.0;
  double d_q_int = 0.0;
};

/// Power correction subtracted from the active-power setpoint: zero inside
/// the deadband, proportional to the excess deviation outside it.
double droop_correction(double f_meas_hz, const VscParams& p);
/// Current references before limiting: voltage feedforward plus PI trim.
CurrentRef outer_loop_refs(const OuterState& s, double p_ref, double q_ref, const VscParams& p);
/// Filters follow the instantaneous P, Q and |V|; the integrators freeze
/// while the filtered voltage is below the FRT threshold.
OuterDerivatives outer_loop_derivatives(const OuterState& s, double p_ref, double q_ref,
                                        double p_inst, double q_inst, double v_inst,
                                        const VscParams& p);
/// Euler step of the outer loop followed by FRT limiting of the refs.
CurrentRef outer_loop_step(OuterState& s, double p_ref, double q_ref, double p_inst,
                           double q_inst, double v_inst, const VscParams& p, double h);

/// Below the FRT threshold the reactive current is set by the voltage dip
/// (i_q = min(k (V_thr - V) I_max, I_max)) and the active current gets what
/// remains; otherwise an oversized reference is scaled back to I_max.
CurrentRef frt_limit(CurrentRef ref, double v_mag, const VscParams& p);

// ---------------------------------------------------------------------------
// Inner current loop (EMT only).

struct CurrentLoopState {
  double int_d = 0.0;
  double int_q = 0.0;
};

struct VoltageCommand {
  double v_d = 0.0;  // Park components of the converter voltage
  double v_q = 0.0;
};

/// PI current control with cross-coupling decoupling and terminal voltage
/// feedforward. Gains place the closed loop at t_current.
VoltageCommand current_loop_output(const CurrentLoopState& s, CurrentRef ref, CurrentRef meas,
                                   double v_d, double v_q, double omega_pu, const VscParams& p);
CurrentLoopState current_loop_derivatives(CurrentRef ref, CurrentRef meas, const VscParams& p);
VoltageCommand current_loop_step(CurrentLoopState& s, CurrentRef ref, CurrentRef meas,
                                 double v_d, double v_q, double omega_pu, const VscParams& p,
                                 double h);
double current_loop_kp(const VscParams& p);
double current_loop_ki(const VscParams& p);

// ---------------------------------------------------------------------------

/// Phasor current injected into the network (peak p.u., phase a) for
/// references in the PLL frame.
std::complex<double> phasor_injection(CurrentRef ref, double pll_angle);

/// DC-link voltage rate with chopper dissipation above chopper_on.
double dc_link_derivative(double v_dc, double p_in, double p_out, const VscParams& p);
/// Euler step; throws NumericAbort when the link collapses.
double dc_link_step(double v_dc, double p_in, double p_out, const VscParams& p, double h);

/// Grid-side active-power reference that holds the DC link at 1 p.u.
double dc_voltage_support(double p_demand, double v_dc, const VscParams& p);

}  // namespace powerdyn::converter
