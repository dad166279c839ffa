#pragma once

#include <array>

#include "powerdyn/machines/saturation.hpp"

namespace powerdyn::machines {

/// Fundamental (circuit) parameters of a machine with one field and one
/// damper winding on the d axis and two damper windings on the q axis.
/// Per unit on machine base with reciprocal L_ad rotor base; inductances are
/// numerically equal to reactances at nominal frequency.
struct Model22Params {
  double ra = 0.003;
  double ll = 0.15;
  double lad = 1.66;
  double laq = 1.61;
  double lfd = 0.165;
  double rfd = 0.0006;
  double l1d = 0.1713;
  double r1d = 0.0284;
  double l1q = 0.7252;
  double r1q = 0.00619;
  double l2q = 0.125;
  double r2q = 0.02368;
  double h = 3.5;  // s

  void validate() const;
  double ld() const { return ll + lad; }
  double lq() const { return ll + laq; }
};

/// Rotor flux linkages: field, d damper, two q dampers.
struct RotorFluxes {
  double fd = 0.0;
  double d1 = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
};

/// Algebraic solution of the flux-current relation for given rotor fluxes,
/// stator currents and saturation factor k (L_ad and L_aq divided by k).
struct Model22Magnetics {
  double psi_ad = 0.0;   // d-axis magnetizing flux
  double psi_aq = 0.0;
  double psi_d = 0.0;    // stator flux linkages
  double psi_q = 0.0;
  double psi_d_sub = 0.0;  // subtransient flux: psi_d = psi_d_sub - l_d_sub * i_d
  double psi_q_sub = 0.0;
  double l_d_sub = 0.0;
  double l_q_sub = 0.0;
  double i_fd = 0.0;
  double i_1d = 0.0;
  double i_1q = 0.0;
  double i_2q = 0.0;
};

Model22Magnetics model22_magnetics(const RotorFluxes& rotor, double i_d, double i_q, double k,
                                   const Model22Params& p);

/// Subtransient inductances for saturation factor k.
double model22_l_d_sub(const Model22Params& p, double k = 1.0);
double model22_l_q_sub(const Model22Params& p, double k = 1.0);

/// Rotor flux derivatives (1/s). `efd` is the exciter output in the
/// non-reciprocal base: efd = 1 gives 1 p.u. open-circuit voltage.
RotorFluxes model22_rotor_derivatives(const Model22Magnetics& m, double efd,
                                      const Model22Params& p, double omega_base);

/// Full state of the machine including stator fluxes.
struct Model22State {
  double psi_d = 0.0;
  double psi_q = 0.0;
  RotorFluxes rotor;
  double omega = 1.0;  // p.u. rotor speed
  double delta = 0.0;  // rad, d axis relative to the synchronous frame
};

struct Model22Derivatives {
  double psi_d = 0.0;
  double psi_q = 0.0;
  RotorFluxes rotor;
  double omega = 0.0;
  double delta = 0.0;
  // Algebraic by-products.
  double i_d = 0.0;
  double i_q = 0.0;
  double torque = 0.0;
};

/// Derivatives of the complete machine with stator transients (generator
/// convention: positive current leaves the machine):
///   v_d = dpsi_d/dt / w_b - r_a i_d - w psi_q
///   v_q = dpsi_q/dt / w_b - r_a i_q + w psi_d
/// Stator currents follow from psi = psi_sub - l_sub * i at saturation k.
Model22Derivatives model22_derivs(const Model22State& s, double v_d, double v_q, double efd,
                                  double p_mech, const Model22Params& p, double omega_base,
                                  double k = 1.0);

/// Electromagnetic torque psi_d i_q - psi_q i_d.
inline double model22_torque(const Model22Magnetics& m, double i_d, double i_q) {
  return m.psi_d * i_q - m.psi_q * i_d;
}

/// Steady-state operating point from terminal phasor data (machine base,
/// peak p.u., synchronous frame). Saturation is included when enabled.
struct Model22OperatingPoint {
  Model22State state;
  double efd = 0.0;
  double p_mech = 0.0;
  double i_d = 0.0;
  double i_q = 0.0;
  double v_d = 0.0;
  double v_q = 0.0;
  double k = 1.0;
};

Model22OperatingPoint model22_steady_state(double v_re, double v_im, double i_re, double i_im,
                                           const Model22Params& p, const SaturationParams& sat);

}  // namespace powerdyn::machines
