#pragma once

namespace powerdyn::machines {

/// Voltage behind impedance with a swing equation and a first-order field lag.
struct SimplifiedSGParams {
  double h = 3.5;       // s
  double tau_f = 8.0;   // s
  double x_s = 0.3;     // p.u.
  double r_s = 0.003;   // p.u.
  double s_rated = 100e6;  // VA

  void validate() const;
};

/// The internal EMF has magnitude e_s and sits on the real axis of a frame
/// at angle delta from the synchronous frame.
struct SimplifiedSGState {
  double omega = 1.0;
  double e_s = 1.0;
  double delta = 0.0;
};

struct SimplifiedSGDerivatives {
  double omega = 0.0;
  double e_s = 0.0;
  double delta = 0.0;
  double p_e = 0.0;
};

/// Derivatives with the terminal current (machine frame, generator convention)
/// given, e.g. from a network solution.
SimplifiedSGDerivatives simplified_sg_derivs_from_current(const SimplifiedSGState& s, double i_d,
                                                          double i_q, double p_mech, double v_f,
                                                          const SimplifiedSGParams& p,
                                                          double omega_base);

/// Derivatives with the current computed from the quasi-static circuit
/// I = (E - V) / (r_s + j x_s), V in the machine frame.
SimplifiedSGDerivatives simplified_sg_derivs(const SimplifiedSGState& s, double v_d, double v_q,
                                             double p_mech, double v_f,
                                             const SimplifiedSGParams& p, double omega_base);

}  // namespace powerdyn::machines
