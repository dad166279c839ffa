#include "powerdyn/machines/simplified_sg.hpp"

#include "powerdyn/core/errors.hpp"

namespace powerdyn::machines {

void SimplifiedSGParams::validate() const {
  if (!(h > 0.0) || !(tau_f > 0.0) || !(x_s > 0.0) || r_s < 0.0 || !(s_rated > 0.0)) {
    throw ConfigError("simplified SG requires H > 0, tau_f > 0, x_s > 0, r_s >= 0");
  }
}

SimplifiedSGDerivatives simplified_sg_derivs_from_current(const SimplifiedSGState& s, double i_d,
                                                          double /*i_q*/, double p_mech,
                                                          double v_f,
                                                          const SimplifiedSGParams& p,
                                                          double omega_base) {
  // EMF lies on the frame's real axis, so only i_d carries air-gap power.
  const double p_e = s.e_s * i_d;
  return {(p_mech - p_e) / (2.0 * p.h), (v_f - s.e_s) / p.tau_f,
          omega_base * (s.omega - 1.0), p_e};
}

SimplifiedSGDerivatives simplified_sg_derivs(const SimplifiedSGState& s, double v_d, double v_q,
                                             double p_mech, double v_f,
                                             const SimplifiedSGParams& p, double omega_base) {
  // (e - v) / (r + jx)
  const double dr = s.e_s - v_d;
  const double di = -v_q;
  const double den = p.r_s * p.r_s + p.x_s * p.x_s;
  const double i_d = (dr * p.r_s + di * p.x_s) / den;
  const double i_q = (di * p.r_s - dr * p.x_s) / den;
  return simplified_sg_derivs_from_current(s, i_d, i_q, p_mech, v_f, p, omega_base);
}

}  // namespace powerdyn::machines
