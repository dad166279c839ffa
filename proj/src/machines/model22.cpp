#include "powerdyn/machines/model22.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "powerdyn/core/errors.hpp"

namespace powerdyn::machines {

void Model22Params::validate() const {
  const bool reactances_ok = ll > 0.0 && lad > 0.0 && laq > 0.0 && lfd > 0.0 && l1d > 0.0 &&
                             l1q > 0.0 && l2q > 0.0;
  const bool resistances_ok = ra >= 0.0 && rfd >= 0.0 && r1d >= 0.0 && r1q >= 0.0 && r2q >= 0.0;
  if (!reactances_ok || !resistances_ok || !(h > 0.0)) {
    throw ConfigError("Model 2.2 requires positive reactances, nonnegative resistances, H > 0");
  }
}

namespace {

struct AxisSolution {
  double magnetizing;
  double sub_flux;
  double l_sub_magnetizing;
};

// Magnetizing branch l_m in parallel with two rotor leakage branches; the
// rotor fluxes act as sources behind their leakages.
AxisSolution solve_axis(double psi_r1, double l_r1, double psi_r2, double l_r2, double l_m,
                        double i_stator) {
  const double l_par = 1.0 / (1.0 / l_m + 1.0 / l_r1 + 1.0 / l_r2);
  const double sub = l_par * (psi_r1 / l_r1 + psi_r2 / l_r2);
  return {sub - l_par * i_stator, sub, l_par};
}

}  // namespace

double model22_l_d_sub(const Model22Params& p, double k) {
  return p.ll + 1.0 / (k / p.lad + 1.0 / p.lfd + 1.0 / p.l1d);
}

double model22_l_q_sub(const Model22Params& p, double k) {
  return p.ll + 1.0 / (k / p.laq + 1.0 / p.l1q + 1.0 / p.l2q);
}

Model22Magnetics model22_magnetics(const RotorFluxes& rotor, double i_d, double i_q, double k,
                                   const Model22Params& p) {
  const auto d = solve_axis(rotor.fd, p.lfd, rotor.d1, p.l1d, p.lad / k, i_d);
  const auto q = solve_axis(rotor.q1, p.l1q, rotor.q2, p.l2q, p.laq / k, i_q);
  Model22Magnetics m;
  m.psi_ad = d.magnetizing;
  m.psi_aq = q.magnetizing;
  m.psi_d = d.magnetizing - p.ll * i_d;
  m.psi_q = q.magnetizing - p.ll * i_q;
  m.psi_d_sub = d.sub_flux;
  m.psi_q_sub = q.sub_flux;
  m.l_d_sub = p.ll + d.l_sub_magnetizing;
  m.l_q_sub = p.ll + q.l_sub_magnetizing;
  m.i_fd = (rotor.fd - m.psi_ad) / p.lfd;
  m.i_1d = (rotor.d1 - m.psi_ad) / p.l1d;
  m.i_1q = (rotor.q1 - m.psi_aq) / p.l1q;
  m.i_2q = (rotor.q2 - m.psi_aq) / p.l2q;
  return m;
}

RotorFluxes model22_rotor_derivatives(const Model22Magnetics& m, double efd,
                                      const Model22Params& p, double omega_base) {
  return {omega_base * (p.rfd / p.lad * efd - p.rfd * m.i_fd),
          -omega_base * p.r1d * m.i_1d,
          -omega_base * p.r1q * m.i_1q,
          -omega_base * p.r2q * m.i_2q};
}

Model22Derivatives model22_derivs(const Model22State& s, double v_d, double v_q, double efd,
                                  double p_mech, const Model22Params& p, double omega_base,
                                  double k) {
  // Currents from psi = psi_sub - l_sub * i; psi_sub does not depend on i.
  const auto probe = model22_magnetics(s.rotor, 0.0, 0.0, k, p);
  const double i_d = (probe.psi_d_sub - s.psi_d) / probe.l_d_sub;
  const double i_q = (probe.psi_q_sub - s.psi_q) / probe.l_q_sub;
  const auto m = model22_magnetics(s.rotor, i_d, i_q, k, p);

  Model22Derivatives d;
  d.i_d = i_d;
  d.i_q = i_q;
  d.psi_d = omega_base * (v_d + p.ra * i_d + s.omega * s.psi_q);
  d.psi_q = omega_base * (v_q + p.ra * i_q - s.omega * s.psi_d);
  d.rotor = model22_rotor_derivatives(m, efd, p, omega_base);
  d.torque = s.psi_d * i_q - s.psi_q * i_d;
  d.omega = (p_mech - d.torque) / (2.0 * p.h);
  d.delta = omega_base * (s.omega - 1.0);
  return d;
}

Model22OperatingPoint model22_steady_state(double v_re, double v_im, double i_re, double i_im,
                                           const Model22Params& p, const SaturationParams& sat) {
  using cd = std::complex<double>;
  const cd v{v_re, v_im};
  const cd i{i_re, i_im};
  Model22OperatingPoint op;
  double k = 1.0;
  for (int it = 0; it < 100; ++it) {
    const double lq = p.ll + p.laq / k;
    const cd e = v + cd{p.ra, lq} * i;
    const double delta = std::arg(e) - std::numbers::pi / 2.0;
    const cd rot = std::polar(1.0, -delta);
    const cd vdq = v * rot;
    const cd idq = i * rot;
    op.v_d = vdq.real();
    op.v_q = vdq.imag();
    op.i_d = idq.real();
    op.i_q = idq.imag();
    op.state.delta = delta;
    op.state.psi_d = op.v_q + p.ra * op.i_q;
    op.state.psi_q = -(op.v_d + p.ra * op.i_d);
    const double psi_ad = op.state.psi_d + p.ll * op.i_d;
    const double psi_aq = op.state.psi_q + p.ll * op.i_q;
    const double k_new = sat.factor_from_saturated(std::hypot(psi_ad, psi_aq));
    const double i_fd = psi_ad * k / p.lad + op.i_d;
    op.state.rotor = {psi_ad + p.lfd * i_fd, psi_ad, psi_aq, psi_aq};
    op.efd = p.lad * i_fd;
    op.k = k;
    if (std::abs(k_new - k) < 1e-14) break;
    k = k_new;
  }
  op.state.omega = 1.0;
  op.p_mech = op.state.psi_d * op.i_q - op.state.psi_q * op.i_d;
  return op;
}

}  // namespace powerdyn::machines
