#include "powerdyn/converter/vsc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "powerdyn/core/errors.hpp"

namespace powerdyn::converter {

namespace {

double omega_base(const VscParams& p) { return 2.0 * std::numbers::pi * p.f_nom; }

}  // namespace

void VscParams::validate() const {
  std::vector<std::string> problems;
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) problems.push_back(std::string("converter ") + name + " must be positive");
  };
  auto finite = [&](double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0) problems.push_back(std::string("converter ") + name + " must be finite and non-negative");
  };
  positive(s_rated_mva, "s_rated_mva");
  positive(f_nom, "f_nom");
  positive(x_filter, "x_filter");
  positive(c_dc, "c_dc");
  if (!(i_max >= 1.0)) problems.push_back("converter i_max must be at least 1 p.u.");
  positive(frt_threshold, "frt_threshold");
  positive(t_meas, "t_meas");
  positive(t_current, "t_current");
  positive(chopper_on, "chopper_on");
  for (auto [v, n] : {std::pair{r_filter, "r_filter"}, {droop_gain, "droop_gain"},
                      {deadband_hz, "deadband_hz"}, {frt_gain, "frt_gain"}, {pll_kp, "pll_kp"},
                      {pll_ki, "pll_ki"}, {pll_limit, "pll_limit"}, {outer_kp, "outer_kp"},
                      {outer_ki, "outer_ki"}, {k_dc, "k_dc"}, {chopper_gain, "chopper_gain"}}) {
    finite(v, n);
  }
  if (!problems.empty()) throw ConfigError(problems);
}

PllDerivatives pll_derivatives(const PllState& s, double v_q, const VscParams& p) {
  double d_int = p.pll_ki * v_q;
  const bool high = s.integrator >= p.pll_limit && d_int > 0.0;
  const bool low = s.integrator <= -p.pll_limit && d_int < 0.0;
  if (high || low) d_int = 0.0;
  const double dev = std::clamp(s.integrator + p.pll_kp * v_q, -p.pll_limit, p.pll_limit);
  return {omega_base(p) * dev, d_int, p.f_nom * (1.0 + dev)};
}

double pll_step(PllState& s, double v_q, const VscParams& p, double h) {
  const auto d = pll_derivatives(s, v_q, p);
  s.angle += h * d.d_angle;
  s.integrator = std::clamp(s.integrator + h * d.d_integrator, -p.pll_limit, p.pll_limit);
  return d.freq_hz;
}

double droop_correction(double f_meas_hz, const VscParams& p) {
  const double df = f_meas_hz - p.f_nom;
  if (std::abs(df) <= p.deadband_hz) return 0.0;
  const double excess = df - std::copysign(p.deadband_hz, df);
  return p.droop_gain * excess / p.f_nom;
}

CurrentRef outer_loop_refs(const OuterState& s, double p_ref, double q_ref, const VscParams& p) {
  const double v = std::max(s.v_meas, 0.2);
  return {p_ref / v + p.outer_kp * (p_ref - s.p_meas) + s.p_int,
          q_ref / v + p.outer_kp * (q_ref - s.q_meas) + s.q_int};
}

OuterDerivatives outer_loop_derivatives(const OuterState& s, double p_ref, double q_ref,
                                        double p_inst, double q_inst, double v_inst,
                                        const VscParams& p) {
  OuterDerivatives d;
  d.d_p_meas = (p_inst - s.p_meas) / p.t_meas;
  d.d_q_meas = (q_inst - s.q_meas) / p.t_meas;
  d.d_v_meas = (v_inst - s.v_meas) / p.t_meas;
  if (s.v_meas >= p.frt_threshold) {
    d.d_p_int = p.outer_ki * (p_ref - s.p_meas);
    d.d_q_int = p.outer_ki * (q_ref - s.q_meas);
  }
  return d;
}

CurrentRef outer_loop_step(OuterState& s, double p_ref, double q_ref, double p_inst,
                           double q_inst, double v_inst, const VscParams& p, double h) {
  const CurrentRef ref = frt_limit(outer_loop_refs(s, p_ref, q_ref, p), s.v_meas, p);
  const auto d = outer_loop_derivatives(s, p_ref, q_ref, p_inst, q_inst, v_inst, p);
  s.p_meas += h * d.d_p_meas;
  s.q_meas += h * d.d_q_meas;
  s.v_meas += h * d.d_v_meas;
  s.p_int += h * d.d_p_int;
  s.q_int += h * d.d_q_int;
  return ref;
}

CurrentRef frt_limit(CurrentRef ref, double v_mag, const VscParams& p) {
  if (v_mag < p.frt_threshold) {
    const double i_q = std::min(p.frt_gain * (p.frt_threshold - v_mag) * p.i_max, p.i_max);
    const double room = std::sqrt(std::max(p.i_max * p.i_max - i_q * i_q, 0.0));
    return {std::clamp(ref.i_d, -room, room), i_q};
  }
  const double mag = std::hypot(ref.i_d, ref.i_q);
  if (mag > p.i_max) {
    const double k = p.i_max / mag;
    return {ref.i_d * k, ref.i_q * k};
  }
  return ref;
}

double current_loop_kp(const VscParams& p) { return p.x_filter / (omega_base(p) * p.t_current); }
double current_loop_ki(const VscParams& p) { return p.r_filter / p.t_current; }

VoltageCommand current_loop_output(const CurrentLoopState& s, CurrentRef ref, CurrentRef meas,
                                   double v_d, double v_q, double omega_pu, const VscParams& p) {
  const double kp = current_loop_kp(p);
  const double wl = omega_pu * p.x_filter;
  // In Park components the q current is -i_q; the loop is written in the
  // control convention, which flips the sign of the q-axis correction.
  const double u_d = kp * (ref.i_d - meas.i_d) + s.int_d;
  const double u_q = kp * (ref.i_q - meas.i_q) + s.int_q;
  return {v_d + wl * meas.i_q + u_d, v_q + wl * meas.i_d - u_q};
}

CurrentLoopState current_loop_derivatives(CurrentRef ref, CurrentRef meas, const VscParams& p) {
  const double ki = current_loop_ki(p);
  return {ki * (ref.i_d - meas.i_d), ki * (ref.i_q - meas.i_q)};
}

VoltageCommand current_loop_step(CurrentLoopState& s, CurrentRef ref, CurrentRef meas,
                                 double v_d, double v_q, double omega_pu, const VscParams& p,
                                 double h) {
  const auto out = current_loop_output(s, ref, meas, v_d, v_q, omega_pu, p);
  const auto d = current_loop_derivatives(ref, meas, p);
  s.int_d += h * d.int_d;
  s.int_q += h * d.int_q;
  return out;
}

std::complex<double> phasor_injection(CurrentRef ref, double pll_angle) {
  return std::complex<double>(ref.i_d, -ref.i_q) * std::polar(1.0, pll_angle);
}

double dc_link_derivative(double v_dc, double p_in, double p_out, const VscParams& p) {
  const double chop = v_dc > p.chopper_on ? p.chopper_gain * (v_dc - p.chopper_on) : 0.0;
  return (p_in - p_out - chop) / (p.c_dc * v_dc);
}

double dc_link_step(double v_dc, double p_in, double p_out, const VscParams& p, double h) {
  if (!(v_dc > 0.0)) throw NumericAbort("DC-link voltage collapsed");
  const double next = v_dc + h * dc_link_derivative(v_dc, p_in, p_out, p);
  if (!(next > 0.0) || !std::isfinite(next)) throw NumericAbort("DC-link voltage collapsed");
  return next;
}

double dc_voltage_support(double p_demand, double v_dc, const VscParams& p) {
  return p_demand + p.k_dc * (v_dc - 1.0);
}

}  // namespace powerdyn::converter
