#include "powerdyn/sim/devices.hpp"

#include <cmath>

#include "powerdyn/core/errors.hpp"

namespace powerdyn::sim {

using namespace powerdyn::machines;

void Device::set_setpoint(double /*p_mw*/, double /*q_mvar*/) {
  throw ConfigError("device '" + id_ + "' has no power setpoint");
}

namespace {

network::PowerFlowSpec machine_spec(const std::string& port, const MachineSetup& s, double s_base_mva) {
  return {port, s.bus_type, s.p_mw / s_base_mva, 0.0, s.v_set};
}

}  // namespace

// ---------------------------------------------------------------------------

Model22Device::Model22Device(std::string id, std::string port_id, MachineSetup setup,
                             Model22Params params, SaturationParams saturation)
    : Device(std::move(id), std::move(port_id)),
      setup_(setup),
      params_(params),
      sat_(saturation) {
  params_.validate();
  sat_.validate();
  l_avg_ = 0.5 * (model22_l_d_sub(params_) + model22_l_q_sub(params_));
}

std::pair<double, double> Model22Device::port_impedance(const Model22Params& p, double s_rated_mva,
                                                        double s_base_mva) {
  const double scale = s_base_mva / s_rated_mva;
  const double l_avg = 0.5 * (model22_l_d_sub(p) + model22_l_q_sub(p));
  return {p.ra * scale, l_avg * scale};
}

network::PowerFlowSpec Model22Device::power_flow_spec(double s_base_mva) const {
  return machine_spec(port_id_, setup_, s_base_mva);
}

RotorFluxes Model22Device::rotor(const StateVector& x) const {
  return {x[base_], x[base_ + 1], x[base_ + 2], x[base_ + 3]};
}

Complex Model22Device::initialize(Complex v_terminal, Complex i_injected, StateVector& x,
                                  const StepContext& ctx) {
  const double to_machine = ctx.s_base_mva / setup_.s_rated_mva;
  const Complex i_m = i_injected * to_machine;
  const auto op = model22_steady_state(v_terminal.real(), v_terminal.imag(), i_m.real(), i_m.imag(),
                                       params_, sat_);
  k_ = op.k;
  i_d_prev_ = i_d_prev2_ = op.i_d;
  i_q_prev_ = i_q_prev2_ = op.i_q;
  p_ref_ = op.p_mech;
  v_ref_ = std::abs(v_terminal);
  const auto avr = avr_initialize(v_ref_, op.efd);
  base_ = x.add(id_, "psi_fd", op.state.rotor.fd);
  x.add(id_, "psi_1d", op.state.rotor.d1);
  x.add(id_, "psi_1q", op.state.rotor.q1);
  x.add(id_, "psi_2q", op.state.rotor.q2);
  x.add(id_, "omega", 1.0);
  x.add(id_, "delta", op.state.delta);
  x.add(id_, "avr_v_meas", avr.v_meas);
  x.add(id_, "avr_int", avr.integrator);
  x.add(id_, "p_mech", op.p_mech);
  signals_.assign(signal_names().size(), 0.0);

  const auto m = model22_magnetics(op.state.rotor, op.i_d, op.i_q, k_, params_);
  const double psi_d_t = m.psi_d_sub - (m.l_d_sub - l_avg_) * op.i_d;
  const double psi_q_t = m.psi_q_sub - (m.l_q_sub - l_avg_) * op.i_q;
  return Complex(-psi_q_t, psi_d_t) * std::polar(1.0, op.state.delta);
}

void Model22Device::set_source(const StateVector& x, network::NetworkSolver& net, const StepContext& ctx) {
  if (tripped_) return;
  const auto r = rotor(x);
  const double omega = x[base_ + 4];
  const double delta = x[base_ + 5];
  const auto m = model22_magnetics(r, i_d_prev_, i_q_prev_, k_, params_);
  const double dl_d = m.l_d_sub - l_avg_;
  const double dl_q = m.l_q_sub - l_avg_;
  const double psi_d_t = m.psi_d_sub - dl_d * i_d_prev_;
  const double psi_q_t = m.psi_q_sub - dl_q * i_q_prev_;
  double e_d = -omega * psi_q_t;
  double e_q = omega * psi_d_t;
  if (ctx.mode == SimulationMode::Emt) {
    // Transformer voltages from the rotor flux rates (linear in the rotor
    // fluxes at fixed k) and the backward difference of the current.
    const AvrState avr{x[base_ + 6], x[base_ + 7]};
    const double efd = avr_output(avr, v_ref_, setup_.avr);
    const auto rate = model22_rotor_derivatives(m, efd, params_, ctx.omega_base);
    const auto rate_sub = model22_magnetics(rate, 0.0, 0.0, k_, params_);
    const double dpsi_d = rate_sub.psi_d_sub - dl_d * (i_d_prev_ - i_d_prev2_) / ctx.h;
    const double dpsi_q = rate_sub.psi_q_sub - dl_q * (i_q_prev_ - i_q_prev2_) / ctx.h;
    e_d = dpsi_d / ctx.omega_base - omega * psi_q_t;
    e_q = dpsi_q / ctx.omega_base + omega * psi_d_t;
  }
  net.set_port_source(port_, e_d, e_q, delta);
}

void Model22Device::derivatives(const StateVector& x, std::span<double> dx,
                                const network::NetworkSolver& net, const StepContext& ctx) {
  if (tripped_) {
    std::fill(signals_.begin(), signals_.end(), 0.0);
    signals_[0] = x[base_ + 4];
    return;
  }
  const double omega = x[base_ + 4];
  const double delta = x[base_ + 5];
  const auto meas = net.measure_port(port_, delta);
  const double to_machine = ctx.s_base_mva / setup_.s_rated_mva;
  const double i_d = meas.i_d * to_machine;
  const double i_q = meas.i_q * to_machine;
  i_d_prev2_ = i_d_prev_;
  i_q_prev2_ = i_q_prev_;
  i_d_prev_ = i_d;
  i_q_prev_ = i_q;

  const auto m = model22_magnetics(rotor(x), i_d, i_q, k_, params_);
  const AvrState avr{x[base_ + 6], x[base_ + 7]};
  const double efd = avr_output(avr, v_ref_, setup_.avr);
  const auto rate = model22_rotor_derivatives(m, efd, params_, ctx.omega_base);
  const double torque = model22_torque(m, i_d, i_q);
  const double pm = x[base_ + 8];
  const double v_t = std::hypot(meas.v_d, meas.v_q);
  const auto avr_rate = avr_derivative(avr, v_t, v_ref_, setup_.avr);

  dx[base_] = rate.fd;
  dx[base_ + 1] = rate.d1;
  dx[base_ + 2] = rate.q1;
  dx[base_ + 3] = rate.q2;
  dx[base_ + 4] = (pm - torque) / (2.0 * params_.h);
  dx[base_ + 5] = ctx.omega_base * (omega - 1.0);
  dx[base_ + 6] = avr_rate.v_meas;
  dx[base_ + 7] = avr_rate.integrator;
  dx[base_ + 8] = governor_derivative(pm, p_ref_, omega, setup_.governor);

  const double p = meas.v_d * meas.i_d + meas.v_q * meas.i_q;
  const double q = meas.v_q * meas.i_d - meas.v_d * meas.i_q;
  signals_ = {omega, p * ctx.s_base_mva, q * ctx.s_base_mva, v_t, delta, efd, pm, torque};
}

void Model22Device::post_step(StateVector& x, const StepContext& /*ctx*/) {
  if (tripped_) return;
  x[base_ + 8] = std::clamp(x[base_ + 8], 0.0, setup_.governor.pm_max);
  if (sat_.enabled()) {
    const auto m = model22_magnetics(rotor(x), i_d_prev_, i_q_prev_, k_, params_);
    k_ = sat_.factor_from_saturated(std::hypot(m.psi_ad, m.psi_aq));
  }
}

std::vector<std::string> Model22Device::signal_names() const {
  return {"omega_pu", "p_mw", "q_mvar", "v_pu", "delta_rad", "efd_pu", "pm_pu", "te_pu"};
}

// ---------------------------------------------------------------------------

SimplifiedSGDevice::SimplifiedSGDevice(std::string id, std::string port_id, MachineSetup setup,
                                       SimplifiedSGParams params)
    : Device(std::move(id), std::move(port_id)), setup_(setup), params_(params) {
  params_.validate();
}

network::PowerFlowSpec SimplifiedSGDevice::power_flow_spec(double s_base_mva) const {
  return machine_spec(port_id_, setup_, s_base_mva);
}

Complex SimplifiedSGDevice::initialize(Complex v_terminal, Complex i_injected, StateVector& x,
                                       const StepContext& ctx) {
  const Complex i_m = i_injected * (ctx.s_base_mva / setup_.s_rated_mva);
  const Complex e = v_terminal + Complex(params_.r_s, params_.x_s) * i_m;
  const double pm = std::real(e * std::conj(i_m));
  p_ref_ = pm;
  v_ref_ = std::abs(v_terminal);
  const auto avr = avr_initialize(v_ref_, std::abs(e));
  base_ = x.add(id_, "omega", 1.0);
  x.add(id_, "e_s", std::abs(e));
  x.add(id_, "delta", std::arg(e));
  x.add(id_, "avr_v_meas", avr.v_meas);
  x.add(id_, "avr_int", avr.integrator);
  x.add(id_, "p_mech", pm);
  signals_.assign(signal_names().size(), 0.0);
  return e;
}

void SimplifiedSGDevice::set_source(const StateVector& x, network::NetworkSolver& net,
                                    const StepContext& /*ctx*/) {
  if (tripped_) return;
  net.set_port_source(port_, x[base_ + 1], 0.0, x[base_ + 2]);
}

void SimplifiedSGDevice::derivatives(const StateVector& x, std::span<double> dx,
                                     const network::NetworkSolver& net, const StepContext& ctx) {
  if (tripped_) {
    std::fill(signals_.begin(), signals_.end(), 0.0);
    signals_[0] = x[base_];
    return;
  }
  const SimplifiedSGState s{x[base_], x[base_ + 1], x[base_ + 2]};
  const auto meas = net.measure_port(port_, s.delta);
  const double to_machine = ctx.s_base_mva / setup_.s_rated_mva;
  const AvrState avr{x[base_ + 3], x[base_ + 4]};
  const double v_f = avr_output(avr, v_ref_, setup_.avr);
  const double pm = x[base_ + 5];
  const auto d = simplified_sg_derivs_from_current(s, meas.i_d * to_machine, meas.i_q * to_machine, pm,
                                                   v_f, params_, ctx.omega_base);
  const double v_t = std::hypot(meas.v_d, meas.v_q);
  const auto avr_rate = avr_derivative(avr, v_t, v_ref_, setup_.avr);
  dx[base_] = d.omega;
  dx[base_ + 1] = d.e_s;
  dx[base_ + 2] = d.delta;
  dx[base_ + 3] = avr_rate.v_meas;
  dx[base_ + 4] = avr_rate.integrator;
  dx[base_ + 5] = governor_derivative(pm, p_ref_, s.omega, setup_.governor);
  const double p = meas.v_d * meas.i_d + meas.v_q * meas.i_q;
  const double q = meas.v_q * meas.i_d - meas.v_d * meas.i_q;
  signals_ = {s.omega, p * ctx.s_base_mva, q * ctx.s_base_mva, v_t, s.delta, v_f, pm, d.p_e};
}

std::vector<std::string> SimplifiedSGDevice::signal_names() const {
  return {"omega_pu", "p_mw", "q_mvar", "v_pu", "delta_rad", "efd_pu", "pm_pu", "te_pu"};
}

// ---------------------------------------------------------------------------

VscDevice::VscDevice(std::string id, std::string port_id, converter::VscParams params,
                     res::ResConfig source, double p_mw, double q_mvar)
    : Device(std::move(id), std::move(port_id)),
      params_(params),
      source_(std::move(source)),
      p_set_(p_mw / params.s_rated_mva),
      q_set_(q_mvar / params.s_rated_mva) {
  params_.validate();
}

network::PowerFlowSpec VscDevice::power_flow_spec(double s_base_mva) const {
  const double k = params_.s_rated_mva / s_base_mva;
  return {port_id_, network::BusType::PQ, p_set_ * k, q_set_ * k, 1.0};
}

void VscDevice::set_setpoint(double p_mw, double q_mvar) {
  p_set_ = p_mw / params_.s_rated_mva;
  q_set_ = q_mvar / params_.s_rated_mva;
}

converter::OuterState VscDevice::outer(const StateVector& x) const {
  return {x[slots_.p_meas], x[slots_.q_meas], x[slots_.v_meas], x[slots_.p_int], x[slots_.q_int]};
}

VscDevice::Operating VscDevice::operating(const StateVector& x, double v_q) const {
  const converter::PllState pll{x[slots_.pll_angle], x[slots_.pll_int]};
  const double f = converter::pll_derivatives(pll, v_q, params_).freq_hz;
  const double demand = std::max(p_set_ - converter::droop_correction(f, params_), 0.0);
  const double v_dc = slots_.v_dc ? x[*slots_.v_dc] : 1.0;
  const double p_grid = slots_.v_dc ? converter::dc_voltage_support(demand, v_dc, params_) : demand;
  const auto ref = converter::frt_limit(converter::outer_loop_refs(outer(x), p_grid, q_set_, params_),
                                        x[slots_.v_meas], params_);
  return {f, demand, p_grid, ref};
}

Complex VscDevice::initialize(Complex v_terminal, Complex i_injected, StateVector& x,
                              const StepContext& ctx) {
  scale_ = params_.s_rated_mva / ctx.s_base_mva;
  const Complex i_conv = i_injected / scale_;
  const Complex s = v_terminal * std::conj(i_conv);
  const double v = std::abs(v_terminal);
  const double theta = std::arg(v_terminal);
  const double i_d = s.real() / v;
  const double i_q = s.imag() / v;
  slots_.pll_angle = x.add(id_, "pll_angle", theta);
  slots_.pll_int = x.add(id_, "pll_int", 0.0);
  slots_.p_meas = x.add(id_, "p_meas", s.real());
  slots_.q_meas = x.add(id_, "q_meas", s.imag());
  slots_.v_meas = x.add(id_, "v_meas", v);
  slots_.p_int = x.add(id_, "p_int", i_d - s.real() / v);
  slots_.q_int = x.add(id_, "q_int", i_q - s.imag() / v);
  if (ctx.mode == SimulationMode::Emt) {
    slots_.id_int = x.add(id_, "id_int", params_.r_filter * i_d);
    slots_.iq_int = x.add(id_, "iq_int", params_.r_filter * i_q);
  }
  if (source_.has_dc_link()) slots_.v_dc = x.add(id_, "v_dc", 1.0);
  const auto res_init = source_.initial_state(s.real(), 1.0, ctx.t);
  const auto names = source_.slot_names();
  for (std::size_t k = 0; k < names.size(); ++k) {
    const auto idx = x.add(id_, names[k], res_init[k]);
    if (k == 0) slots_.res = idx;
  }
  last_v_d_ = v;
  last_v_q_ = 0.0;
  last_i_ = {i_d, i_q};
  signals_.assign(signal_names().size(), 0.0);
  if (ctx.mode == SimulationMode::Emt) {
    const Complex z(params_.r_filter / scale_, params_.x_filter / scale_);
    return v_terminal + z * i_injected;
  }
  return i_injected;
}

void VscDevice::set_source(const StateVector& x, network::NetworkSolver& net, const StepContext& ctx) {
  if (tripped_) return;
  const auto op = operating(x, last_v_q_);
  const double theta = x[slots_.pll_angle];
  if (ctx.mode == SimulationMode::Emt) {
    const converter::CurrentLoopState cl{x[*slots_.id_int], x[*slots_.iq_int]};
    const auto cmd = converter::current_loop_output(cl, op.ref, last_i_, last_v_d_, last_v_q_,
                                                    op.f_hz / params_.f_nom, params_);
    net.set_port_source(port_, cmd.v_d, cmd.v_q, theta);
  } else {
    net.set_port_source(port_, op.ref.i_d * scale_, -op.ref.i_q * scale_, theta);
  }
}

void VscDevice::derivatives(const StateVector& x, std::span<double> dx,
                            const network::NetworkSolver& net, const StepContext& ctx) {
  if (tripped_) {
    std::fill(signals_.begin(), signals_.end(), 0.0);
    return;
  }
  const double theta = x[slots_.pll_angle];
  const auto m = net.measure_port(port_, theta);
  const double i_d = m.i_d / scale_;
  const double i_q_park = m.i_q / scale_;
  const converter::CurrentRef meas{i_d, -i_q_park};
  const double p_inst = m.v_d * i_d + m.v_q * i_q_park;
  const double q_inst = m.v_q * i_d - m.v_d * i_q_park;
  const double v_inst = std::hypot(m.v_d, m.v_q);
  last_v_d_ = m.v_d;
  last_v_q_ = m.v_q;
  last_i_ = meas;

  const auto op = operating(x, m.v_q);
  const converter::PllState pll{x[slots_.pll_angle], x[slots_.pll_int]};
  const auto pll_rate = converter::pll_derivatives(pll, m.v_q, params_);
  dx[slots_.pll_angle] = pll_rate.d_angle;
  dx[slots_.pll_int] = pll_rate.d_integrator;
  const auto outer_rate =
      converter::outer_loop_derivatives(outer(x), op.p_grid, q_set_, p_inst, q_inst, v_inst, params_);
  dx[slots_.p_meas] = outer_rate.d_p_meas;
  dx[slots_.q_meas] = outer_rate.d_q_meas;
  dx[slots_.v_meas] = outer_rate.d_v_meas;
  dx[slots_.p_int] = outer_rate.d_p_int;
  dx[slots_.q_int] = outer_rate.d_q_int;
  if (slots_.id_int) {
    const auto cl = converter::current_loop_derivatives(op.ref, meas, params_);
    dx[*slots_.id_int] = cl.int_d;
    dx[*slots_.iq_int] = cl.int_q;
  }
  const double v_dc = slots_.v_dc ? x[*slots_.v_dc] : 1.0;
  const double* res_x = slots_.res ? &x.values()[*slots_.res] : nullptr;
  const double p_in = source_.power(res_x, op.demand, v_dc);
  if (slots_.v_dc) dx[*slots_.v_dc] = converter::dc_link_derivative(v_dc, p_in, p_inst, params_);
  if (slots_.res) source_.derivatives(res_x, op.demand, &dx[*slots_.res]);

  const double s = params_.s_rated_mva;
  signals_ = {p_inst * s, q_inst * s, v_inst, op.f_hz, v_dc, p_in * s, op.ref.i_d, op.ref.i_q, op.demand * s};
  (void)ctx;
}

void VscDevice::post_step(StateVector& x, const StepContext& ctx) {
  if (tripped_) return;
  x[slots_.pll_int] = std::clamp(x[slots_.pll_int], -params_.pll_limit, params_.pll_limit);
  const double v_dc = slots_.v_dc ? x[*slots_.v_dc] : 1.0;
  if (!(v_dc > 0.0)) throw NumericAbort("DC-link voltage of '" + id_ + "' collapsed");
  double* res_x = slots_.res ? &x.values()[*slots_.res] : nullptr;
  source_.post_step(res_x, signals_[8] / params_.s_rated_mva, v_dc, ctx.t);
}

std::vector<std::string> VscDevice::signal_names() const {
  return {"p_mw", "q_mvar", "v_pu", "f_hz", "v_dc_pu", "p_source_mw", "id_ref_pu", "iq_ref_pu", "p_demand_mw"};
}

}  // namespace powerdyn::sim
