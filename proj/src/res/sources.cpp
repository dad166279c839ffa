#include "powerdyn/res/sources.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "powerdyn/core/errors.hpp"

namespace powerdyn::res {

ResKind parse_res_kind(const std::string& tag) {
  if (tag == "ideal_dc") return ResKind::IdealDc;
  if (tag == "static_pv") return ResKind::StaticPv;
  if (tag == "dynamic_pv") return ResKind::DynamicPv;
  if (tag == "static_wind") return ResKind::StaticWind;
  if (tag == "dynamic_wind") return ResKind::DynamicWind;
  throw ConfigError("unknown RES model '" + tag +
                    "' (expected ideal_dc, static_pv, dynamic_pv, static_wind or dynamic_wind)");
}

std::string to_string(ResKind kind) {
  switch (kind) {
    case ResKind::IdealDc: return "ideal_dc";
    case ResKind::StaticPv: return "static_pv";
    case ResKind::DynamicPv: return "dynamic_pv";
    case ResKind::StaticWind: return "static_wind";
    case ResKind::DynamicWind: return "dynamic_wind";
  }
  return "?";
}

void ResConfig::validate() const {
  if (!(s_base_w > 0.0)) throw ConfigError("RES rating must be positive");
  if (kind == ResKind::StaticPv || kind == ResKind::DynamicPv) {
    pv.validate();
    if (!(irradiance >= 0.0)) throw ConfigError("irradiance must be non-negative");
    if (!(v_dc_nominal > 0.0)) throw ConfigError("DC-link nominal voltage must be positive");
  }
  if (kind == ResKind::DynamicPv) {
    boost.validate();
    if (!(po_period > 0.0)) throw ConfigError("P&O period must be positive");
  }
  if (kind == ResKind::StaticWind || kind == ResKind::DynamicWind) {
    wind.validate();
    if (!cp) throw ConfigError("wind model needs a cP table");
    if (!(wind_speed >= 0.0)) throw ConfigError("wind speed must be non-negative");
  }
}

ResSource::ResSource(ResConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  if (cfg_.kind == ResKind::StaticPv || cfg_.kind == ResKind::DynamicPv) {
    pv_mpp_pu_ = pv_mpp(cfg_.irradiance, cfg_.pv).p / cfg_.s_base_w;
  }
  boost_ = cfg_.boost;
}

std::vector<std::string> ResSource::slot_names() const {
  if (cfg_.kind != ResKind::DynamicWind) return {};
  return {"wt_omega_r", "wt_omega_g", "wt_twist", "wt_beta", "wt_pitch_int", "wt_torque", "wt_torque_int"};
}

double ResSource::available() const {
  switch (cfg_.kind) {
    case ResKind::IdealDc: return std::numeric_limits<double>::infinity();
    case ResKind::StaticPv:
    case ResKind::DynamicPv: return pv_mpp_pu_;
    case ResKind::StaticWind: return wind_available_power(cfg_.wind_speed, cfg_.wind, *cfg_.cp) / cfg_.s_base_w;
    case ResKind::DynamicWind: return wind_dynamic_available(cfg_.wind_speed, cfg_.wind, *cfg_.cp) / cfg_.s_base_w;
  }
  return 0.0;
}

double ResSource::pv_voltage(double v_dc) const {
  return boost_interface(boost_.duty, v_dc * cfg_.v_dc_nominal);
}

double ResSource::pv_power_pu(double v_dc) const {
  const double v = pv_voltage(v_dc);
  return v * pv_array_current(v, cfg_.irradiance, cfg_.pv) / cfg_.s_base_w;
}

std::vector<double> ResSource::initial_state(double p_demand, double v_dc, double t_start) {
  boost_ = cfg_.boost;
  next_sample_ = t_start + cfg_.po_period;
  if (cfg_.kind == ResKind::DynamicPv) {
    // Start on the left (current-source) branch of the P-V curve at the
    // voltage delivering the demand.
    const double target = cfg_.tracking == TrackingMode::Mpp ? pv_mpp_pu_ : std::max(p_demand, 0.0);
    const double v_pv = pv_voltage_for_power_left(target * cfg_.s_base_w, cfg_.irradiance, cfg_.pv);
    boost_.duty = std::clamp(1.0 - v_pv / (v_dc * cfg_.v_dc_nominal), 0.0, boost_.d_max);
  }
  if (cfg_.kind == ResKind::DynamicWind) {
    const auto s = wind_equilibrium(cfg_.wind_speed, p_demand * cfg_.s_base_w, cfg_.wind, *cfg_.cp);
    return {s.omega_r, s.omega_g, s.twist, s.beta, s.pitch_int, s.torque, s.torque_int};
  }
  return {};
}

namespace {

WindDynamicState unpack(const double* x) { return {x[0], x[1], x[2], x[3], x[4], x[5], x[6]}; }

}  // namespace

double ResSource::power(const double* x, double p_demand, double v_dc) const {
  switch (cfg_.kind) {
    case ResKind::IdealDc: return p_demand;
    case ResKind::StaticPv: return std::clamp(p_demand, 0.0, pv_mpp_pu_);
    case ResKind::DynamicPv: return pv_power_pu(v_dc);
    case ResKind::StaticWind:
      return wind_static_power(cfg_.wind_speed, p_demand * cfg_.s_base_w, cfg_.wind, *cfg_.cp) / cfg_.s_base_w;
    case ResKind::DynamicWind: {
      const auto s = unpack(x);
      return cfg_.wind.n_turbines * cfg_.wind.efficiency * s.torque * s.omega_g / cfg_.s_base_w;
    }
  }
  return 0.0;
}

void ResSource::derivatives(const double* x, double p_demand, double* dx) const {
  if (cfg_.kind != ResKind::DynamicWind) return;
  const auto d = wind_dynamic_derivatives(unpack(x), cfg_.wind_speed, p_demand * cfg_.s_base_w,
                                          cfg_.wind, *cfg_.cp);
  const double out[7] = {d.d.omega_r, d.d.omega_g, d.d.twist, d.d.beta,
                         d.d.pitch_int, d.d.torque, d.d.torque_int};
  std::copy(out, out + 7, dx);
}

void ResSource::post_step(double* x, double p_demand, double v_dc, double t) {
  if (cfg_.kind == ResKind::DynamicWind) {
    auto s = unpack(x);
    wind_post_step(s, cfg_.wind);
    x[0] = s.omega_r;
    x[1] = s.omega_g;
    x[3] = s.beta;
    x[4] = s.pitch_int;
  }
  if (cfg_.kind == ResKind::DynamicPv) {
    const double tolerance = 1e-9;
    while (t + tolerance >= next_sample_) {
      const double p = pv_power_pu(v_dc);
      perturb_observe_step(boost_, tracking_feedback(cfg_.tracking, p, p_demand));
      next_sample_ += cfg_.po_period;
    }
  }
}

}  // namespace powerdyn::res
