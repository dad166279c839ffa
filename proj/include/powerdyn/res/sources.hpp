#pragma once

#include <memory>
#include <string>
#include <vector>

#include "powerdyn/res/cp_table.hpp"
#include "powerdyn/res/perturb_observe.hpp"
#include "powerdyn/res/pv.hpp"
#include "powerdyn/res/wind.hpp"

namespace powerdyn::res {

enum class ResKind { IdealDc, StaticPv, DynamicPv, StaticWind, DynamicWind };

ResKind parse_res_kind(const std::string& tag);
std::string to_string(ResKind kind);

struct ResConfig {
  ResKind kind = ResKind::IdealDc;
  double s_base_w = 100e6;       // converter rating; powers below are p.u. of it
  // PV
  PvCellParams pv;               // already sized to the plant
  double irradiance = 1000.0;    // W/m^2
  double v_dc_nominal = 1200.0;  // V, DC-link voltage base
  double po_period = 0.01;       // s
  BoostState boost;
  TrackingMode tracking = TrackingMode::Dpp;
  // Wind
  WindParams wind;
  double wind_speed = 12.0;      // m/s
  std::shared_ptr<const CpTable> cp;

  void validate() const;
};

/// A renewable source feeding the converter DC link. Continuous states
/// live in the global state vector and are passed in as raw slices;
/// discrete tracker state stays inside the object.
class ResSource {
 public:
  explicit ResSource(ResConfig cfg);

  ResKind kind() const { return cfg_.kind; }
  const ResConfig& config() const { return cfg_; }
  /// False for the ideal DC source, which drives the grid side directly.
  bool has_dc_link() const { return cfg_.kind != ResKind::IdealDc; }

  std::vector<std::string> slot_names() const;
  /// Equilibrium for a demand (p.u.) at a DC voltage (p.u.); also resets
  /// the tracker.
  std::vector<double> initial_state(double p_demand, double v_dc, double t_start);

  /// Power delivered into the DC link, p.u.
  double power(const double* x, double p_demand, double v_dc) const;
  void derivatives(const double* x, double p_demand, double* dx) const;
  /// Clamps and sampled tracker updates after an accepted step ending at t.
  void post_step(double* x, double p_demand, double v_dc, double t);

  /// Largest steady power the source can deliver, p.u.
  double available() const;
  /// Duty cycle of the boost stage (dynamic PV only).
  double duty() const { return boost_.duty; }
  /// PV voltage in volts at the current duty (dynamic PV only).
  double pv_voltage(double v_dc) const;

 private:
  double pv_power_pu(double v_dc) const;

  ResConfig cfg_;
  double pv_mpp_pu_ = 0.0;
  BoostState boost_;
  double next_sample_ = 0.0;
};

}  // namespace powerdyn::res
