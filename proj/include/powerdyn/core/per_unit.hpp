#pragma once

#include <numbers>

namespace powerdyn {

/// Base quantities of one voltage zone.
///
/// Voltages and currents are expressed on PEAK phase bases so that the
/// amplitude-invariant dq0 transform gives p = v_d i_d + v_q i_q in p.u.
/// Impedance base is unaffected by that choice: z_base = v_base^2 / s_base.
class PerUnitBase {
 public:
  /// s_base in VA, v_base line-line RMS in V, f_nom in Hz.
  PerUnitBase(double s_base, double v_base, double f_nom);

  double s_base() const { return s_base_; }
  double v_base() const { return v_base_; }
  double f_nom() const { return f_nom_; }
  double z_base() const { return v_base_ * v_base_ / s_base_; }
  /// RMS line current base.
  double i_base() const { return s_base_ / (std::numbers::sqrt3 * v_base_); }
  double omega_nom() const { return 2.0 * std::numbers::pi * f_nom_; }
  /// Peak phase-to-ground voltage corresponding to 1 p.u.
  double v_peak_base() const { return v_base_ * std::numbers::sqrt2 / std::numbers::sqrt3; }
  double i_peak_base() const { return i_base() * std::numbers::sqrt2; }

  double impedance_to_pu(double ohm) const { return ohm / z_base(); }
  double impedance_to_si(double pu) const { return pu * z_base(); }
  double power_to_pu(double watt) const { return watt / s_base_; }
  double power_to_si(double pu) const { return pu * s_base_; }
  double voltage_to_pu(double v_ll_rms) const { return v_ll_rms / v_base_; }
  double voltage_to_si(double pu) const { return pu * v_base_; }
  /// Inductance in H to p.u. reactance at nominal frequency.
  double inductance_to_reactance_pu(double henry) const { return henry * omega_nom() / z_base(); }
  /// Capacitance in F to p.u. susceptance at nominal frequency.
  double capacitance_to_susceptance_pu(double farad) const { return farad * omega_nom() * z_base(); }

 private:
  double s_base_;
  double v_base_;
  double f_nom_;
};

}  // namespace powerdyn
