#pragma once

namespace powerdyn::res {

/// Single-diode cell with a shunt resistance, scaled to an array.
struct PvCellParams {
  double i_ph_stc = 8.21;     // A
  double i_s = 9.9e-8;        // A, diode saturation current
  double a_n = 1.3;           // ideality factor
  double r_h = 7.68;          // ohm, shunt resistance
  double alpha_t = 0.0032;    // A/K, photon current temperature coefficient
  double t_cell = 298.15;     // K, held at the standard test condition
  double t_stc = 298.15;      // K
  double s_stc = 1000.0;      // W/m^2
  double n_series = 1600.0;   // cells in series
  double n_parallel = 1.0;    // parallel strings (real-valued for exact sizing)

  void validate() const;
  /// Diode thermal voltage A_n k_B T / q_e.
  double thermal_voltage() const;
};

/// Photon current at irradiance s (linear in s).
double photon_current(double s, const PvCellParams& p);
/// Cell current at cell voltage v.
double pv_cell_current(double v, double s, const PvCellParams& p);
/// Array current at array voltage v (series cells share the voltage,
/// parallel strings add current).
double pv_array_current(double v, double s, const PvCellParams& p);
/// Array open-circuit voltage by bisection.
double pv_open_circuit_voltage(double s, const PvCellParams& p);

struct PvOperatingPoint {
  double v = 0.0;
  double i = 0.0;
  double p = 0.0;
};
/// Maximum power point of the array (golden-section search on the concave
/// P-V curve).
PvOperatingPoint pv_mpp(double s, const PvCellParams& p);
/// Array voltage on the left (current-source) branch that delivers `power`;
/// returns the MPP voltage when `power` exceeds the maximum.
double pv_voltage_for_power_left(double power, double s, const PvCellParams& p);
/// Sets n_parallel so the array MPP at standard conditions equals p_mpp_w.
PvCellParams size_pv_array(PvCellParams cell, double p_mpp_w);

}  // namespace powerdyn::res
