#pragma once

// Closed-form references for a single travelling-wave mode and a small
// source-line-load network, shared by the unit and acceptance tests.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "powerdyn/network/bergeron.hpp"
#include "powerdyn/network/network_model.hpp"
#include "powerdyn/network/phasor_network.hpp"

namespace powerdyn::testing {

/// Far-end voltage history of one lossless or lossy mode driven by an ideal
/// source at the near end. A negative `r_load` leaves the far end open.
inline std::vector<double> far_end_response(network::BergeronMode& mode, double h, double steps,
                                            const std::function<double(double)>& source,
                                            double r_load) {
  std::vector<double> v_far;
  const double g = mode.conductance();
  const double g_load = r_load > 0.0 ? 1.0 / r_load : 0.0;
  for (int k = 0; k < static_cast<int>(steps); ++k) {
    const double t = k * h;
    const auto [ih_k, ih_m] = mode.history();
    const double v_k = source(t);
    const double v_m = -ih_m / (g + g_load);
    mode.record(v_k, v_m, ih_k, ih_m);
    v_far.push_back(v_m);
  }
  return v_far;
}

/// Open-end voltage gain of a line in sinusoidal steady state,
/// 1 / cosh(gamma l), from the distributed parameters.
inline std::complex<double> open_end_gain(double r, double x, double b) {
  const std::complex<double> gl = std::sqrt(std::complex<double>(r, x) * std::complex<double>(0.0, b));
  return 1.0 / std::cosh(gl);
}

/// Peak of the last full cycle of a sampled sinusoid.
inline double last_cycle_peak(const std::vector<double>& v, double h, double f) {
  const auto n = static_cast<std::size_t>(std::round(1.0 / (f * h)));
  double peak = 0.0;
  for (std::size_t k = v.size() - n; k < v.size(); ++k) peak = std::max(peak, std::abs(v[k]));
  return peak;
}

/// 220 kV per-km data of the benchmark overhead line.
inline network::SequenceParams ohl_220() { return {0.0653, 0.398, 2.85e-6, 0.2175, 1.18, 1.79e-6}; }

/// One voltage-behind-impedance source at bus `a`, one line a-b, one load at b.
inline network::NetworkModel source_line_load(double length_km, network::LineModel model,
                                              double load_mw = 100.0) {
  network::NetworkModel m(100.0, 50.0);
  m.buses = {{"a", 220.0}, {"b", 220.0}};
  m.lines.push_back({"L", "a", "b", length_km, ohl_220(), model});
  m.loads.push_back({"LD", "b", load_mw, 0.2 * load_mw, true});
  m.ports.push_back({"S", "a", network::PortKind::VoltageBehindImpedance, 0.001, 0.02, 1.0});
  return m;
}

}  // namespace powerdyn::testing
