#include "powerdyn/res/pv.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "powerdyn/core/errors.hpp"

namespace powerdyn::res {

namespace {

constexpr double kElementaryCharge = 1.602176634e-19;
constexpr double kBoltzmann = 1.380649e-23;

template <typename F>
double bisect(F f, double lo, double hi, int iterations = 200) {
  double f_lo = f(lo);
  for (int k = 0; k < iterations; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void PvCellParams::validate() const {
  std::vector<std::string> problems;
  if (!(i_ph_stc > 0.0)) problems.push_back("PV i_ph_stc must be positive");
  if (!(i_s > 0.0)) problems.push_back("PV i_s must be positive");
  if (!(a_n >= 1.0 && a_n <= 2.0)) problems.push_back("PV ideality factor must lie in [1, 2]");
  if (!(r_h > 0.0)) problems.push_back("PV shunt resistance must be positive");
  if (!(t_cell > 0.0) || !(s_stc > 0.0)) problems.push_back("PV temperature and S_stc must be positive");
  if (!(n_series > 0.0) || !(n_parallel > 0.0)) problems.push_back("PV cell counts must be positive");
  if (!problems.empty()) throw ConfigError(problems);
}

double PvCellParams::thermal_voltage() const {
  return a_n * kBoltzmann * t_cell / kElementaryCharge;
}

double photon_current(double s, const PvCellParams& p) {
  return (p.i_ph_stc + p.alpha_t * (p.t_cell - p.t_stc)) * s / p.s_stc;
}

double pv_cell_current(double v, double s, const PvCellParams& p) {
  return photon_current(s, p) - p.i_s * std::expm1(v / p.thermal_voltage()) - v / p.r_h;
}

double pv_array_current(double v, double s, const PvCellParams& p) {
  return p.n_parallel * pv_cell_current(v / p.n_series, s, p);
}

double pv_open_circuit_voltage(double s, const PvCellParams& p) {
  if (s <= 0.0) return 0.0;
  // The cell current is strictly decreasing; bracket the root.
  double hi = p.thermal_voltage();
  while (pv_cell_current(hi, s, p) > 0.0) hi *= 2.0;
  const double v_cell = bisect([&](double v) { return pv_cell_current(v, s, p); }, 0.0, hi);
  return v_cell * p.n_series;
}

PvOperatingPoint pv_mpp(double s, const PvCellParams& p) {
  const double v_oc = pv_open_circuit_voltage(s, p);
  if (v_oc <= 0.0) return {};
  auto power = [&](double v) { return v * pv_array_current(v, s, p); };
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0;
  double b = v_oc;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = power(c);
  double fd = power(d);
  for (int k = 0; k < 200 && b - a > 1e-12 * v_oc; ++k) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = power(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = power(d);
    }
  }
  const double v = 0.5 * (a + b);
  const double i = pv_array_current(v, s, p);
  return {v, i, v * i};
}

double pv_voltage_for_power_left(double power, double s, const PvCellParams& p) {
  const auto mpp = pv_mpp(s, p);
  if (power >= mpp.p) return mpp.v;
  if (power <= 0.0) return 0.0;
  return bisect([&](double v) { return v * pv_array_current(v, s, p) - power; }, 0.0, mpp.v);
}

PvCellParams size_pv_array(PvCellParams cell, double p_mpp_w) {
  cell.n_parallel = 1.0;
  const double one_string = pv_mpp(cell.s_stc, cell).p;
  cell.n_parallel = p_mpp_w / one_string;
  return cell;
}

}  // namespace powerdyn::res
