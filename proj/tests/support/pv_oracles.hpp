#pragma once

// Brute-force references for the PV array and its maximum power tracker,
// shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "powerdyn/res/perturb_observe.hpp"
#include "powerdyn/res/pv.hpp"

namespace powerdyn::testing {

struct TrackingCase {
  double irradiance = 0.0;
  double v_dc = 0.0;
  double tracked_duty = 0.0;  // centre of the steady-state oscillation
  double best_duty = 0.0;     // brute-force optimum
  double delta_d = 0.0;
  bool within_step() const { return std::abs(tracked_duty - best_duty) <= delta_d; }
};

/// Runs MPP-mode perturb and observe against a static array until it
/// settles, then scans the duty range on a grid a hundred times finer than
/// the tracker's step.
inline TrackingCase track_against_scan(const res::PvCellParams& array, double irradiance, double v_dc,
                                       double delta_d = 0.002) {
  res::BoostState s;
  s.delta_d = delta_d;
  s.duty = 0.5;
  auto power = [&](double duty) {
    const double v = res::boost_interface(duty, v_dc);
    return v * res::pv_array_current(v, irradiance, array);
  };
  for (int k = 0; k < 5000; ++k) {
    res::perturb_observe_step(s, res::tracking_feedback(res::TrackingMode::Mpp, power(s.duty), 0.0));
  }
  double lo = s.duty;
  double hi = s.duty;
  for (int k = 0; k < 20; ++k) {
    res::perturb_observe_step(s, res::tracking_feedback(res::TrackingMode::Mpp, power(s.duty), 0.0));
    lo = std::min(lo, s.duty);
    hi = std::max(hi, s.duty);
  }
  TrackingCase c{irradiance, v_dc, 0.5 * (lo + hi), 0.0, delta_d};
  double best = -1.0;
  const double fine = delta_d / 100.0;
  for (double d = 0.0; d <= s.d_max; d += fine) {
    const double p = power(d);
    if (p > best) {
      best = p;
      c.best_duty = d;
    }
  }
  return c;
}

/// Irradiance and DC-link voltages for which the array's MPP lies inside
/// the boost converter's duty range.
inline std::vector<TrackingCase> random_tracking_cases(const res::PvCellParams& array, int count,
                                                       unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> irr(200.0, 1000.0);
  std::uniform_real_distribution<double> ratio(1.3, 2.5);
  std::vector<TrackingCase> out;
  for (int k = 0; k < count; ++k) {
    const double s = irr(rng);
    const double v_mpp = res::pv_mpp(s, array).v;
    out.push_back(track_against_scan(array, s, v_mpp * ratio(rng)));
  }
  return out;
}

struct IvGridCheck {
  std::size_t points = 0;
  std::size_t current_violations = 0;  // current rising with voltage
  std::size_t extra_maxima = 0;        // local power maxima beyond the first
  std::string first_problem;
};

/// Checks monotone current and a single power maximum along the I-V curve
/// at each irradiance, on `n_irradiance` x `n_voltage` points.
inline IvGridCheck check_iv_grid(const res::PvCellParams& array, int n_irradiance, int n_voltage) {
  IvGridCheck c;
  for (int a = 0; a < n_irradiance; ++a) {
    const double s = 100.0 + 1100.0 * a / (n_irradiance - 1);
    const double v_oc = res::pv_open_circuit_voltage(s, array);
    double prev_i = 0.0;
    double prev_p = 0.0;
    bool falling = false;
    int maxima = 0;
    for (int b = 0; b < n_voltage; ++b) {
      const double v = v_oc * b / (n_voltage - 1);
      const double i = res::pv_array_current(v, s, array);
      const double p = v * i;
      ++c.points;
      if (b > 0 && i > prev_i) {
        ++c.current_violations;
        if (c.first_problem.empty()) c.first_problem = "current rises at S=" + std::to_string(s);
      }
      if (b > 0) {
        if (p < prev_p && !falling) {
          falling = true;
          ++maxima;
        } else if (p > prev_p && falling) {
          falling = false;
        }
      }
      prev_i = i;
      prev_p = p;
    }
    if (maxima > 1) {
      c.extra_maxima += static_cast<std::size_t>(maxima - 1);
      if (c.first_problem.empty()) c.first_problem = "several power maxima at S=" + std::to_string(s);
    }
  }
  return c;
}

}  // namespace powerdyn::testing
