#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "powerdyn/converter/vsc.hpp"
#include "powerdyn/core/errors.hpp"

using namespace powerdyn::converter;

namespace {
constexpr double kOmegaBase = 2.0 * std::numbers::pi * 50.0;
}

TEST(VscParams, RejectsNonPositiveLimits) {
  VscParams p;
  EXPECT_NO_THROW(p.validate());
  p.i_max = 0.0;
  EXPECT_THROW(p.validate(), powerdyn::ConfigError);
}

TEST(Droop, DeadbandIsContinuous) {
  const VscParams p;
  EXPECT_EQ(droop_correction(50.0, p), 0.0);
  EXPECT_NEAR(droop_correction(50.1, p), 0.0, 1e-12);
  EXPECT_NEAR(droop_correction(49.9, p), 0.0, 1e-12);
  EXPECT_NEAR(droop_correction(50.1 + 1e-9, p), 0.0, 1e-8);
  EXPECT_NEAR(droop_correction(50.2, p), p.droop_gain * 0.1 / 50.0, 1e-12);
  EXPECT_NEAR(droop_correction(49.8, p), -p.droop_gain * 0.1 / 50.0, 1e-12);
}

TEST(FaultRideThrough, NormalVoltageKeepsReferenceWithinLimit) {
  const VscParams p;
  const auto ref = frt_limit({0.6, 0.2}, 1.0, p);
  EXPECT_EQ(ref.i_d, 0.6);
  EXPECT_EQ(ref.i_q, 0.2);
  const auto big = frt_limit({1.2, 0.9}, 1.0, p);
  EXPECT_NEAR(std::hypot(big.i_d, big.i_q), p.i_max, 1e-12);
  EXPECT_NEAR(big.i_d / big.i_q, 1.2 / 0.9, 1e-12);
}

TEST(FaultRideThrough, DipPrioritisesReactiveCurrent) {
  const VscParams p;
  const auto mild = frt_limit({1.5, 0.0}, 0.85, p);
  EXPECT_NEAR(mild.i_q, p.frt_gain * 0.05 * p.i_max, 1e-12);
  EXPECT_NEAR(std::hypot(mild.i_d, mild.i_q), p.i_max, 1e-12);

  const auto deep = frt_limit({1.0, 0.0}, 0.1, p);
  EXPECT_NEAR(deep.i_q, p.i_max, 1e-12);
  EXPECT_NEAR(deep.i_d, 0.0, 1e-12);

  const auto small = frt_limit({0.1, 0.0}, 0.8, p);
  EXPECT_NEAR(small.i_d, 0.1, 1e-12);
}

TEST(Pll, LocksToOffNominalFrequency) {
  const VscParams p;
  PllState s;
  const double h = 1e-4;
  const double f_grid = 50.5;
  double freq = 0.0;
  for (int k = 0; k < 20000; ++k) {
    // Angles are relative to the nominal rotating frame.
    const double grid = 2.0 * std::numbers::pi * (f_grid - 50.0) * k * h + 0.3;
    freq = pll_step(s, std::sin(grid - s.angle), p, h);
  }
  EXPECT_NEAR(freq, f_grid, 1e-4);
  const double grid = 2.0 * std::numbers::pi * (f_grid - 50.0) * 20000 * h + 0.3;
  EXPECT_NEAR(std::remainder(grid - s.angle, 2.0 * std::numbers::pi), 0.0, 1e-3);
}

TEST(Pll, FrequencyDeviationIsBounded) {
  const VscParams p;
  PllState s;
  for (int k = 0; k < 100000; ++k) pll_step(s, 1.0, p, 1e-4);
  EXPECT_LE(s.integrator, p.pll_limit);
  EXPECT_NEAR(pll_derivatives(s, 1.0, p).freq_hz, 50.0 * (1.0 + p.pll_limit), 1e-12);
}

TEST(CurrentLoop, ClosedLoopIsFirstOrder) {
  const VscParams p;
  CurrentLoopState s;
  const double h = 1e-6;
  double i = 0.0;
  const int steps = static_cast<int>(std::round(p.t_current / h));
  for (int k = 0; k < steps; ++k) {
    const auto u = current_loop_step(s, {1.0, 0.0}, {i, 0.0}, 0.0, 0.0, 0.0, p, h);
    i += h * kOmegaBase / p.x_filter * (u.v_d - p.r_filter * i);
  }
  EXPECT_NEAR(i, 1.0 - std::exp(-1.0), 2e-3);
}

TEST(CurrentLoop, GainsFollowFilter) {
  const VscParams p;
  // Zero on the filter pole: kp / ki = L / R with L in p.u. seconds.
  EXPECT_NEAR(current_loop_kp(p) / current_loop_ki(p), p.x_filter / (kOmegaBase * p.r_filter), 1e-12);
  EXPECT_NEAR(current_loop_kp(p), p.x_filter / (kOmegaBase * p.t_current), 1e-15);
}

TEST(OuterLoop, SettlesOnReference) {
  const VscParams p;
  OuterState s;
  const double h = 1e-4;
  double p_out = 0.0;
  double q_out = 0.0;
  for (int k = 0; k < 20000; ++k) {
    const auto ref = outer_loop_step(s, 0.8, 0.3, p_out, q_out, 1.0, p, h);
    // Ideal inner loop at unit voltage: power equals the current reference.
    p_out = ref.i_d;
    q_out = ref.i_q;
  }
  EXPECT_NEAR(p_out, 0.8, 1e-3);
  EXPECT_NEAR(q_out, 0.3, 1e-3);
}

TEST(PhasorInjection, RotatesWithPll) {
  const auto a = phasor_injection({1.0, 0.0}, 0.0);
  EXPECT_NEAR(a.real(), 1.0, 1e-15);
  const auto b = phasor_injection({0.0, 1.0}, 0.0);
  EXPECT_NEAR(b.imag(), -1.0, 1e-15);
  const auto c = phasor_injection({0.5, 0.2}, 1.0);
  EXPECT_NEAR(std::abs(c), std::hypot(0.5, 0.2), 1e-15);
}

TEST(DcLink, BalancedPowerHoldsVoltage) {
  const VscParams p;
  EXPECT_EQ(dc_link_derivative(1.0, 0.7, 0.7, p), 0.0);
  EXPECT_GT(dc_link_derivative(1.0, 0.8, 0.7, p), 0.0);
  // Above the threshold the chopper absorbs the surplus.
  EXPECT_LT(dc_link_derivative(1.2, 0.7, 0.7, p), 0.0);
  EXPECT_NEAR(dc_voltage_support(0.5, 1.02, p), 0.5 + p.k_dc * 0.02, 1e-12);
}

TEST(DcLink, CollapseAborts) {
  const VscParams p;
  EXPECT_THROW(dc_link_step(0.0, 0.0, 0.5, p, 1e-4), powerdyn::NumericAbort);
  EXPECT_THROW(dc_link_step(0.01, 0.0, 10.0, p, 1e-2), powerdyn::NumericAbort);
}
