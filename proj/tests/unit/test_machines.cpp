#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "powerdyn/core/errors.hpp"
#include "powerdyn/machines/controls.hpp"
#include "powerdyn/machines/model22.hpp"
#include "powerdyn/machines/saturation.hpp"
#include "powerdyn/machines/simplified_sg.hpp"

using namespace powerdyn::machines;

namespace {
constexpr double kOmegaBase = 100.0 * 3.141592653589793;

double parallel(double a, double b, double c) { return 1.0 / (1.0 / a + 1.0 / b + 1.0 / c); }
}  // namespace

TEST(Saturation, FitHitsBothPoints) {
  const auto s = SaturationParams::fit(0.8, 1.0, 1.02, 1.2, 1.10);
  EXPECT_NEAR(s.factor_from_saturated(1.0), 1.02, 1e-10);
  EXPECT_NEAR(s.factor_from_saturated(1.2), 1.10, 1e-10);
}

TEST(Saturation, UnityBelowKneeAndMonotone) {
  const auto s = SaturationParams::standard();
  EXPECT_EQ(s.factor_from_saturated(0.5), 1.0);
  EXPECT_EQ(s.factor_from_saturated(0.8), 1.0);
  double last = 1.0;
  for (double psi = 0.0; psi <= 1.5; psi += 0.01) {
    const double k = s.factor_from_saturated(psi);
    ASSERT_GE(k, last - 1e-15);
    ASSERT_GE(k, 1.0);
    last = k;
  }
}

TEST(Saturation, ApplyIsInverseOfFactor) {
  const auto s = SaturationParams::standard();
  for (double sat = 0.85; sat < 1.3; sat += 0.05) {
    const double unsat = sat * s.factor_from_saturated(sat);
    EXPECT_NEAR(apply_saturation(unsat, s), sat, 1e-10);
  }
  EXPECT_EQ(apply_saturation(0.5, SaturationParams::none()), 0.5);
}

TEST(Model22, SubtransientInductancesMatchCircuitReduction) {
  const Model22Params p;
  EXPECT_NEAR(model22_l_d_sub(p), p.ll + parallel(p.lad, p.lfd, p.l1d), 1e-12);
  EXPECT_NEAR(model22_l_q_sub(p), p.ll + parallel(p.laq, p.l1q, p.l2q), 1e-12);
}

TEST(Model22, RejectsNonPositiveReactance) {
  Model22Params p;
  p.lad = 0.0;
  EXPECT_THROW(p.validate(), powerdyn::ConfigError);
}

TEST(Model22, OpenCircuitNeedsUnitFieldVoltage) {
  const Model22Params p;
  const auto op = model22_steady_state(1.0, 0.0, 0.0, 0.0, p, SaturationParams::none());
  EXPECT_NEAR(op.efd, 1.0, 1e-9);
  EXPECT_NEAR(op.p_mech, 0.0, 1e-12);
}

TEST(Model22, LoadedSteadyStateIsEquilibrium) {
  const Model22Params p;
  for (const auto& sat : {SaturationParams::none(), SaturationParams::standard()}) {
    // 0.8 p.u. power at 0.95 power factor lagging, 1.02 p.u. terminal voltage.
    const double v = 1.02;
    const double p_out = 0.8;
    const double q_out = 0.26;
    const std::complex<double> vt(v, 0.0);
    const std::complex<double> it = std::conj(std::complex<double>(p_out, q_out) / vt);
    const auto op = model22_steady_state(vt.real(), vt.imag(), it.real(), it.imag(), p, sat);
    const auto d = model22_derivs(op.state, op.v_d, op.v_q, op.efd, op.p_mech, p, kOmegaBase, op.k);
    EXPECT_NEAR(d.psi_d, 0.0, 1e-9);
    EXPECT_NEAR(d.psi_q, 0.0, 1e-9);
    EXPECT_NEAR(d.rotor.fd, 0.0, 1e-9);
    EXPECT_NEAR(d.rotor.d1, 0.0, 1e-9);
    EXPECT_NEAR(d.rotor.q1, 0.0, 1e-9);
    EXPECT_NEAR(d.rotor.q2, 0.0, 1e-9);
    EXPECT_NEAR(d.omega, 0.0, 1e-9);
    // Electrical power balance: Pm = P + ra |I|^2.
    EXPECT_NEAR(op.p_mech, p_out + p.ra * std::norm(it), 1e-9);
    EXPECT_NEAR(d.i_d, op.i_d, 1e-9);
    EXPECT_NEAR(d.i_q, op.i_q, 1e-9);
  }
}

TEST(Model22, SaturationRaisesFieldDemand) {
  const Model22Params p;
  const auto lin = model22_steady_state(1.05, 0.0, 0.7, -0.2, p, SaturationParams::none());
  const auto sat = model22_steady_state(1.05, 0.0, 0.7, -0.2, p, SaturationParams::standard());
  EXPECT_GT(sat.k, 1.0);
  EXPECT_GT(sat.efd, lin.efd);
}

TEST(Model22, SwingFollowsTorqueImbalance) {
  const Model22Params p;
  const auto op = model22_steady_state(1.0, 0.0, 0.5, 0.0, p, SaturationParams::none());
  const auto d = model22_derivs(op.state, op.v_d, op.v_q, op.efd, op.p_mech + 0.1, p, kOmegaBase);
  EXPECT_NEAR(d.omega, 0.1 / (2.0 * p.h), 1e-9);
}

TEST(SimplifiedSG, NoCurrentNoPowerIsEquilibrium) {
  const SimplifiedSGParams p;
  const SimplifiedSGState s{1.0, 1.0, 0.0};
  const auto d = simplified_sg_derivs(s, 1.0, 0.0, 0.0, 1.0, p, kOmegaBase);
  EXPECT_NEAR(d.omega, 0.0, 1e-12);
  EXPECT_NEAR(d.e_s, 0.0, 1e-12);
  EXPECT_NEAR(d.delta, 0.0, 1e-12);
}

TEST(SimplifiedSG, SwingAndFieldLag) {
  const SimplifiedSGParams p;
  const SimplifiedSGState s{1.01, 1.1, 0.3};
  const auto d = simplified_sg_derivs_from_current(s, 0.0, 0.0, 0.5, 1.2, p, kOmegaBase);
  EXPECT_NEAR(d.omega, 0.5 / (2.0 * p.h), 1e-12);
  EXPECT_NEAR(d.delta, kOmegaBase * 0.01, 1e-9);
  EXPECT_NEAR(d.e_s, (1.2 - 1.1) / p.tau_f, 1e-12);
}

TEST(SimplifiedSG, ElectricalPowerFromCurrent) {
  const SimplifiedSGParams p;
  const SimplifiedSGState s{1.0, 1.1, 0.0};
  const auto d = simplified_sg_derivs_from_current(s, 0.5, 0.0, 0.55, 1.1, p, kOmegaBase);
  // E on the d axis, current in phase: Pe = E i_d - r i^2 at the terminal,
  // the air-gap power is E i_d.
  EXPECT_NEAR(d.p_e, 0.55, 1e-12);
  EXPECT_NEAR(d.omega, 0.0, 1e-12);
}

TEST(Avr, InitializedStateHoldsFieldVoltage) {
  const AvrParams p;
  const auto s = avr_initialize(1.02, 2.3);
  EXPECT_NEAR(avr_output(s, 1.02, p), 2.3, 1e-12);
  const auto d = avr_derivative(s, 1.02, 1.02, p);
  EXPECT_NEAR(d.v_meas, 0.0, 1e-12);
  EXPECT_NEAR(d.integrator, 0.0, 1e-12);
}

TEST(Avr, OutputRespectsCeiling) {
  AvrParams p;
  AvrState s{0.5, 0.0};
  EXPECT_LE(avr_output(s, 1.0, p), p.vf_max);
  s.v_meas = 2.0;
  EXPECT_GE(avr_output(s, 1.0, p), p.vf_min);
}

TEST(Governor, DroopTarget) {
  const GovernorParams p;
  EXPECT_NEAR(governor_target(0.6, 1.0, p), 0.6, 1e-12);
  EXPECT_NEAR(governor_target(0.6, 1.01, p), 0.4, 1e-12);
  EXPECT_NEAR(governor_target(0.6, 0.5, p), p.pm_max, 1e-12);
  EXPECT_NEAR(governor_derivative(0.6, 0.6, 1.0, p), 0.0, 1e-12);
}
