#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "powerdyn/core/errors.hpp"
#include "powerdyn/core/event_queue.hpp"
#include "powerdyn/core/integrator.hpp"
#include "powerdyn/core/per_unit.hpp"
#include "powerdyn/core/state_vector.hpp"
#include "powerdyn/core/transforms.hpp"

using namespace powerdyn;

namespace {

StateVector scalar_state(double x0) {
  StateVector s;
  s.add("x", "value", x0);
  return s;
}

double decay_error(double h) {
  StateVector s = scalar_state(1.0);
  const auto n = static_cast<int>(std::llround(1.0 / h));
  const DerivativeFn f = [](std::span<const double> x, std::span<double> dx) { dx[0] = -x[0]; };
  for (int k = 0; k < n; ++k) s = euler_step(s, f, h);
  return std::abs(s[0] - std::exp(-1.0));
}

}  // namespace

TEST(Euler, ZeroDerivativeLeavesStateUnchanged) {
  StateVector s;
  s.add("a", "x", 1.5);
  s.add("a", "y", -2.0);
  const auto next = euler_step(s, [](std::span<const double>, std::span<double> dx) {
    std::fill(dx.begin(), dx.end(), 0.0);
  }, 0.1);
  EXPECT_EQ(next[0], 1.5);
  EXPECT_EQ(next[1], -2.0);
}

TEST(Euler, OneStepOfDecay) {
  const auto next = euler_step(scalar_state(1.0), [](std::span<const double> x, std::span<double> dx) {
    dx[0] = -x[0];
  }, 0.1);
  EXPECT_DOUBLE_EQ(next[0], 0.9);
}

TEST(Euler, GlobalErrorHalvesWithStep) {
  const double e1 = decay_error(2e-3);
  const double e2 = decay_error(1e-3);
  EXPECT_NEAR(e1 / e2, 2.0, 0.2);
}

TEST(Euler, ReproducesGeometricSequence) {
  const double lambda = -3.0;
  const double h = 0.01;
  StateVector s = scalar_state(1.0);
  double expected = 1.0;
  for (int n = 0; n < 50; ++n) {
    s = euler_step(s, [&](std::span<const double> x, std::span<double> dx) { dx[0] = lambda * x[0]; }, h);
    expected = expected + h * (lambda * expected);
    ASSERT_EQ(s[0], expected);
  }
}

TEST(Euler, NonFiniteDerivativeNamesTheSlot) {
  StateVector s;
  s.add("G1", "omega", 1.0);
  s.add("G1", "delta", 0.0);
  try {
    (void)euler_step(s, [](std::span<const double>, std::span<double> dx) {
      dx[0] = 0.0;
      dx[1] = std::nan("");
    }, 1e-3);
    FAIL() << "expected NumericAbort";
  } catch (const NumericAbort& e) {
    EXPECT_NE(std::string(e.what()).find("G1.delta"), std::string::npos) << e.what();
  }
}

TEST(Integrator, StepBoundsPerMode) {
  EXPECT_NO_THROW((IntegratorConfig{50e-6, SimulationMode::Emt}.validate()));
  EXPECT_THROW((IntegratorConfig{200e-6, SimulationMode::Emt}.validate()), ConfigError);
  EXPECT_NO_THROW((IntegratorConfig{10e-3, SimulationMode::Phasor}.validate()));
  EXPECT_THROW((IntegratorConfig{20e-3, SimulationMode::Phasor}.validate()), ConfigError);
  EXPECT_THROW((IntegratorConfig{0.0, SimulationMode::Phasor}.validate()), ConfigError);
}

TEST(Transforms, AlignedBalancedSetGivesUnitD) {
  const double theta = 0.7;
  const Vec3 abc(std::cos(theta), std::cos(theta - 2.0 * std::numbers::pi / 3.0),
                 std::cos(theta + 2.0 * std::numbers::pi / 3.0));
  const Vec3 dq0 = abc_to_dq0(abc, theta);
  EXPECT_NEAR(dq0[0], 1.0, 1e-14);
  EXPECT_NEAR(dq0[1], 0.0, 1e-14);
  EXPECT_NEAR(dq0[2], 0.0, 1e-14);
}

TEST(Transforms, ZeroMapsToZero) {
  EXPECT_EQ(abc_to_dq0(Vec3::Zero(), 1.3), Vec3::Zero());
}

TEST(Transforms, RoundTripIsIdentity) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int k = 0; k < 1000; ++k) {
    const Vec3 x(u(rng), u(rng), u(rng));
    const double theta = u(rng);
    const Vec3 back = dq0_to_abc(abc_to_dq0(x, theta), theta);
    ASSERT_LT((back - x).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Transforms, ModalTransformIsOrthogonal) {
  const Mat3& t = modal_transform();
  EXPECT_LT((t * t.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PerUnit, DerivedBases) {
  const PerUnitBase b(100e6, 220e3, 50.0);
  EXPECT_DOUBLE_EQ(b.z_base(), 484.0);
  EXPECT_DOUBLE_EQ(b.omega_nom(), 100.0 * std::numbers::pi);
}

TEST(PerUnit, RoundTrip) {
  const PerUnitBase b(100e6, 220e3, 50.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 100; ++k) {
    const double v = u(rng);
    EXPECT_NEAR(b.impedance_to_si(b.impedance_to_pu(v)), v, 1e-12 * std::abs(v));
    EXPECT_NEAR(b.power_to_si(b.power_to_pu(v)), v, 1e-12 * std::abs(v));
    EXPECT_NEAR(b.voltage_to_si(b.voltage_to_pu(v)), v, 1e-12 * std::abs(v));
  }
}

TEST(PerUnit, RejectsNonPositiveBases) {
  EXPECT_THROW(PerUnitBase(0.0, 220e3, 50.0), ConfigError);
  EXPECT_THROW(PerUnitBase(100e6, -1.0, 50.0), ConfigError);
}

TEST(EventQueue, SchedulesOneEvent) {
  EventQueue<int> q(1e-3);
  q.schedule(5.0, 1);
  EXPECT_EQ(q.size(), 1u);
}

TEST(EventQueue, SnapsToNearestBoundary) {
  EventQueue<int> q(50e-6);
  q.schedule(5.00003, 1);
  EXPECT_EQ(q.entries().front().step, 100001);
  EXPECT_NEAR(q.entries().front().time, 5.00005, 1e-12);
}

TEST(EventQueue, SameTimeKeepsInsertionOrder) {
  EventQueue<int> q(1e-3);
  q.schedule(1.0, 1);
  q.schedule(1.0, 2);
  q.schedule(0.5, 0);
  const auto due = q.pop_due(1000);
  ASSERT_EQ(due.size(), 3u);
  EXPECT_EQ(due[0].payload, 0);
  EXPECT_EQ(due[1].payload, 1);
  EXPECT_EQ(due[2].payload, 2);
}

TEST(EventQueue, RejectsPastEvents) {
  EventQueue<int> q(1e-3);
  (void)q.pop_due(100);
  EXPECT_THROW(q.schedule(0.05, 1), ConfigError);
}

TEST(StateVector, SlotsMapToUniqueIndices) {
  StateVector s;
  EXPECT_EQ(s.add("G1", "omega", 1.0), 0u);
  EXPECT_EQ(s.add("G1", "delta"), 1u);
  EXPECT_EQ(s.index("G1", "delta"), 1u);
  EXPECT_THROW(s.add("G1", "omega"), ConfigError);
  EXPECT_EQ(s.size(), 2u);
}
