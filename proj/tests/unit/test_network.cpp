#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "line_oracles.hpp"
#include "powerdyn/core/errors.hpp"
#include "powerdyn/network/bergeron.hpp"
#include "powerdyn/network/emt_network.hpp"
#include "powerdyn/network/phasor_network.hpp"
#include "powerdyn/network/power_flow.hpp"

using namespace powerdyn;
using namespace powerdyn::network;
using powerdyn::testing::far_end_response;

namespace {

constexpr double kOmega = 2.0 * std::numbers::pi * 50.0;

// 300 km of the benchmark line in SI units, positive sequence.
struct LineSI {
  double r = 0.0653 * 300.0;
  double l = 0.398 * 300.0 / kOmega;
  double c = 2.85e-6 * 300.0 / kOmega;
};

}  // namespace

TEST(Bergeron, RejectsTravelTimeBelowStep) {
  EXPECT_THROW(BergeronMode(0.0, 1e-6, 1e-9, 1e-5), ConfigError);
  EXPECT_THROW(BergeronMode(0.0, 0.0, 1e-9, 1e-5), ConfigError);
}

TEST(Bergeron, MatchedTerminationAbsorbsTheStep) {
  const LineSI line;
  const double h = 1e-5;
  BergeronMode mode(0.0, line.l, line.c, h);
  const double tau = mode.travel_time();
  const auto v = far_end_response(mode, h, 3.0 * tau / h, [](double) { return 1.0; },
                                  mode.characteristic_impedance());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double t = static_cast<double>(k) * h;
    if (t < tau - h) {
      ASSERT_NEAR(v[k], 0.0, 1e-12) << "t=" << t;
    } else if (t > tau + h) {
      ASSERT_NEAR(v[k], 1.0, 1e-12) << "t=" << t;
    }
  }
}

TEST(Bergeron, OpenEndDoublesTheStep) {
  const LineSI line;
  const double h = 1e-5;
  BergeronMode mode(0.0, line.l, line.c, h);
  const double tau = mode.travel_time();
  const auto v = far_end_response(mode, h, 4.0 * tau / h, [](double) { return 1.0; }, -1.0);
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double t = static_cast<double>(k) * h;
    // Linear interpolation of the fractional delay smears each front by
    // about one step per traversal.
    if (t > tau + h && t < 3.0 * tau - 4.0 * h) ASSERT_NEAR(v[k], 2.0, 1e-12) << "t=" << t;
    // The ideal source reflects the returning wave with the opposite sign.
    if (t > 3.0 * tau + 4.0 * h) ASSERT_NEAR(v[k], 0.0, 1e-12) << "t=" << t;
  }
}

TEST(Bergeron, LossesAttenuateTheOpenEndStep) {
  const LineSI line;
  const double h = 1e-5;
  BergeronMode mode(line.r, line.l, line.c, h);
  const double tau = mode.travel_time();
  const auto v = far_end_response(mode, h, 2.0 * tau / h, [](double) { return 1.0; }, -1.0);
  const double plateau = v.back();
  const double zc = mode.characteristic_impedance();
  EXPECT_LT(plateau, 2.0);
  // Distributed series loss attenuates a wave by exp(-R / 2 Zc).
  EXPECT_NEAR(plateau, 2.0 * std::exp(-line.r / (2.0 * zc)), 0.01);
}

TEST(Bergeron, SinusoidalOpenEndMatchesDistributedLine) {
  const LineSI line;
  const double h = 5e-5;
  BergeronMode mode(line.r, line.l, line.c, h);
  const auto v = far_end_response(mode, h, 1.0 / h, [](double t) { return std::cos(kOmega * t); }, -1.0);
  const double expected =
      std::abs(powerdyn::testing::open_end_gain(line.r, kOmega * line.l, kOmega * line.c));
  EXPECT_NEAR(powerdyn::testing::last_cycle_peak(v, h, 50.0) / expected, 1.0, 1e-3);
}

TEST(ExactPi, ReducesToNominalForShortLines) {
  const auto pi = exact_pi(0.001, 0.01, 0.002);
  EXPECT_NEAR(pi.z_series.real(), 0.001, 1e-7);
  EXPECT_NEAR(pi.z_series.imag(), 0.01, 1e-7);
  EXPECT_NEAR(pi.y_half.imag(), 0.001, 1e-8);
  const auto series_only = exact_pi(0.01, 0.1, 0.0);
  EXPECT_EQ(series_only.y_half, Complex{});
}

TEST(ExactPi, OpenEndGainMatchesDistributedLine) {
  for (double km : {50.0, 150.0, 300.0, 600.0}) {
    const double r = 0.0653 * km;
    const double x = 0.398 * km;
    const double b = 2.85e-6 * km;
    const auto pi = exact_pi(r, x, b);
    const Complex z_shunt = 1.0 / pi.y_half;
    const Complex gain = z_shunt / (pi.z_series + z_shunt);
    const Complex expected = powerdyn::testing::open_end_gain(r, x, b);
    EXPECT_NEAR(std::abs(gain - expected), 0.0, 1e-12) << km << " km";
  }
}

TEST(PhasorNetwork, FaultVoltageFollowsThevenin) {
  auto model = powerdyn::testing::source_line_load(150.0, LineModel::Pi);
  model.faults.push_back({"F", "b", "", 0.5, 10.0, FaultType::ThreePhase, 0});
  PhasorNetwork net(compile(model));
  net.set_active("F", false);
  net.set_port_source(0, 1.0, 0.0, 0.0);
  net.solve(0.0);
  const Complex v_pre = net.node_voltage(1);
  const Eigen::MatrixXcd y = net.admittance_matrix(1);
  const Complex z_th = y.inverse()(1, 1);

  net.set_active("F", true);
  net.solve(0.0);
  const double z_base = 220.0 * 220.0 / 100.0;
  const Complex z_f(10.0 / z_base, 0.0);
  const Complex expected = v_pre * z_f / (z_th + z_f);
  EXPECT_NEAR(std::abs(net.node_voltage(1) - expected), 0.0, 1e-12);
}

TEST(PhasorNetwork, SinglePhaseFaultSequenceNetworks) {
  auto model = powerdyn::testing::source_line_load(100.0, LineModel::Pi);
  model.faults.push_back({"F", "b", "", 0.5, 5.0, FaultType::SinglePhase, 0});
  PhasorNetwork net(compile(model));
  net.set_port_source(0, 1.0, 0.0, 0.0);
  net.set_active("F", false);
  net.solve(0.0);
  const Complex v_pre = net.node_voltage(1);
  const Complex z1 = net.admittance_matrix(1).inverse()(1, 1);
  const Complex z0 = net.admittance_matrix(0).inverse()(1, 1);

  net.set_active("F", true);
  net.solve(0.0);
  const Complex r_f(5.0 / (220.0 * 220.0 / 100.0), 0.0);
  const Complex i0 = v_pre / (2.0 * z1 + z0 + 3.0 * r_f);
  const Complex va = net.node_voltage(1, 0) + net.node_voltage(1, 1) + net.node_voltage(1, 2);
  // The faulted phase sits at the fault resistance times the fault current.
  EXPECT_NEAR(std::abs(va - 3.0 * r_f * i0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(net.node_voltage(1, 2) + z1 * i0), 0.0, 1e-12);
}

TEST(PhasorNetwork, ClearedFaultRestoresTheMatrix) {
  auto model = powerdyn::testing::source_line_load(150.0, LineModel::Bergeron);
  model.faults.push_back({"F", "b", "", 0.5, 10.0, FaultType::ThreePhase, 0});
  PhasorNetwork net(compile(model));
  net.set_active("F", false);
  const Eigen::MatrixXcd before = net.admittance_matrix(1);
  net.set_active("F", true);
  EXPECT_GT((net.admittance_matrix(1) - before).norm(), 1.0);
  net.set_active("F", false);
  EXPECT_EQ((net.admittance_matrix(1) - before).norm(), 0.0);
}

TEST(Topology, FloatingIslandIsNamed) {
  auto model = powerdyn::testing::source_line_load(100.0, LineModel::Pi);
  model.buses.push_back({"c", 220.0});
  SequenceParams series_only{0.05, 0.4, 0.0, 0.2, 1.2, 0.0};
  model.lines.push_back({"L2", "b", "c", 20.0, series_only, LineModel::Pi});
  model.breakers.push_back({"BR", "L2", true});
  PhasorNetwork net(compile(model));
  net.set_port_source(0, 1.0, 0.0, 0.0);
  EXPECT_NO_THROW(net.solve(0.0));
  net.set_switch("BR", false);
  try {
    net.solve(0.0);
    FAIL() << "expected a floating-subnetwork error";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("floating"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("c"), std::string::npos);
  }
}

TEST(Topology, UnknownElementIsRejected) {
  PhasorNetwork net(compile(powerdyn::testing::source_line_load(100.0, LineModel::Pi)));
  EXPECT_THROW(net.set_active("nope", false), ConfigError);
  EXPECT_THROW(net.set_switch("nope", false), ConfigError);
}

TEST(NetworkModel, ValidationListsEveryProblem) {
  NetworkModel m(100.0, 50.0);
  m.buses = {{"a", 220.0}};
  m.lines.push_back({"L", "a", "zz", 10.0, powerdyn::testing::ohl_220(), LineModel::Pi});
  m.loads.push_back({"LD", "yy", 10.0, 1.0, true});
  try {
    m.validate();
    FAIL() << "expected validation to fail";
  } catch (const ConfigError& e) {
    EXPECT_GE(e.problems().size(), 2u);
  }
}

TEST(PowerFlow, SlackFeedsLoadAndLosses) {
  const auto model = powerdyn::testing::source_line_load(150.0, LineModel::Pi);
  const auto net = compile(model);
  const auto pf = solve_power_flow(net, {{"S", BusType::Slack, 0.0, 0.0, 1.0}}, {});
  const Complex s = pf.port_power[0];
  // One p.u. of load on a 100 MVA base plus a small series loss.
  const double v_b = std::abs(pf.node_voltage[1]);
  const double load = 1.0 * v_b * v_b;
  EXPECT_GT(s.real(), load);
  EXPECT_LT(s.real(), load * 1.05);
}

TEST(EmtNetwork, SteadyStateFollowsPhasorSolution) {
  for (auto model_kind : {LineModel::Pi, LineModel::Bergeron}) {
    const auto model = powerdyn::testing::source_line_load(200.0, model_kind);
    const auto compiled = compile(model);
    const auto pf = solve_power_flow(compiled, {{"S", BusType::Slack, 0.0, 0.0, 1.0}}, {});

    PhasorNetwork phasor(compiled);
    const Complex e = pf.node_voltage[0] + Complex(0.001, 0.02) * pf.port_current[0];
    phasor.set_port_source(0, e.real(), e.imag(), 0.0);
    phasor.solve(0.0);
    EXPECT_NEAR(std::abs(phasor.node_voltage(1) - pf.node_voltage[1]), 0.0, 1e-8);

    const double h = 5e-5;
    EmtNetwork emt(compiled, h);
    SteadyState ss;
    ss.node_voltage = pf.node_voltage;
    ss.port_source = {e};
    emt.initialize(ss);
    emt.set_port_source(0, std::abs(e), 0.0, std::arg(e));
    double worst = 0.0;
    for (int k = 0; k < 2000; ++k) {
      const double t = k * h;
      emt.solve(t);
      const Vec3 v = emt.node_voltage(1);
      const Complex p = pf.node_voltage[1] * std::polar(1.0, kOmega * t);
      worst = std::max(worst, std::abs(v[0] - p.real()));
    }
    EXPECT_LT(worst, 2e-3) << to_string(model_kind);
  }
}
