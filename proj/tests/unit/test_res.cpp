#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <numeric>

#include "powerdyn/core/errors.hpp"
#include "powerdyn/res/cp_table.hpp"
#include "powerdyn/res/perturb_observe.hpp"
#include "powerdyn/res/pv.hpp"
#include "powerdyn/res/sources.hpp"
#include "powerdyn/res/wind.hpp"
#include "pv_oracles.hpp"

using namespace powerdyn::res;
namespace fs = std::filesystem;

namespace {

std::vector<double> range(double lo, double hi, double step) {
  std::vector<double> out;
  for (double x = lo; x <= hi + 1e-9; x += step) out.push_back(x);
  return out;
}

CpTable flat_table(double cp) {
  const std::vector<double> lambda{0.0, 20.0};
  const std::vector<double> beta{0.0, 30.0};
  return CpTable(lambda, beta, {cp, cp, cp, cp});
}

PvCellParams plant() { return size_pv_array(PvCellParams{}, 100e6); }

}  // namespace

TEST(Pv, ShortAndOpenCircuit) {
  const PvCellParams p;
  EXPECT_NEAR(pv_cell_current(0.0, 1000.0, p), p.i_ph_stc, 1e-12);
  const double v_oc = pv_open_circuit_voltage(1000.0, p);
  EXPECT_NEAR(pv_array_current(v_oc, 1000.0, p), 0.0, 1e-9);
  EXPECT_EQ(pv_open_circuit_voltage(0.0, p), 0.0);
}

TEST(Pv, MppIsStationary) {
  const PvCellParams p;
  for (double s : {200.0, 600.0, 1000.0}) {
    const auto m = pv_mpp(s, p);
    const double dv = 1e-3 * m.v;
    EXPECT_GE(m.p, (m.v - dv) * pv_array_current(m.v - dv, s, p));
    EXPECT_GE(m.p, (m.v + dv) * pv_array_current(m.v + dv, s, p));
  }
}

TEST(Pv, SizingHitsPlantRating) {
  const auto p = plant();
  EXPECT_NEAR(pv_mpp(1000.0, p).p, 100e6, 1.0);
  EXPECT_NE(p.n_parallel, std::round(p.n_parallel));
}

TEST(Pv, CurtailedVoltageLiesLeftOfMpp) {
  const auto p = plant();
  const auto m = pv_mpp(800.0, p);
  const double v = pv_voltage_for_power_left(0.5 * m.p, 800.0, p);
  EXPECT_LT(v, m.v);
  EXPECT_NEAR(v * pv_array_current(v, 800.0, p), 0.5 * m.p, 1e-3);
  EXPECT_EQ(pv_voltage_for_power_left(2.0 * m.p, 800.0, p), m.v);
}

TEST(Pv, InvalidParametersAreRejected) {
  PvCellParams p;
  p.a_n = 3.0;
  EXPECT_THROW(p.validate(), powerdyn::ConfigError);
}

TEST(Pv, IvCurveInvariantsOnGrid) {
  const auto c = powerdyn::testing::check_iv_grid(plant(), 100, 100);
  EXPECT_EQ(c.points, 10000u);
  EXPECT_EQ(c.current_violations, 0u) << c.first_problem;
  EXPECT_EQ(c.extra_maxima, 0u) << c.first_problem;
}

TEST(PerturbObserve, ReversesOnFallingFeedback) {
  BoostState s;
  s.duty = 0.5;
  perturb_observe_step(s, 1.0);
  EXPECT_NEAR(s.duty, 0.502, 1e-12);
  perturb_observe_step(s, 2.0);
  EXPECT_NEAR(s.duty, 0.504, 1e-12);
  perturb_observe_step(s, 1.5);
  EXPECT_NEAR(s.duty, 0.502, 1e-12);
}

TEST(PerturbObserve, DutyStaysInRange) {
  BoostState s;
  s.duty = s.d_max;
  for (int k = 0; k < 100; ++k) perturb_observe_step(s, static_cast<double>(k));
  EXPECT_LE(s.duty, s.d_max);
  EXPECT_GE(s.duty, 0.0);
}

TEST(PerturbObserve, DemandModePrefersMatchingPower) {
  EXPECT_GT(tracking_feedback(TrackingMode::Dpp, 0.5, 0.5), tracking_feedback(TrackingMode::Dpp, 0.6, 0.5));
  EXPECT_EQ(tracking_feedback(TrackingMode::Mpp, 0.6, 0.5), 0.6);
  EXPECT_NEAR(boost_interface(0.25, 1200.0), 900.0, 1e-12);
}

TEST(PerturbObserve, MatchesBruteForceScan) {
  for (const auto& c : powerdyn::testing::random_tracking_cases(plant(), 20, 7)) {
    EXPECT_TRUE(c.within_step()) << "S=" << c.irradiance << " v_dc=" << c.v_dc << " tracked "
                                 << c.tracked_duty << " best " << c.best_duty;
  }
}

TEST(CpTable, HeierRespectsBetzAndPeaksNearEight) {
  const auto t = CpTable::heier(range(0.0, 16.0, 0.25), range(0.0, 30.0, 1.0));
  for (std::size_t i = 0; i < t.lambda_grid().size(); ++i) {
    for (std::size_t j = 0; j < t.beta_grid().size(); ++j) {
      ASSERT_GE(t.at(i, j), 0.0);
      ASSERT_LE(t.at(i, j), 16.0 / 27.0);
    }
  }
  EXPECT_EQ(t.peak().beta, 0.0);
  EXPECT_GT(t.peak().lambda, 6.0);
  EXPECT_LT(t.peak().lambda, 10.0);
  EXPECT_GT(t.peak().cp, 0.4);
}

TEST(CpTable, BilinearLookupIsExactOnNodesAndPlanes) {
  const std::vector<double> lambda{0.0, 1.0, 2.0};
  const std::vector<double> beta{0.0, 10.0};
  // cp = 0.1 lambda + 0.01 beta is reproduced exactly by bilinear interpolation.
  std::vector<double> values;
  for (double l : lambda) {
    for (double b : beta) values.push_back(0.1 * l + 0.01 * b);
  }
  const CpTable t(lambda, beta, values);
  EXPECT_NEAR(t(1.0, 10.0), 0.2, 1e-15);
  EXPECT_NEAR(t(1.5, 2.5), 0.175, 1e-15);
  EXPECT_NEAR(t(5.0, 0.0), 0.2, 1e-15);  // clamped to the grid
}

TEST(CpTable, RejectsBadGridAndValues) {
  EXPECT_THROW(CpTable({0.0, 0.0}, {0.0, 1.0}, {0, 0, 0, 0}), powerdyn::ConfigError);
  EXPECT_THROW(CpTable({0.0, 1.0}, {0.0, 1.0}, {0, 0, 0, 0.7}), powerdyn::ConfigError);
  EXPECT_THROW(CpTable({0.0, 1.0}, {0.0, 1.0}, {0, 0, 0}), powerdyn::ConfigError);
}

TEST(CpTable, SaveLoadRoundTrip) {
  const auto t = CpTable::heier(range(0.0, 16.0, 0.5), range(0.0, 30.0, 2.0));
  const fs::path path = fs::temp_directory_path() / "powerdyn_cp_roundtrip.txt";
  t.save(path);
  const auto back = CpTable::load(path);
  fs::remove(path);
  ASSERT_EQ(back.lambda_grid(), t.lambda_grid());
  ASSERT_EQ(back.beta_grid(), t.beta_grid());
  for (std::size_t i = 0; i < t.lambda_grid().size(); ++i) {
    for (std::size_t j = 0; j < t.beta_grid().size(); ++j) ASSERT_EQ(back.at(i, j), t.at(i, j));
  }
}

TEST(CpTable, ShippedTableLoads) {
  const auto t = CpTable::load(fs::path(POWERDYN_DATA_DIR) / "benchmark" / "cp_table.txt");
  EXPECT_EQ(t.lambda_grid().size(), 65u);
  EXPECT_EQ(t.beta_grid().size(), 31u);
  // The shipped table is rounded to five decimals.
  EXPECT_NEAR(t(8.0, 0.0), CpTable::heier_value(8.0, 0.0), 1e-5);
}

TEST(Wind, PowerLawExample) {
  // 8 m/s on a 63 m rotor with cP = 0.48 captures about 1.88 MW.
  const WindParams p;
  const auto cp = flat_table(0.48);
  const double expected = 0.5 * 0.48 * 1.225 * std::numbers::pi * 63.0 * 63.0 * 512.0;
  const double got = aero_power(8.0, 0.8, 0.0, p, cp);
  EXPECT_NEAR(got, expected, 1e-6 * expected);
  EXPECT_NEAR(got / 1e6, 1.88, 0.005);
}

TEST(Wind, StaticPowerIsClampedByAvailability) {
  WindParams p;
  const auto cp = flat_table(0.48);
  const double avail = wind_available_power(8.0, p, cp);
  EXPECT_NEAR(avail, 20.0 * aero_power(8.0, 0.8, 0.0, p, cp), 1e-6);
  EXPECT_EQ(wind_static_power(8.0, 10e6, p, cp), 10e6);
  EXPECT_EQ(wind_static_power(8.0, 1e9, p, cp), avail);
  EXPECT_EQ(wind_static_power(25.0, 1e9, p, cp), p.n_turbines * p.rated_power_w);
}

TEST(Wind, SchedulingWeightsPartitionUnity) {
  const WindParams p;
  for (double beta = -5.0; beta <= 35.0; beta += 0.37) {
    const auto w = scheduling_weights(beta, p.schedule_points);
    EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12) << beta;
    for (double x : w) EXPECT_GE(x, 0.0);
  }
  EXPECT_NEAR(scheduled_gain(0.0, p), 1.0, 1e-12);
  EXPECT_LT(scheduled_gain(20.0, p), scheduled_gain(5.0, p));
}

TEST(Wind, EquilibriumIsStationary) {
  const WindParams p;
  const auto cp = CpTable::heier(range(0.0, 16.0, 0.25), range(0.0, 30.0, 1.0));
  for (double setpoint : {20e6, 60e6}) {
    const auto s = wind_equilibrium(12.0, setpoint, p, cp);
    const auto d = wind_dynamic_derivatives(s, 12.0, setpoint, p, cp);
    EXPECT_NEAR(d.p_elec_w / setpoint, 1.0, 1e-3);
    EXPECT_NEAR(d.d.omega_r, 0.0, 1e-6);
    EXPECT_NEAR(d.d.omega_g, 0.0, 1e-6);
    EXPECT_NEAR(d.d.twist, 0.0, 1e-6);
  }
}

TEST(ResSource, ParsesEveryKind) {
  for (auto kind : {ResKind::IdealDc, ResKind::StaticPv, ResKind::DynamicPv, ResKind::StaticWind,
                    ResKind::DynamicWind}) {
    EXPECT_EQ(parse_res_kind(to_string(kind)), kind);
  }
  EXPECT_THROW(parse_res_kind("hydro"), powerdyn::ConfigError);
}
