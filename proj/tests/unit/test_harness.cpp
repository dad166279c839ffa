#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "powerdyn/core/errors.hpp"
#include "powerdyn/harness/csv.hpp"
#include "powerdyn/harness/metrics.hpp"
#include "powerdyn/harness/scenario.hpp"
#include "powerdyn/harness/timing.hpp"

using namespace powerdyn;
using namespace powerdyn::harness;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = fs::path(POWERDYN_DATA_DIR) / "benchmark" / "scenarios";

sim::RunResult sine_run(double offset, double amplitude = 1.0) {
  sim::RunResult r;
  r.names = {"x", "y"};
  for (int k = 0; k <= 2000; ++k) {
    const double t = k * 1e-3;
    r.time.push_back(t);
    r.data.push_back(amplitude * std::sin(2.0 * 3.141592653589793 * 50.0 * t) + offset);
    r.data.push_back(2.0 + offset);
  }
  return r;
}

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / ("powerdyn_" + name); }

fs::path write_scenario(const std::string& name, const std::string& body) {
  const fs::path p = kScenarios / ("unit_" + name + ".json");
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST(Csv, ShortestRoundTripFormatting) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(5.0), "5");
  const double x = 1.0 / 3.0;
  EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(Csv, WriteReadRoundTrip) {
  auto run = sine_run(0.25);
  run.wall_seconds = 1.5;
  run.steps = 42;
  run.meta["test"] = "3";
  const fs::path path = temp_file("roundtrip.csv");
  write_csv(run, path);
  write_meta(run, path);
  auto back = read_csv(path);
  EXPECT_EQ(back.names, run.names);
  EXPECT_EQ(back.time, run.time);
  EXPECT_EQ(back.data, run.data);
  read_meta(back, path);
  EXPECT_EQ(back.wall_seconds, 1.5);
  EXPECT_EQ(back.steps, 42u);
  EXPECT_EQ(back.meta.at("test"), "3");
  fs::remove(path);
  fs::remove(meta_path(path));
}

TEST(Csv, HeaderAndLineEndings) {
  std::ostringstream out;
  sim::RunResult r;
  r.names = {"G1.omega_pu"};
  r.time = {0.0, 0.5};
  r.data = {1.0, 1.001};
  write_csv(r, out);
  EXPECT_EQ(out.str(), "time_s,G1.omega_pu\n0,1\n0.5,1.001\n");
}

TEST(Csv, MissingFileIsAnIoError) {
  EXPECT_THROW(read_csv(temp_file("does_not_exist.csv")), IoError);
}

TEST(Metrics, IdenticalRunsHaveZeroError) {
  const auto a = sine_run(0.0);
  const auto m = compute_metrics(a, a, transient_windows({0.5}));
  for (const auto& s : m.signals) {
    // Resampling onto the same grid may round in the last place.
    EXPECT_LT(s.rms, 1e-15);
    EXPECT_LT(s.max_abs, 1e-15);
    EXPECT_LT(s.avg_max, 1e-15);
  }
}

TEST(Metrics, ConstantOffsetIsRecovered) {
  const auto run = sine_run(0.1);
  const auto ref = sine_run(0.0);
  const auto m = compute_metrics(run, ref, transient_windows({0.5, 1.0}));
  EXPECT_NEAR(m.at("x").rms, 0.1, 1e-9);
  EXPECT_NEAR(m.at("x").max_abs, 0.1, 1e-9);
  EXPECT_NEAR(m.at("x").avg_max, 0.1, 1e-9);
  EXPECT_NEAR(m.at("y").avg_max_relative(), 0.05, 1e-9);
}

TEST(Metrics, MovingAverageRemovesTheFundamental) {
  const auto r = sine_run(0.0, 1.0);
  const auto avg = moving_average(r.time, r.series("x"), 0.02);
  for (std::size_t k = 100; k < avg.size(); ++k) ASSERT_NEAR(avg[k], 0.0, 1e-9);
}

TEST(Metrics, ResampleIsLinearAndClamped) {
  const std::vector<double> t{0.0, 1.0, 2.0};
  const std::vector<double> v{0.0, 10.0, 30.0};
  EXPECT_EQ(resample(t, v, {-1.0, 0.5, 1.5, 3.0}), (std::vector<double>{0.0, 5.0, 20.0, 30.0}));
}

TEST(Metrics, WindowsFollowDisturbances) {
  const auto w = transient_windows({5.0, 5.2}, 0.5);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_EQ(w[1].start, 5.2);
  EXPECT_EQ(w[1].end, 5.7);
}

TEST(Metrics, MissingSignalIsReported) {
  const auto a = sine_run(0.0);
  EXPECT_THROW(compute_metrics(a, a, {}, 50.0, {"nope"}), ConfigError);
}

TEST(Timing, RatiosAgainstBaseline) {
  const std::vector<TimingSample> samples{
      {"pi", "2", 2.0, 0}, {"pi", "3", 1.0, 0}, {"pi", "3", 0.9, 0},
      {"bergeron", "2", 3.0, 1}, {"bergeron", "3", 1.5, 1}};
  const auto r = timing_report(samples);
  EXPECT_EQ(r.baseline, "pi");
  EXPECT_NEAR(r.at("pi").seconds, 2.9, 1e-12);
  EXPECT_NEAR(r.at("bergeron").seconds, 4.5, 1e-12);
  EXPECT_NEAR(r.at("bergeron").ratio, 4.5 / 2.9, 1e-12);
  EXPECT_EQ(r.at("pi").measurements, 3u);
  const auto other = timing_report(samples, "bergeron");
  EXPECT_NEAR(other.at("pi").ratio, 2.9 / 4.5, 1e-12);
  EXPECT_THROW(timing_report(samples, "phasor"), ConfigError);
}

TEST(Scenario, ShippedScenariosLoad) {
  for (int k = 1; k <= 6; ++k) {
    const auto cfg = load_scenario(kScenarios / ("test" + std::to_string(k) + ".json"));
    EXPECT_EQ(cfg.test.id, k);
  }
  const auto suite = load_scenario(kScenarios / "suite.json");
  EXPECT_EQ(suite.tests.size(), 6u);
}

TEST(Scenario, EveryProblemIsListed) {
  const auto p = write_scenario("bad", R"({"test": 2, "duration": 1.0, "colour": "red",
    "models": {"sg": "model99"},
    "events": [{"time": 0.5, "type": "connect", "target": "LD6_step"},
               {"time": 3.0, "type": "connect", "target": "LD6_step"}]})");
  try {
    (void)load_scenario(p);
    FAIL() << "expected a configuration error";
  } catch (const ConfigError& e) {
    const auto& problems = e.problems();
    EXPECT_EQ(problems.size(), 3u);
    std::string all;
    for (const auto& s : problems) all += s + "\n";
    EXPECT_NE(all.find("colour"), std::string::npos) << all;
    EXPECT_NE(all.find("model99"), std::string::npos) << all;
    EXPECT_NE(all.find("before the end of the run"), std::string::npos) << all;
  }
  fs::remove(p);
}

TEST(Scenario, UnknownBusIsNamed) {
  const auto p = write_scenario("bus", R"({"test": 2,
    "loads": [{"id": "LDx", "bus": "bus99", "p_mw": 10, "q_mvar": 1}]})");
  try {
    (void)load_scenario(p);
    FAIL() << "expected a configuration error";
  } catch (const ConfigError& e) {
    std::string all = e.what();
    for (const auto& s : e.problems()) all += s;
    EXPECT_NE(all.find("bus99"), std::string::npos) << all;
  }
  fs::remove(p);
}

TEST(Scenario, CompanionIsSelectable) {
  const auto good = write_scenario("be", R"({"test": 1, "duration": 1.5, "companion": "backward_euler",
    "signals": ["G1.omega_pu"]})");
  auto cfg = load_scenario(good);
  EXPECT_EQ(cfg.companion, powerdyn::network::Discretization::BackwardEuler);
  const auto r = powerdyn::benchmark::run_test(cfg.test, cfg.models, cfg.matrix_options());
  EXPECT_EQ(r.meta.at("companion"), "backward_euler");
  fs::remove(good);

  const auto bad = write_scenario("gear", R"({"test": 1, "companion": "gear"})");
  try {
    (void)load_scenario(bad);
    FAIL() << "expected a configuration error";
  } catch (const ConfigError& e) {
    std::string all = e.what();
    for (const auto& s : e.problems()) all += s;
    EXPECT_NE(all.find("gear"), std::string::npos) << all;
  }
  fs::remove(bad);
}

TEST(Scenario, ZeroDurationWritesHeaderOnly) {
  const auto p = write_scenario("zero", R"({"test": 3, "duration": 0.0, "signals": ["G1.omega_pu"]})");
  auto cfg = load_scenario(p);
  cfg.output = temp_file("zero.csv");
  const auto r = run_scenario(cfg);
  std::ifstream in(cfg.output);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_EQ(r.rows(), 0u);
  EXPECT_EQ(text.str(), "time_s,G1.omega_pu\n");
  fs::remove(p);
  fs::remove(cfg.output);
  fs::remove(meta_path(cfg.output));
}

TEST(Scenario, RunsAreDeterministic) {
  const auto p = write_scenario("det", R"({"test": 5, "duration": 5.5, "output_interval": 0.01})");
  auto cfg = load_scenario(p);
  cfg.output = temp_file("det_a.csv");
  (void)run_scenario(cfg);
  const fs::path first = cfg.output;
  cfg.output = temp_file("det_b.csv");
  (void)run_scenario(cfg);
  auto slurp = [](const fs::path& f) {
    std::ifstream in(f, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  };
  EXPECT_EQ(slurp(first), slurp(cfg.output));
  for (const auto& f : {first, cfg.output}) {
    fs::remove(f);
    fs::remove(meta_path(f));
  }
  fs::remove(p);
}
