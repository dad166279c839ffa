#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "powerdyn/benchmark/benchmark.hpp"
#include "powerdyn/sim/simulation.hpp"

namespace powerdyn::harness {

/// A scenario file resolved into everything needed to run it. Relative
/// paths in the file are taken relative to the file itself.
struct ScenarioConfig {
  std::filesystem::path source;     // the scenario file
  std::filesystem::path data_dir;   // benchmark parameter files
  benchmark::TestCase test;         // published test with any overrides applied
  std::vector<int> tests;           // for matrix runs; defaults to {test.id}
  benchmark::ModelSelection models;
  double emt_step = IntegratorConfig::kDefaultEmtStep;
  double phasor_step = IntegratorConfig::kDefaultPhasorStep;
  double output_interval = 1e-3;
  network::Discretization companion = network::Discretization::Trapezoidal;
  std::vector<std::string> signals;
  std::filesystem::path output;     // CSV path (run) or directory (matrix)
  unsigned seed = 1;
  int repeats = 1;
  unsigned workers = 1;
  double window_s = 0.5;            // transient-window width for metrics

  benchmark::MatrixOptions matrix_options() const;
};

/// Parses and validates a scenario file. Every problem found is reported
/// in one ConfigError.
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Runs the scenario and writes the CSV and its metadata sidecar.
sim::RunResult run_scenario(const ScenarioConfig& config);

}  // namespace powerdyn::harness
