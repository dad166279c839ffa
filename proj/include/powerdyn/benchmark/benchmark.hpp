#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "powerdyn/network/network_model.hpp"
#include "powerdyn/res/sources.hpp"
#include "powerdyn/sim/simulation.hpp"

namespace powerdyn::benchmark {

enum class SgModel { Simplified, Model22, Model22Sat };
enum class ConverterModel { EmtAverage, Phasor };
enum class Axis { None, Sg, Line, Converter, Res };

SgModel parse_sg_model(const std::string& tag);
std::string to_string(SgModel model);
ConverterModel parse_converter_model(const std::string& tag);
std::string to_string(ConverterModel model);
Axis parse_axis(const std::string& tag);
std::string to_string(Axis axis);

/// One variant per component. The converter model fixes the simulation
/// mode of the whole run.
struct ModelSelection {
  SgModel sg = SgModel::Model22;
  network::LineModel line = network::LineModel::Pi;
  ConverterModel converter = ConverterModel::EmtAverage;
  res::ResKind res = res::ResKind::IdealDc;

  SimulationMode mode() const;
  /// Compact label such as "sg=model22,line=pi,converter=emt_avg,res=ideal_dc".
  std::string label() const;
  /// Tag of the component selected on an axis.
  std::string variant(Axis axis) const;
};

/// Selections that vary one axis around a base group, in a fixed order.
std::vector<ModelSelection> axis_variants(const ModelSelection& base, Axis axis);

/// A disturbance test: the network elements it switches, its events, and
/// how long to simulate.
struct TestCase {
  int id = 0;
  std::string name;
  double duration = 10.0;
  std::vector<network::Load> loads;
  std::vector<network::Fault> faults;
  std::vector<network::Breaker> breakers;
  std::vector<sim::Event> events;
  /// Event times that open a transient window for metrics.
  std::vector<double> disturbance_times() const;
};

/// The six published tests (1..6). Throws ConfigError for other ids.
TestCase make_test(int id);

/// Reads the benchmark data files in `data_dir` and assembles the system
/// for a selection, with the elements of `test` added to the network.
/// A missing or malformed file raises ConfigError naming the file.
sim::System build_benchmark(const ModelSelection& selection, const std::filesystem::path& data_dir,
                            const TestCase* test = nullptr);

/// Dispatch share of the converter rating before the first event: 0.5 for
/// the setpoint test, 0.8 otherwise.
double initial_dispatch(int test_id);

struct MatrixRun {
  int test_id = 0;
  ModelSelection selection;
  sim::RunResult result;
};

struct MatrixOptions {
  std::filesystem::path data_dir;
  double emt_step = IntegratorConfig::kDefaultEmtStep;
  double phasor_step = IntegratorConfig::kDefaultPhasorStep;
  double output_interval = 1e-3;
  std::vector<std::string> signals;  // empty records everything
  network::Discretization discretization = network::Discretization::Trapezoidal;  // EMT companions
  unsigned workers = 1;
  /// Called after each finished run, in completion order.
  std::function<void(const MatrixRun&)> on_done;
};

/// Runs every test for every variant on `axis`, base group elsewhere.
/// Results come back ordered by variant, then test. A failing run raises
/// the original error annotated with the test and the variant.
std::vector<MatrixRun> run_matrix(const std::vector<int>& tests, const ModelSelection& base, Axis axis,
                                  const MatrixOptions& options);

/// Runs a single test for a selection with default steps.
sim::RunResult run_test(const TestCase& test, const ModelSelection& selection, const MatrixOptions& options);

}  // namespace powerdyn::benchmark
