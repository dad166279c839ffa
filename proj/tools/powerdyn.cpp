// Command-line front end: run a scenario, sweep one model axis, compare two
// runs, and tabulate wall-clock timings.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "powerdyn/benchmark/benchmark.hpp"
#include "powerdyn/core/errors.hpp"
#include "powerdyn/harness/csv.hpp"
#include "powerdyn/harness/metrics.hpp"
#include "powerdyn/harness/scenario.hpp"
#include "powerdyn/harness/timing.hpp"

namespace fs = std::filesystem;
using namespace powerdyn;

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kNumeric = 3, kIo = 4 };

int cmd_run(const fs::path& config, const std::string& output) {
  harness::ScenarioConfig cfg = harness::load_scenario(config);
  if (!output.empty()) cfg.output = output;
  const sim::RunResult r = harness::run_scenario(cfg);
  std::printf("%s: %zu rows x %zu signals, %zu steps, %.3f s integration -> %s\n",
              cfg.models.label().c_str(), r.rows(), r.names.size(), r.steps, r.wall_seconds,
              cfg.output.string().c_str());
  return kOk;
}

int cmd_matrix(const fs::path& config, const std::string& axis_tag, const std::string& output, int repeats,
               unsigned workers) {
  harness::ScenarioConfig cfg = harness::load_scenario(config);
  const benchmark::Axis axis = benchmark::parse_axis(axis_tag);
  if (repeats > 0) cfg.repeats = repeats;
  if (workers > 0) cfg.workers = workers;
  const fs::path dir = output.empty() ? fs::path(config.stem().string() + "_" + axis_tag) : fs::path(output);

  benchmark::MatrixOptions options = cfg.matrix_options();
  options.on_done = [](const benchmark::MatrixRun& run) {
    std::fprintf(stderr, "  test %d %-12s %.3f s\n", run.test_id, run.result.meta.at("variant").c_str(),
                 run.result.wall_seconds);
  };
  std::vector<benchmark::MatrixRun> runs = benchmark::run_matrix(cfg.tests, cfg.models, axis, options);
  // Further repeats only refine the timing: keep the minimum per run.
  for (int k = 1; k < cfg.repeats; ++k) {
    const auto again = benchmark::run_matrix(cfg.tests, cfg.models, axis, options);
    for (std::size_t i = 0; i < runs.size(); ++i) {
      runs[i].result.wall_seconds = std::min(runs[i].result.wall_seconds, again[i].result.wall_seconds);
    }
  }

  std::vector<harness::TimingSample> samples;
  for (auto& run : runs) {
    run.result.meta["repeats"] = std::to_string(cfg.repeats);
    run.result.meta["seed"] = std::to_string(cfg.seed);
    const std::string variant = run.result.meta.at("variant");
    const fs::path csv = dir / variant / ("test" + std::to_string(run.test_id) + ".csv");
    harness::write_csv(run.result, csv);
    harness::write_meta(run.result, csv);
    samples.push_back({variant, std::to_string(run.test_id), run.result.wall_seconds,
                       std::stoi(run.result.meta.at("variant_index"))});
  }
  const harness::TimingReport report = harness::timing_report(samples);
  std::ofstream table(dir / "timing.csv", std::ios::binary);
  if (!table) throw IoError("cannot write " + (dir / "timing.csv").string());
  harness::write_timing_csv(report, table);
  harness::write_timing_markdown(report, std::cout);
  return kOk;
}

std::vector<double> parse_times(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

int cmd_metrics(const fs::path& run_csv, const fs::path& ref_csv, std::vector<std::string> signals,
                std::vector<double> events, double window, double f_nom) {
  sim::RunResult run = harness::read_csv(run_csv);
  sim::RunResult ref = harness::read_csv(ref_csv);
  if (fs::exists(harness::meta_path(run_csv))) harness::read_meta(run, run_csv);
  if (fs::exists(harness::meta_path(ref_csv))) harness::read_meta(ref, ref_csv);
  if (events.empty() && ref.meta.count("disturbance_times")) events = parse_times(ref.meta.at("disturbance_times"));
  const auto report =
      harness::compute_metrics(run, ref, harness::transient_windows(events, window), f_nom, signals);
  std::printf("signal,rms,max_abs,avg_rms,avg_max,avg_max_rel,samples\n");
  for (const auto& m : report.signals) {
    std::printf("%s,%s,%s,%s,%s,%s,%zu\n", m.name.c_str(), harness::format_double(m.rms).c_str(),
                harness::format_double(m.max_abs).c_str(), harness::format_double(m.avg_rms).c_str(),
                harness::format_double(m.avg_max).c_str(), harness::format_double(m.avg_max_relative()).c_str(),
                m.samples);
  }
  if (report.relative_runtime > 0.0) {
    std::printf("# wall_seconds %.6f reference %.6f relative_runtime %.4f\n", report.wall_seconds,
                report.reference_wall_seconds, report.relative_runtime);
  }
  return kOk;
}

int cmd_timing(const fs::path& dir, const std::string& baseline) {
  const auto samples = harness::load_timing_samples(dir);
  if (samples.size() < 2) throw ConfigError("timing needs at least two runs under " + dir.string());
  const harness::TimingReport report = harness::timing_report(samples, baseline);
  harness::write_timing_markdown(report, std::cout);
  std::ofstream table(dir / "timing.csv", std::ios::binary);
  if (!table) throw IoError("cannot write " + (dir / "timing.csv").string());
  harness::write_timing_csv(report, table);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-fidelity power system dynamic simulator"};
  app.require_subcommand(1);

  std::string config;
  std::string output;
  auto* run = app.add_subcommand("run", "Run one scenario and write its CSV");
  run->add_option("config", config, "Scenario file")->required();
  run->add_option("-o,--output", output, "CSV path (overrides the scenario)");

  std::string axis;
  int repeats = 0;
  unsigned workers = 0;
  auto* matrix = app.add_subcommand("matrix", "Vary one model axis around the base group");
  matrix->add_option("config", config, "Scenario file")->required();
  matrix->add_option("--axis", axis, "Axis to vary")
      ->required()
      ->check(CLI::IsMember({"sg", "line", "converter", "res"}));
  matrix->add_option("-o,--output", output, "Output directory");
  matrix->add_option("--repeats", repeats, "Timing repeats (minimum is kept)")->check(CLI::PositiveNumber);
  matrix->add_option("--workers", workers, "Concurrent runs")->check(CLI::PositiveNumber);

  std::string run_csv;
  std::string ref_csv;
  std::vector<std::string> signals;
  std::string events;
  double window = 0.5;
  double f_nom = 50.0;
  auto* metrics = app.add_subcommand("metrics", "Compare a run against a reference run");
  metrics->add_option("run", run_csv, "Run CSV")->required();
  metrics->add_option("ref", ref_csv, "Reference CSV")->required();
  metrics->add_option("--signals", signals, "Signals to compare (default: all)");
  metrics->add_option("--events", events, "Comma-separated disturbance times (default: from the sidecar)");
  metrics->add_option("--window", window, "Transient window after each disturbance, s");
  metrics->add_option("--f-nom", f_nom, "Nominal frequency for the moving average, Hz");

  std::string dir;
  std::string baseline;
  auto* timing = app.add_subcommand("timing", "Tabulate run timings found in a directory");
  timing->add_option("dir", dir, "Directory with run sidecars")->required();
  timing->add_option("--baseline", baseline, "Label used as the ratio baseline");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config, output);
    if (*matrix) return cmd_matrix(config, axis, output, repeats, workers);
    if (*metrics) return cmd_metrics(run_csv, ref_csv, signals, parse_times(events), window, f_nom);
    if (*timing) return cmd_timing(dir, baseline);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error:\n");
    if (e.problems().empty()) {
      std::fprintf(stderr, "  %s\n", e.what());
    } else {
      for (const auto& p : e.problems()) std::fprintf(stderr, "  %s\n", p.c_str());
    }
    return kConfig;
  } catch (const NumericAbort& e) {
    std::fprintf(stderr, "numeric abort: %s\n", e.what());
    return kNumeric;
  } catch (const IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "configuration error: bad number (%s)\n", e.what());
    return kConfig;
  }
  return kOk;
}
