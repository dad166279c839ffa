#pragma once

#include <string>
#include <vector>

#include "powerdyn/sim/simulation.hpp"

namespace powerdyn::harness {

struct Window {
  double start = 0.0;
  double end = 0.0;
};

/// [t, t + width] for every disturbance time.
std::vector<Window> transient_windows(const std::vector<double>& event_times, double width = 0.5);

/// Errors of one signal against the reference over the retained samples.
struct SignalMetrics {
  std::string name;
  double rms = 0.0;           // RMS of the raw difference
  double max_abs = 0.0;       // largest raw difference
  double avg_rms = 0.0;       // RMS of the difference of one-cycle moving averages
  double avg_max = 0.0;       // largest difference of one-cycle moving averages
  double ref_level = 0.0;     // RMS of the averaged reference, for relative figures
  std::size_t samples = 0;

  /// avg_max relative to the reference level (0 when the level is 0).
  double avg_max_relative() const { return ref_level > 0.0 ? avg_max / ref_level : 0.0; }
};

struct MetricsReport {
  std::vector<SignalMetrics> signals;
  double wall_seconds = 0.0;
  double reference_wall_seconds = 0.0;
  /// Run wall-clock over reference wall-clock (0 when either is unknown).
  double relative_runtime = 0.0;

  const SignalMetrics& at(const std::string& name) const;
};

/// Linear interpolation of (t, v) at `at`, clamped at the ends.
std::vector<double> resample(const std::vector<double>& t, const std::vector<double>& v,
                             const std::vector<double>& at);

/// Trailing moving average over `window` seconds of a uniformly sampled
/// series. Before a full window is available the mean of the samples so
/// far is used.
std::vector<double> moving_average(const std::vector<double>& t, const std::vector<double>& v, double window);

/// Compares `run` against `reference` on the reference samples inside the
/// common time range, skipping samples within any window. `signals` empty
/// means every reference signal. Signals missing from either run raise a
/// ConfigError listing all of them.
MetricsReport compute_metrics(const sim::RunResult& run, const sim::RunResult& reference,
                              const std::vector<Window>& windows, double f_nom = 50.0,
                              const std::vector<std::string>& signals = {});

}  // namespace powerdyn::harness
