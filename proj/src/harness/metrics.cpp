#include "powerdyn/harness/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "powerdyn/core/errors.hpp"

namespace powerdyn::harness {

std::vector<Window> transient_windows(const std::vector<double>& event_times, double width) {
  std::vector<Window> out;
  out.reserve(event_times.size());
  for (double t : event_times) out.push_back({t, t + width});
  return out;
}

const SignalMetrics& MetricsReport::at(const std::string& name) const {
  for (const auto& s : signals) {
    if (s.name == name) return s;
  }
  throw ConfigError("signal '" + name + "' not in metrics report");
}

std::vector<double> resample(const std::vector<double>& t, const std::vector<double>& v,
                             const std::vector<double>& at) {
  std::vector<double> out(at.size(), 0.0);
  if (t.empty()) return out;
  std::size_t j = 0;
  for (std::size_t i = 0; i < at.size(); ++i) {
    const double x = at[i];
    if (x <= t.front()) {
      out[i] = v.front();
      continue;
    }
    if (x >= t.back()) {
      out[i] = v.back();
      continue;
    }
    // Query points are nondecreasing in practice; fall back to a search
    // when they are not.
    if (j >= t.size() || t[j] > x) j = 0;
    while (j + 1 < t.size() && t[j + 1] < x) ++j;
    const double w = (x - t[j]) / (t[j + 1] - t[j]);
    out[i] = w == 0.0 ? v[j] : v[j] + w * (v[j + 1] - v[j]);
  }
  return out;
}

std::vector<double> moving_average(const std::vector<double>& t, const std::vector<double>& v, double window) {
  std::vector<double> out(v.size(), 0.0);
  if (v.empty()) return out;
  const double dt = t.size() > 1 ? t[1] - t[0] : window;
  const std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(window / dt)));
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    sum += v[i];
    if (i >= n) sum -= v[i - n];
    out[i] = sum / static_cast<double>(std::min(i + 1, n));
  }
  return out;
}

MetricsReport compute_metrics(const sim::RunResult& run, const sim::RunResult& reference,
                              const std::vector<Window>& windows, double f_nom,
                              const std::vector<std::string>& signals) {
  const std::vector<std::string> wanted = signals.empty() ? reference.names : signals;
  std::vector<std::string> missing;
  for (const auto& name : wanted) {
    const bool in_run = std::find(run.names.begin(), run.names.end(), name) != run.names.end();
    const bool in_ref = std::find(reference.names.begin(), reference.names.end(), name) != reference.names.end();
    if (!in_run) missing.push_back("signal '" + name + "' missing from run");
    if (!in_ref) missing.push_back("signal '" + name + "' missing from reference");
  }
  if (signals.empty()) {
    for (const auto& name : run.names) {
      if (std::find(reference.names.begin(), reference.names.end(), name) == reference.names.end()) {
        missing.push_back("signal '" + name + "' missing from reference");
      }
    }
  }
  if (!missing.empty()) throw ConfigError(missing);

  MetricsReport report;
  report.wall_seconds = run.wall_seconds;
  report.reference_wall_seconds = reference.wall_seconds;
  if (run.wall_seconds > 0.0 && reference.wall_seconds > 0.0) {
    report.relative_runtime = run.wall_seconds / reference.wall_seconds;
  }

  // Common grid: reference samples inside both time ranges and outside
  // every transient window.
  std::vector<std::size_t> keep;
  if (!run.time.empty() && !reference.time.empty()) {
    const double lo = std::max(run.time.front(), reference.time.front());
    const double hi = std::min(run.time.back(), reference.time.back());
    for (std::size_t i = 0; i < reference.time.size(); ++i) {
      const double t = reference.time[i];
      if (t < lo || t > hi) continue;
      const bool excluded =
          std::any_of(windows.begin(), windows.end(), [t](const Window& w) { return t >= w.start && t <= w.end; });
      if (!excluded) keep.push_back(i);
    }
  }
  std::vector<double> grid;
  grid.reserve(keep.size());
  for (std::size_t i : keep) grid.push_back(reference.time[i]);

  const double cycle = 1.0 / f_nom;
  for (const auto& name : wanted) {
    SignalMetrics m;
    m.name = name;
    m.samples = keep.size();
    const std::vector<double> ref = reference.series(name);
    const std::vector<double> val = run.series(name);
    const std::vector<double> ref_avg = moving_average(reference.time, ref, cycle);
    const std::vector<double> val_avg = moving_average(run.time, val, cycle);
    const std::vector<double> val_at = resample(run.time, val, grid);
    const std::vector<double> val_avg_at = resample(run.time, val_avg, grid);
    double sum = 0.0;
    double sum_avg = 0.0;
    double level = 0.0;
    for (std::size_t k = 0; k < keep.size(); ++k) {
      const double d = val_at[k] - ref[keep[k]];
      const double da = val_avg_at[k] - ref_avg[keep[k]];
      sum += d * d;
      sum_avg += da * da;
      level += ref_avg[keep[k]] * ref_avg[keep[k]];
      m.max_abs = std::max(m.max_abs, std::abs(d));
      m.avg_max = std::max(m.avg_max, std::abs(da));
    }
    if (!keep.empty()) {
      const double n = static_cast<double>(keep.size());
      m.rms = std::sqrt(sum / n);
      m.avg_rms = std::sqrt(sum_avg / n);
      m.ref_level = std::sqrt(level / n);
    }
    report.signals.push_back(m);
  }
  return report;
}

}  // namespace powerdyn::harness
