#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace powerdyn::harness {

/// One wall-clock measurement of a (label, case) pair. Repeats of the same
/// pair are reduced to their minimum.
struct TimingSample {
  std::string label;     // model variant being compared
  std::string case_id;   // e.g. the test id
  double seconds = 0.0;
  int order = 0;         // position of the label in the report
};

struct TimingEntry {
  std::string label;
  double seconds = 0.0;  // sum over cases of the per-case minimum
  double ratio = 0.0;    // seconds / baseline seconds
  std::size_t cases = 0;
  std::size_t measurements = 0;
};

struct TimingReport {
  std::string baseline;
  std::vector<TimingEntry> entries;

  const TimingEntry& at(const std::string& label) const;
};

/// Minimum-of-N per (label, case), summed per label, relative to
/// `baseline` (the lowest-order label when empty). Only cases measured for
/// every label count, so totals compare like with like.
TimingReport timing_report(const std::vector<TimingSample>& samples, const std::string& baseline = "");

/// Collects the `.meta.json` sidecars below `dir`.
std::vector<TimingSample> load_timing_samples(const std::filesystem::path& dir);

/// Table with columns label, seconds, ratio, cases, measurements.
void write_timing_csv(const TimingReport& report, std::ostream& out);
void write_timing_markdown(const TimingReport& report, std::ostream& out);

}  // namespace powerdyn::harness
