#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "powerdyn/sim/simulation.hpp"

namespace powerdyn::harness {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// CSV with a `time_s` column followed by the signal columns, LF endings.
void write_csv(const sim::RunResult& run, std::ostream& out);
void write_csv(const sim::RunResult& run, const std::filesystem::path& path);

/// Parses a CSV written by write_csv. Timing and metadata are not part of
/// the CSV and come back empty (see read_meta).
sim::RunResult read_csv(const std::filesystem::path& path);

/// Sidecar next to a CSV: `run.csv` -> `run.meta.json`.
std::filesystem::path meta_path(const std::filesystem::path& csv);
/// Writes wall-clock seconds, step count and metadata to the sidecar.
void write_meta(const sim::RunResult& run, const std::filesystem::path& csv);
/// Fills wall_seconds, steps and meta of `run` from the sidecar.
void read_meta(sim::RunResult& run, const std::filesystem::path& csv);

}  // namespace powerdyn::harness
