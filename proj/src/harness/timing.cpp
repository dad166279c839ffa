#include "powerdyn/harness/timing.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <ostream>
#include <set>

#include "json.hpp"
#include "powerdyn/core/errors.hpp"
#include "powerdyn/harness/csv.hpp"

namespace powerdyn::harness {

namespace fs = std::filesystem;

const TimingEntry& TimingReport::at(const std::string& label) const {
  for (const auto& e : entries) {
    if (e.label == label) return e;
  }
  throw ConfigError("label '" + label + "' not in timing report");
}

TimingReport timing_report(const std::vector<TimingSample>& samples, const std::string& baseline) {
  struct Acc {
    int order = 0;
    std::map<std::string, double> best;  // case -> minimum seconds
    std::size_t measurements = 0;
  };
  std::map<std::string, Acc> by_label;
  for (const auto& s : samples) {
    Acc& a = by_label[s.label];
    a.order = s.order;
    auto [it, fresh] = a.best.emplace(s.case_id, s.seconds);
    if (!fresh) it->second = std::min(it->second, s.seconds);
    ++a.measurements;
  }
  if (by_label.empty()) return {};

  std::set<std::string> common;
  bool first = true;
  for (const auto& [label, a] : by_label) {
    std::set<std::string> cases;
    for (const auto& [c, t] : a.best) cases.insert(c);
    if (first) {
      common = cases;
      first = false;
    } else {
      std::set<std::string> keep;
      std::set_intersection(common.begin(), common.end(), cases.begin(), cases.end(),
                            std::inserter(keep, keep.begin()));
      common = keep;
    }
  }

  TimingReport report;
  for (const auto& [label, a] : by_label) {
    TimingEntry e;
    e.label = label;
    e.measurements = a.measurements;
    for (const auto& c : common) e.seconds += a.best.at(c);
    e.cases = common.size();
    report.entries.push_back(e);
  }
  std::stable_sort(report.entries.begin(), report.entries.end(), [&](const TimingEntry& x, const TimingEntry& y) {
    return by_label.at(x.label).order < by_label.at(y.label).order;
  });
  report.baseline = baseline.empty() ? report.entries.front().label : baseline;
  const double base = report.at(report.baseline).seconds;
  for (auto& e : report.entries) e.ratio = base > 0.0 ? e.seconds / base : 0.0;
  return report;
}

std::vector<TimingSample> load_timing_samples(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.size() > 10 && name.ends_with(".meta.json")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<TimingSample> out;
  for (const auto& f : files) {
    std::ifstream in(f);
    try {
      const nlohmann::json j = nlohmann::json::parse(in);
      const auto& meta = j.at("meta");
      TimingSample s;
      s.seconds = j.at("wall_seconds");
      s.label = meta.contains("variant") ? meta.at("variant").get<std::string>() : f.stem().stem().string();
      s.case_id = meta.contains("test") ? meta.at("test").get<std::string>() : "";
      s.order = meta.contains("variant_index") ? std::stoi(meta.at("variant_index").get<std::string>()) : 0;
      out.push_back(s);
    } catch (const std::exception& e) {
      throw IoError(f.string() + ": " + e.what());
    }
  }
  return out;
}

void write_timing_csv(const TimingReport& report, std::ostream& out) {
  out << "label,seconds,ratio,cases,measurements\n";
  for (const auto& e : report.entries) {
    out << e.label << ',' << format_double(e.seconds) << ',' << format_double(e.ratio) << ',' << e.cases << ','
        << e.measurements << '\n';
  }
}

void write_timing_markdown(const TimingReport& report, std::ostream& out) {
  out << "| label | seconds | ratio vs " << report.baseline << " |\n|---|---:|---:|\n";
  char buf[64];
  for (const auto& e : report.entries) {
    std::snprintf(buf, sizeof buf, "| %s | %.3f | %.3f |\n", e.label.c_str(), e.seconds, e.ratio);
    out << buf;
  }
}

}  // namespace powerdyn::harness
