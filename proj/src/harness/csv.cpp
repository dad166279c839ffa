#include "powerdyn/harness/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "powerdyn/core/errors.hpp"

namespace powerdyn::harness {

namespace fs = std::filesystem;

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_csv(const sim::RunResult& run, std::ostream& out) {
  out << "time_s";
  for (const auto& n : run.names) out << ',' << n;
  out << '\n';
  const std::size_t cols = run.names.size();
  std::string line;
  for (std::size_t r = 0; r < run.rows(); ++r) {
    line = format_double(run.time[r]);
    for (std::size_t c = 0; c < cols; ++c) {
      line += ',';
      line += format_double(run.data[r * cols + c]);
    }
    line += '\n';
    out << line;
  }
}

void write_csv(const sim::RunResult& run, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_csv(run, out);
  if (!out) throw IoError("failed writing " + path.string());
}

namespace {

double parse_cell(std::string_view cell, const std::string& where) {
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
    throw IoError(where + ": not a number '" + std::string(cell) + "'");
  }
  return v;
}

}  // namespace

sim::RunResult read_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  sim::RunResult run;
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + ": empty file");
  {
    std::stringstream header(line);
    std::string name;
    std::getline(header, name, ',');
    if (name != "time_s") throw IoError(path.string() + ": first column must be time_s");
    while (std::getline(header, name, ',')) run.names.push_back(name);
  }
  const std::size_t cols = run.names.size();
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path.filename().string() + ":" + std::to_string(line_no);
    std::size_t start = 0;
    std::size_t field = 0;
    for (;;) {
      const std::size_t end = line.find(',', start);
      const std::string_view cell(line.data() + start, (end == std::string::npos ? line.size() : end) - start);
      const double v = parse_cell(cell, where);
      if (field == 0) {
        run.time.push_back(v);
      } else {
        run.data.push_back(v);
      }
      ++field;
      if (end == std::string::npos) break;
      start = end + 1;
    }
    if (field != cols + 1) {
      throw IoError(where + ": expected " + std::to_string(cols + 1) + " fields, found " + std::to_string(field));
    }
  }
  return run;
}

fs::path meta_path(const fs::path& csv) {
  fs::path p = csv;
  p.replace_extension(".meta.json");
  return p;
}

void write_meta(const sim::RunResult& run, const fs::path& csv) {
  nlohmann::ordered_json j;
  j["wall_seconds"] = run.wall_seconds;
  j["steps"] = run.steps;
  j["meta"] = run.meta;
  std::ofstream out(meta_path(csv), std::ios::binary);
  if (!out) throw IoError("cannot write " + meta_path(csv).string());
  out << j.dump(2) << '\n';
}

void read_meta(sim::RunResult& run, const fs::path& csv) {
  const fs::path p = meta_path(csv);
  std::ifstream in(p);
  if (!in) throw IoError("cannot open " + p.string());
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    run.wall_seconds = j.at("wall_seconds");
    run.steps = j.at("steps");
    run.meta = j.at("meta").get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(p.string() + ": " + e.what());
  }
}

}  // namespace powerdyn::harness
