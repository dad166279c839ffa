#include "powerdyn/res/cp_table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "powerdyn/core/errors.hpp"

namespace powerdyn::res {

namespace {

constexpr double kBetz = 16.0 / 27.0;

void check_axis(const std::vector<double>& axis, const char* name) {
  if (axis.size() < 2) throw ConfigError(std::string("cP table needs at least two ") + name + " values");
  for (std::size_t k = 1; k < axis.size(); ++k) {
    if (!(axis[k] > axis[k - 1])) {
      throw ConfigError(std::string("cP table ") + name + " grid must be strictly increasing");
    }
  }
}

/// Interval index and weight of x on a monotone axis, clamped to the ends.
std::pair<std::size_t, double> locate(const std::vector<double>& axis, double x) {
  if (x <= axis.front()) return {0, 0.0};
  if (x >= axis.back()) return {axis.size() - 2, 1.0};
  const auto it = std::upper_bound(axis.begin(), axis.end(), x);
  const auto k = static_cast<std::size_t>(it - axis.begin()) - 1;
  return {k, (x - axis[k]) / (axis[k + 1] - axis[k])};
}

std::string format(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::vector<double> numbers(std::istringstream& in, const std::string& where) {
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    double v = 0.0;
    auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (r.ec != std::errc() || r.ptr != tok.data() + tok.size()) {
      throw ConfigError("cP table: bad number '" + tok + "' in " + where);
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

CpTable::CpTable(std::vector<double> lambda, std::vector<double> beta, std::vector<double> values)
    : lambda_(std::move(lambda)), beta_(std::move(beta)), values_(std::move(values)) {
  check_axis(lambda_, "lambda");
  check_axis(beta_, "beta");
  if (values_.size() != lambda_.size() * beta_.size()) {
    throw ConfigError("cP table value count does not match its grid");
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= kBetz)) throw ConfigError("cP table value outside [0, Betz limit]");
  }
  for (std::size_t i = 0; i < lambda_.size(); ++i) {
    for (std::size_t j = 0; j < beta_.size(); ++j) {
      if (at(i, j) > peak_.cp) peak_ = {at(i, j), lambda_[i], beta_[j]};
    }
  }
}

double CpTable::heier_value(double lambda, double beta) {
  if (lambda <= 0.0) return 0.0;
  const double inv = 1.0 / (lambda + 0.08 * beta) - 0.035 / (beta * beta * beta + 1.0);
  const double cp = 0.5176 * (116.0 * inv - 0.4 * beta - 5.0) * std::exp(-21.0 * inv) + 0.0068 * lambda;
  return std::clamp(cp, 0.0, kBetz);
}

CpTable CpTable::heier(const std::vector<double>& lambda, const std::vector<double>& beta) {
  std::vector<double> values;
  values.reserve(lambda.size() * beta.size());
  for (double l : lambda) {
    for (double b : beta) values.push_back(heier_value(l, b));
  }
  return CpTable(lambda, beta, std::move(values));
}

CpTable CpTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open cP table " + path.string());
  std::vector<double> lambda;
  std::vector<double> beta;
  std::vector<double> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    const std::string where = path.filename().string() + ":" + std::to_string(line_no);
    if (line.compare(first, 6, "lambda") == 0) {
      std::string key;
      row >> key;
      lambda = numbers(row, where);
    } else if (line.compare(first, 4, "beta") == 0) {
      std::string key;
      row >> key;
      beta = numbers(row, where);
    } else {
      const auto vals = numbers(row, where);
      if (vals.size() != beta.size()) throw ConfigError("cP table row width mismatch at " + where);
      values.insert(values.end(), vals.begin(), vals.end());
    }
  }
  return CpTable(std::move(lambda), std::move(beta), std::move(values));
}

void CpTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write cP table " + path.string());
  out << "# power coefficient; rows follow lambda, columns follow pitch in degrees\n";
  out << "lambda";
  for (double l : lambda_) out << ' ' << format(l);
  out << "\nbeta";
  for (double b : beta_) out << ' ' << format(b);
  out << '\n';
  for (std::size_t i = 0; i < lambda_.size(); ++i) {
    for (std::size_t j = 0; j < beta_.size(); ++j) out << (j ? " " : "") << format(at(i, j));
    out << '\n';
  }
  if (!out) throw IoError("failed writing cP table " + path.string());
}

double CpTable::operator()(double lambda, double beta) const {
  const auto [i, wl] = locate(lambda_, lambda);
  const auto [j, wb] = locate(beta_, beta);
  const double c00 = at(i, j);
  const double c01 = at(i, j + 1);
  const double c10 = at(i + 1, j);
  const double c11 = at(i + 1, j + 1);
  return (1 - wl) * ((1 - wb) * c00 + wb * c01) + wl * ((1 - wb) * c10 + wb * c11);
}

}  // namespace powerdyn::res
