#pragma once

#include <filesystem>
#include <vector>

namespace powerdyn::res {

/// Rotor power coefficient over tip-speed ratio and pitch (degrees),
/// interpolated bilinearly and clamped at the grid edges.
///
/// File format (text, '#' starts a comment line):
///   lambda <n values>
///   beta <m values>
///   <n rows of m values>, row i belonging to lambda[i]
class CpTable {
 public:
  CpTable(std::vector<double> lambda, std::vector<double> beta, std::vector<double> values);

  /// Analytic Heier-type approximation sampled on the given grid.
  static CpTable heier(const std::vector<double>& lambda, const std::vector<double>& beta);
  /// Pointwise value of the analytic approximation (clamped at zero).
  static double heier_value(double lambda, double beta);

  static CpTable load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  double operator()(double lambda, double beta) const;

  struct Peak {
    double cp = 0.0;
    double lambda = 0.0;
    double beta = 0.0;
  };
  /// Largest tabulated value (found once at construction).
  const Peak& peak() const { return peak_; }

  const std::vector<double>& lambda_grid() const { return lambda_; }
  const std::vector<double>& beta_grid() const { return beta_; }
  double at(std::size_t i_lambda, std::size_t j_beta) const { return values_[i_lambda * beta_.size() + j_beta]; }

 private:
  std::vector<double> lambda_;
  std::vector<double> beta_;
  std::vector<double> values_;
  Peak peak_;
};

}  // namespace powerdyn::res
