#include "powerdyn/network/bergeron.hpp"

#include <cmath>

#include "powerdyn/core/errors.hpp"

namespace powerdyn::network {

BergeronMode::BergeronMode(double r_total, double l_total, double c_total, double h) {
  if (!(l_total > 0.0) || !(c_total > 0.0) || r_total < 0.0 || !(h > 0.0)) {
    throw ConfigError("Bergeron mode needs L > 0, C > 0, R >= 0");
  }
  zc_ = std::sqrt(l_total / c_total);
  tau_ = std::sqrt(l_total * c_total);
  if (tau_ < h) {
    throw ConfigError("line travel time " + std::to_string(tau_) + " s is shorter than the step " +
                      std::to_string(h) + " s; model this line as PI instead");
  }
  const double quarter = r_total / 4.0;
  z_ = zc_ + quarter;
  hc_ = (zc_ - quarter) / (zc_ + quarter);
  const double lag = tau_ / h;
  lag_steps_ = static_cast<std::size_t>(std::floor(lag));
  lag_frac_ = lag - static_cast<double>(lag_steps_);
  buffer_.assign(lag_steps_ + 1, Sample{});
  head_ = 0;
}

BergeronMode::Sample BergeronMode::at_offset(std::size_t back) const {
  const std::size_t n = buffer_.size();
  return buffer_[(head_ + n - (back - 1)) % n];
}

std::pair<double, double> BergeronMode::history() const {
  const Sample s0 = at_offset(lag_steps_);
  Sample s = s0;
  if (lag_frac_ > 0.0) {
    const Sample s1 = at_offset(lag_steps_ + 1);
    const double w = lag_frac_;
    s = {(1 - w) * s0.v_k + w * s1.v_k, (1 - w) * s0.v_m + w * s1.v_m,
         (1 - w) * s0.i_km + w * s1.i_km, (1 - w) * s0.i_mk + w * s1.i_mk};
  }
  const double g = 1.0 / z_;
  const double far = 0.5 * (1.0 + hc_);
  const double near = 0.5 * (1.0 - hc_);
  const double ik = -far * (g * s.v_m + hc_ * s.i_mk) - near * (g * s.v_k + hc_ * s.i_km);
  const double im = -far * (g * s.v_k + hc_ * s.i_km) - near * (g * s.v_m + hc_ * s.i_mk);
  return {ik, im};
}

std::pair<double, double> BergeronMode::record(double v_k, double v_m, double i_hist_k,
                                               double i_hist_m) {
  const double g = 1.0 / z_;
  const double i_km = g * v_k + i_hist_k;
  const double i_mk = g * v_m + i_hist_m;
  head_ = (head_ + 1) % buffer_.size();
  buffer_[head_] = {v_k, v_m, i_km, i_mk};
  return {i_km, i_mk};
}

void BergeronMode::prime(const std::function<Sample(std::size_t)>& sample_back) {
  const std::size_t n = buffer_.size();
  head_ = n - 1;
  for (std::size_t back = 1; back <= n; ++back) {
    buffer_[(head_ + n - (back - 1)) % n] = sample_back(back);
  }
}

}  // namespace powerdyn::network
