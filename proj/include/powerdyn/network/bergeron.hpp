#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace powerdyn::network {

/// One propagation mode of a Bergeron line.
///
/// Each end is a conductance 1/Z to ground in parallel with a history
/// current source; the ends couple only through history delayed by the
/// travel time. Series resistance is lumped R/4 - R/2 - R/4 along two
/// lossless half sections, which collapses to
///   Z = Zc + R/4,  hc = (Zc - R/4) / (Zc + R/4)
///   I_k(t) = -(1+hc)/2 [v_m/Z + hc i_mk](t-tau) - (1-hc)/2 [v_k/Z + hc i_km](t-tau)
/// with i_km = v_k/Z + I_k the current entering the line at end k.
/// History between stored samples is interpolated linearly.
class BergeronMode {
 public:
  struct Sample {
    double v_k = 0.0;
    double v_m = 0.0;
    double i_km = 0.0;
    double i_mk = 0.0;
  };

  /// Totals over the line length: r (ohm or p.u.), l in H (or p.u. s), c in
  /// F (or p.u. s). The travel time sqrt(l c) must be at least one step.
  BergeronMode(double r_total, double l_total, double c_total, double h);

  double characteristic_impedance() const { return zc_; }
  double travel_time() const { return tau_; }
  double conductance() const { return 1.0 / z_; }
  /// Number of stored past samples.
  std::size_t depth() const { return buffer_.size(); }

  /// History sources (I_k, I_m) for the step about to be solved.
  std::pair<double, double> history() const;

  /// Stores the solved end voltages and returns the end currents
  /// (i_km, i_mk) for this step.
  std::pair<double, double> record(double v_k, double v_m, double i_hist_k, double i_hist_m);

  /// Fills the history; `sample_back(j)` returns the state j steps before
  /// the first step to be solved (j = 1 .. depth()).
  void prime(const std::function<Sample(std::size_t)>& sample_back);

 private:
  Sample at_offset(std::size_t back) const;  // back >= 1

  double zc_;
  double tau_;
  double z_;
  double hc_;
  std::size_t lag_steps_;
  double lag_frac_;
  std::vector<Sample> buffer_;
  std::size_t head_ = 0;  // index of the most recent sample
};

}  // namespace powerdyn::network
