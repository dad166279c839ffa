#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "powerdyn/network/network_model.hpp"

namespace powerdyn::network {

using Complex = std::complex<double>;

/// Balanced operating point used to start a run: positive-sequence phasors
/// (phase a, peak p.u.) per node and the source phasor of every port
/// (internal voltage for impedance ports, injected current otherwise).
struct SteadyState {
  std::vector<Complex> node_voltage;
  std::vector<Complex> port_source;
  double t0 = 0.0;
};

/// Port quantities in a device frame rotated by `angle` (positive sequence
/// for phasor solvers, Park components for EMT). Current flows into the
/// network.
struct PortMeasurement {
  double v_d = 0.0;
  double v_q = 0.0;
  double i_d = 0.0;
  double i_q = 0.0;
};

/// Common interface of the EMT and phasor network solvers.
class NetworkSolver {
 public:
  virtual ~NetworkSolver() = default;

  /// Activates or removes every element carrying `id`; unknown ids throw.
  virtual void set_active(const std::string& id, bool active) = 0;
  virtual void set_switch(const std::string& id, bool closed) = 0;
  virtual bool is_active(const std::string& id) const = 0;

  /// Port source in the device frame: a voltage behind the port impedance
  /// for impedance ports, an injected current for current-source ports.
  virtual void set_port_source(int port, double d, double q, double angle) = 0;

  virtual void initialize(const SteadyState& state) = 0;
  /// Solves the network at time t (and advances element history).
  virtual void solve(double t) = 0;

  virtual PortMeasurement measure_port(int port, double angle) const = 0;
  /// Positive-sequence (phasor) or space-vector (EMT) voltage magnitude.
  virtual double node_voltage_magnitude(int node) const = 0;
  /// Number of matrix factorizations so far.
  virtual std::size_t factorizations() const = 0;
  virtual const CompiledNetwork& topology() const = 0;
};

}  // namespace powerdyn::network
