#pragma once

#include <Eigen/Dense>
#include <vector>

#include "powerdyn/network/solver.hpp"
#include "powerdyn/network/topology_state.hpp"

namespace powerdyn::network {

/// Nodal admittance matrix of one sequence (0 = zero, 1 = positive; the
/// negative sequence equals the positive one for balanced elements) over
/// the reduced node set. Bergeron lines enter as their exact equivalent PI.
/// Impedance ports are included when `with_ports` is set; three-phase
/// faults always are.
Eigen::MatrixXcd sequence_admittance(const CompiledNetwork& net, const TopologyState& state,
                                     const std::vector<int>& reduced, std::size_t reduced_count,
                                     int sequence, bool with_ports);

/// Exact PI equivalent of a distributed line at nominal frequency:
/// series impedance and half shunt admittance.
struct EquivalentPi {
  Complex z_series;
  Complex y_half;
};
EquivalentPi exact_pi(double r, double x, double b);

/// Quasi-static positive-sequence network. A single-phase-to-ground fault
/// couples the sequence networks at the fault node through their Thevenin
/// impedances; the remaining response is linear superposition.
class PhasorNetwork final : public NetworkSolver {
 public:
  explicit PhasorNetwork(CompiledNetwork net);

  void set_active(const std::string& id, bool active) override;
  void set_switch(const std::string& id, bool closed) override;
  bool is_active(const std::string& id) const override;
  void set_port_source(int port, double d, double q, double angle) override;
  void initialize(const SteadyState& state) override;
  void solve(double t) override;
  PortMeasurement measure_port(int port, double angle) const override;
  double node_voltage_magnitude(int node) const override;
  std::size_t factorizations() const override { return factorizations_; }
  const CompiledNetwork& topology() const override { return net_; }

  /// Sequence voltage phasor at a node after the last solve.
  Complex node_voltage(int node, int sequence = 1) const;
  /// Positive-sequence current injected by a port.
  Complex port_current(int port) const;
  const Eigen::MatrixXcd& admittance_matrix(int sequence);

 private:
  void rebuild();
  Complex reduced_value(const Eigen::VectorXcd& v, int node) const;

  CompiledNetwork net_;
  TopologyState state_;
  bool dirty_ = true;
  std::size_t factorizations_ = 0;
  std::vector<Complex> port_source_;
  std::vector<Complex> port_y_;

  std::vector<int> reduced_;
  std::size_t reduced_count_ = 0;
  Eigen::MatrixXcd y1_;
  Eigen::MatrixXcd y0_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu1_;
  int unbalanced_fault_ = -1;  // compiled fault index, or -1
  Eigen::VectorXcd z1_col_;
  Eigen::VectorXcd z0_col_;
  Eigen::VectorXcd v1_;
  Eigen::VectorXcd v2_;
  Eigen::VectorXcd v0_;
};

}  // namespace powerdyn::network
