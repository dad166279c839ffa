#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "powerdyn/core/transforms.hpp"
#include "powerdyn/network/bergeron.hpp"
#include "powerdyn/network/solver.hpp"
#include "powerdyn/network/topology_state.hpp"

namespace powerdyn::network {

enum class Discretization { Trapezoidal, BackwardEuler };

Discretization parse_discretization(const std::string& tag);
std::string to_string(Discretization method);

/// Instantaneous three-phase network solved by nodal analysis. Every
/// inductor and capacitor becomes a companion conductance plus history
/// source; Bergeron lines contribute delayed history only. The conductance
/// matrix is factorized once per topology and reused every step.
class EmtNetwork final : public NetworkSolver {
 public:
  EmtNetwork(CompiledNetwork net, double step_h,
             Discretization method = Discretization::Trapezoidal);

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

  /// Instantaneous phase voltages of a node after the last solve.
  Vec3 node_voltage(int node) const;
  /// Phase currents injected into the network by a port after the last solve.
  Vec3 port_current(int port) const;
  /// Phase currents entering a line at its `a` end (first section carrying
  /// the id); zero for an out-of-service line.
  Vec3 line_current(const std::string& id) const;
  /// The factorized conductance matrix (rebuilt on demand).
  const Eigen::MatrixXd& conductance_matrix();
  double step() const { return h_; }

 private:
  struct RlBranch {
    int a = -1;
    int b = -1;
    Vec3 g = Vec3::Zero();
    Vec3 alpha = Vec3::Zero();
    Vec3 beta = Vec3::Zero();
    Vec3 hist = Vec3::Zero();
    Vec3 i = Vec3::Zero();  // modal current a -> b
    Vec3 e = Vec3::Zero();  // modal series source
    Mat3 g_phase = Mat3::Zero();
  };
  struct Shunt {
    int node = -1;
    Vec3 g = Vec3::Zero();
    Vec3 delta = Vec3::Zero();
    Vec3 hist = Vec3::Zero();
    Vec3 i = Vec3::Zero();
    Mat3 g_phase = Mat3::Zero();
  };
  struct PiLine {
    RlBranch series;
    Shunt end_a;
    Shunt end_b;
  };
  struct TravellingLine {
    int a = -1;
    int b = -1;
    std::vector<BergeronMode> modes;
    Mat3 g_phase = Mat3::Zero();
    Vec3 hist_a = Vec3::Zero();  // modal
    Vec3 hist_b = Vec3::Zero();
    Vec3 i_a = Vec3::Zero();
  };

  RlBranch make_branch(int a, int b, const std::array<ModeParams, 3>& modes) const;
  Shunt make_shunt(int node, const std::array<double, 3>& b_sh) const;
  void rebuild();
  int index(int node, int phase) const;
  Vec3 voltage_of(int node) const;
  void stamp(int a, int b, const Mat3& g);
  void inject(int node, const Vec3& current);
  void update_branch(RlBranch& br);
  void update_shunt(Shunt& sh);
  void reset_element_states();

  CompiledNetwork net_;
  double h_;
  Discretization method_;
  TopologyState state_;
  bool dirty_ = true;
  std::size_t factorizations_ = 0;

  std::vector<RlBranch> series_;
  std::vector<std::optional<PiLine>> pi_lines_;
  std::vector<std::optional<TravellingLine>> tl_lines_;
  std::vector<std::optional<RlBranch>> vbi_ports_;
  struct PortSource {
    double d = 0.0;
    double q = 0.0;
    double angle = 0.0;
  };
  std::vector<PortSource> port_source_;
  std::vector<Vec3> cs_current_;  // phase currents of current-source ports
  std::vector<Vec3> fault_g_;
  std::vector<bool> was_active_series_, was_active_line_, was_active_port_;

  std::vector<int> reduced_;
  std::size_t reduced_count_ = 0;
  Eigen::MatrixXd g_matrix_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  Eigen::VectorXd rhs_;
  Eigen::VectorXd solution_;
  double t_ = 0.0;
};

}  // namespace powerdyn::network
