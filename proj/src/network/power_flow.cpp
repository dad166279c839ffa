#include "powerdyn/network/power_flow.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "powerdyn/core/errors.hpp"
#include "powerdyn/network/phasor_network.hpp"
#include "powerdyn/network/topology_state.hpp"

namespace powerdyn::network {

PowerFlowResult solve_power_flow(const CompiledNetwork& net, const std::vector<PowerFlowSpec>& specs,
                                 const std::vector<std::string>& inactive, double tolerance,
                                 int max_iterations) {
  TopologyState state(net);
  for (const auto& id : inactive) state.set_active(id, false);
  std::size_t n_red = 0;
  const std::vector<int> reduced = state.reduce(n_red);
  const auto n = static_cast<Eigen::Index>(n_red);
  const Eigen::MatrixXcd y = sequence_admittance(net, state, reduced, n_red, 1, false);

  std::vector<BusType> type(n_red, BusType::PQ);
  Eigen::VectorXcd s_spec = Eigen::VectorXcd::Zero(n);
  Eigen::VectorXd v_mag = Eigen::VectorXd::Ones(n);
  std::vector<bool> claimed(n_red, false);
  std::vector<const PowerFlowSpec*> port_spec(net.ports.size(), nullptr);
  int slack = -1;
  for (const auto& sp : specs) {
    const int port = net.port_index(sp.port);
    if (port < 0) throw ConfigError("load flow references unknown port '" + sp.port + "'");
    if (!state.port_active(static_cast<std::size_t>(port))) continue;
    const int r = reduced[static_cast<std::size_t>(net.ports[port].node)];
    if (claimed[r]) throw ConfigError("load flow: two ports share the node of '" + sp.port + "'");
    claimed[r] = true;
    port_spec[port] = &sp;
    type[r] = sp.type;
    if (sp.type == BusType::Slack) {
      if (slack >= 0) throw ConfigError("load flow needs exactly one slack port");
      slack = r;
    }
    if (sp.type != BusType::PQ) v_mag[r] = sp.v;
    s_spec[r] = Complex(sp.p, sp.q);
  }
  if (slack < 0) throw ConfigError("load flow needs exactly one slack port");

  std::vector<int> ang_idx;  // unknown angles
  std::vector<int> mag_idx;  // unknown magnitudes
  for (int k = 0; k < n; ++k) {
    if (type[k] != BusType::Slack) ang_idx.push_back(k);
    if (type[k] == BusType::PQ) mag_idx.push_back(k);
  }
  const auto na = static_cast<Eigen::Index>(ang_idx.size());
  const auto nm = static_cast<Eigen::Index>(mag_idx.size());
  Eigen::VectorXd v_ang = Eigen::VectorXd::Zero(n);

  auto voltages = [&] {
    Eigen::VectorXcd v(n);
    for (int k = 0; k < n; ++k) v[k] = std::polar(v_mag[k], v_ang[k]);
    return v;
  };

  PowerFlowResult result;
  bool converged = false;
  for (int it = 0; it <= max_iterations; ++it) {
    const Eigen::VectorXcd v = voltages();
    const Eigen::VectorXcd i_bus = y * v;
    const Eigen::VectorXcd s_calc = v.cwiseProduct(i_bus.conjugate());
    const Eigen::VectorXcd mis = s_calc - s_spec;
    Eigen::VectorXd f(na + nm);
    for (Eigen::Index a = 0; a < na; ++a) f[a] = mis[ang_idx[a]].real();
    for (Eigen::Index m = 0; m < nm; ++m) f[na + m] = mis[mag_idx[m]].imag();
    result.iterations = it;
    if (f.size() == 0 || f.cwiseAbs().maxCoeff() < tolerance) {
      converged = true;
      break;
    }
    if (it == max_iterations) break;

    const Eigen::VectorXcd v_unit = v.cwiseQuotient(v.cwiseAbs().cast<Complex>());
    const Eigen::MatrixXcd ds_dvm = v.asDiagonal() * (y * v_unit.asDiagonal()).conjugate() +
                                    i_bus.conjugate().asDiagonal().toDenseMatrix() * v_unit.asDiagonal();
    Eigen::MatrixXcd diag_i = i_bus.asDiagonal();
    const Eigen::MatrixXcd ds_dva =
        Complex(0.0, 1.0) * v.asDiagonal() * (diag_i - y * v.asDiagonal()).conjugate();
    Eigen::MatrixXd jac(na + nm, na + nm);
    for (Eigen::Index r = 0; r < na; ++r) {
      for (Eigen::Index c = 0; c < na; ++c) jac(r, c) = ds_dva(ang_idx[r], ang_idx[c]).real();
      for (Eigen::Index c = 0; c < nm; ++c) jac(r, na + c) = ds_dvm(ang_idx[r], mag_idx[c]).real();
    }
    for (Eigen::Index r = 0; r < nm; ++r) {
      for (Eigen::Index c = 0; c < na; ++c) jac(na + r, c) = ds_dva(mag_idx[r], ang_idx[c]).imag();
      for (Eigen::Index c = 0; c < nm; ++c) jac(na + r, na + c) = ds_dvm(mag_idx[r], mag_idx[c]).imag();
    }
    const Eigen::VectorXd dx = jac.partialPivLu().solve(-f);
    if (!dx.allFinite()) break;
    for (Eigen::Index a = 0; a < na; ++a) v_ang[ang_idx[a]] += dx[a];
    for (Eigen::Index m = 0; m < nm; ++m) v_mag[mag_idx[m]] += dx[na + m];
  }
  if (!converged) throw NumericAbort("load flow did not converge");

  const Eigen::VectorXcd v = voltages();
  const Eigen::VectorXcd s_calc = v.cwiseProduct((y * v).conjugate());
  result.node_voltage.assign(net.node_count(), Complex{});
  for (std::size_t k = 0; k < net.node_count(); ++k) {
    if (reduced[k] >= 0) result.node_voltage[k] = v[reduced[k]];
  }
  result.port_power.assign(net.ports.size(), Complex{});
  result.port_current.assign(net.ports.size(), Complex{});
  for (std::size_t p = 0; p < net.ports.size(); ++p) {
    if (!port_spec[p]) continue;
    const int r = reduced[static_cast<std::size_t>(net.ports[p].node)];
    result.port_power[p] = s_calc[r];
    result.port_current[p] = std::conj(s_calc[r] / v[r]);
  }
  return result;
}

}  // namespace powerdyn::network
