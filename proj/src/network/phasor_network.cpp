#include "powerdyn/network/phasor_network.hpp"

#include <cmath>
#include <numbers>

#include "powerdyn/core/errors.hpp"

namespace powerdyn::network {

namespace {


Complex rotate_pow(int k) {
  return std::polar(1.0, 2.0 * std::numbers::pi / 3.0 * static_cast<double>(k));
}

}  // namespace

EquivalentPi exact_pi(double r, double x, double b) {
  const Complex z(r, x);
  const Complex y(0.0, b);
  if (std::abs(y) == 0.0) return {z, Complex{}};
  const Complex gl = std::sqrt(z * y);
  const Complex zc = std::sqrt(z / y);
  return {zc * std::sinh(gl), std::tanh(gl / 2.0) / zc};
}

Eigen::MatrixXcd sequence_admittance(const CompiledNetwork& net, const TopologyState& state,
                                     const std::vector<int>& reduced, std::size_t reduced_count,
                                     int sequence, bool with_ports) {
  const auto n = static_cast<Eigen::Index>(reduced_count);
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n, n);
  const auto mode = static_cast<std::size_t>(sequence == 0 ? 0 : 1);
  auto at = [&](int node) { return node < 0 ? -1 : reduced[static_cast<std::size_t>(node)]; };
  auto series = [&](int a, int b, Complex ys) {
    const int ra = at(a);
    const int rb = at(b);
    if (ra >= 0) y(ra, ra) += ys;
    if (rb >= 0) y(rb, rb) += ys;
    if (ra >= 0 && rb >= 0) {
      y(ra, rb) -= ys;
      y(rb, ra) -= ys;
    }
  };
  for (std::size_t k = 0; k < net.series.size(); ++k) {
    if (!state.series_active(k)) continue;
    const auto& s = net.series[k];
    const auto& m = s.modes[mode];
    if (!m.open) series(s.a, s.b, 1.0 / Complex(m.r, m.x));
  }
  for (std::size_t k = 0; k < net.lines.size(); ++k) {
    if (!state.line_active(k)) continue;
    const auto& l = net.lines[k];
    EquivalentPi pi{Complex(l.r[mode], l.x[mode]), Complex(0.0, l.b_sh[mode] / 2.0)};
    if (l.model == LineModel::Bergeron) pi = exact_pi(l.r[mode], l.x[mode], l.b_sh[mode]);
    series(l.a, l.b, 1.0 / pi.z_series);
    series(l.a, -1, pi.y_half);
    series(l.b, -1, pi.y_half);
  }
  if (with_ports) {
    for (std::size_t k = 0; k < net.ports.size(); ++k) {
      const auto& p = net.ports[k];
      if (!state.port_active(k) || p.kind != PortKind::VoltageBehindImpedance) continue;
      series(p.node, -1, sequence == 0 ? Complex(p.ground_g, 0.0) : 1.0 / Complex(p.r, p.x));
    }
  }
  for (std::size_t k = 0; k < net.faults.size(); ++k) {
    const auto& f = net.faults[k];
    if (state.fault_active(k) && f.type == FaultType::ThreePhase) series(f.node, -1, 1.0 / f.r);
  }
  return y;
}

PhasorNetwork::PhasorNetwork(CompiledNetwork net) : net_(std::move(net)), state_(net_) {
  port_source_.assign(net_.ports.size(), Complex{});
  for (const auto& p : net_.ports) {
    port_y_.push_back(p.kind == PortKind::VoltageBehindImpedance ? 1.0 / Complex(p.r, p.x)
                                                                 : Complex{});
  }
  for (const auto& f : net_.faults) {
    if (!(f.r > 0.0)) throw ConfigError("fault '" + f.id + "' needs a positive resistance");
  }
}

void PhasorNetwork::set_active(const std::string& id, bool active) {
  if (state_.set_active(id, active)) dirty_ = true;
}

void PhasorNetwork::set_switch(const std::string& id, bool closed) {
  if (state_.set_switch(id, closed)) dirty_ = true;
}

bool PhasorNetwork::is_active(const std::string& id) const { return state_.is_active(id); }

void PhasorNetwork::set_port_source(int port, double d, double q, double angle) {
  port_source_.at(static_cast<std::size_t>(port)) = Complex(d, q) * std::polar(1.0, angle);
}

void PhasorNetwork::rebuild() {
  reduced_ = state_.reduce(reduced_count_);
  y1_ = sequence_admittance(net_, state_, reduced_, reduced_count_, 1, true);
  lu1_.compute(y1_);
  ++factorizations_;
  const auto n = static_cast<Eigen::Index>(reduced_count_);
  if (n > 0 && !(lu1_.rcond() > 1e-13)) {
    throw ConfigError("phasor admittance matrix is singular for the current topology");
  }
  unbalanced_fault_ = -1;
  for (std::size_t k = 0; k < net_.faults.size(); ++k) {
    if (!state_.fault_active(k) || net_.faults[k].type != FaultType::SinglePhase) continue;
    if (unbalanced_fault_ >= 0) {
      throw ConfigError("the phasor solver supports one single-phase fault at a time");
    }
    unbalanced_fault_ = static_cast<int>(k);
  }
  y0_ = sequence_admittance(net_, state_, reduced_, reduced_count_, 0, true);
  if (unbalanced_fault_ >= 0) {
    const int node = reduced_[static_cast<std::size_t>(net_.faults[unbalanced_fault_].node)];
    Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(n);
    unit[node] = 1.0;
    z1_col_ = lu1_.solve(unit);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu0(y0_);
    ++factorizations_;
    if (!(lu0.rcond() > 1e-13)) throw ConfigError("zero-sequence admittance matrix is singular");
    z0_col_ = lu0.solve(unit);
  }
  v1_ = Eigen::VectorXcd::Zero(n);
  v2_ = Eigen::VectorXcd::Zero(n);
  v0_ = Eigen::VectorXcd::Zero(n);
  dirty_ = false;
}

const Eigen::MatrixXcd& PhasorNetwork::admittance_matrix(int sequence) {
  if (dirty_) rebuild();
  return sequence == 0 ? y0_ : y1_;
}

void PhasorNetwork::initialize(const SteadyState& state) {
  if (state.port_source.size() != net_.ports.size()) {
    throw ConfigError("steady state does not match the network size");
  }
  port_source_ = state.port_source;
  if (dirty_) rebuild();
}

void PhasorNetwork::solve(double /*t*/) {
  if (dirty_) rebuild();
  const auto n = static_cast<Eigen::Index>(reduced_count_);
  Eigen::VectorXcd j = Eigen::VectorXcd::Zero(n);
  for (std::size_t k = 0; k < net_.ports.size(); ++k) {
    if (!state_.port_active(k)) continue;
    const int r = reduced_[static_cast<std::size_t>(net_.ports[k].node)];
    const bool vbi = net_.ports[k].kind == PortKind::VoltageBehindImpedance;
    j[r] += vbi ? port_y_[k] * port_source_[k] : port_source_[k];
  }
  if (n > 0) v1_ = lu1_.solve(j);
  v2_.setZero();
  v0_.setZero();
  if (unbalanced_fault_ >= 0) {
    const auto& f = net_.faults[static_cast<std::size_t>(unbalanced_fault_)];
    const int r = reduced_[static_cast<std::size_t>(f.node)];
    const Complex z1 = z1_col_[r];
    const Complex z0 = z0_col_[r];
    const int p = f.phase;
    const Complex i_fault = 3.0 * rotate_pow(-p) * v1_[r] / (2.0 * z1 + z0 + 3.0 * f.r);
    const Complex i0 = i_fault / 3.0;
    const Complex i1 = rotate_pow(p) * i_fault / 3.0;
    const Complex i2 = rotate_pow(-p) * i_fault / 3.0;
    v1_ -= z1_col_ * i1;
    v2_ = -z1_col_ * i2;
    v0_ = -z0_col_ * i0;
  }
}

Complex PhasorNetwork::reduced_value(const Eigen::VectorXcd& v, int node) const {
  if (node < 0) return {};
  const int r = reduced_[static_cast<std::size_t>(node)];
  return r < 0 || r >= v.size() ? Complex{} : v[r];
}

Complex PhasorNetwork::node_voltage(int node, int sequence) const {
  if (sequence == 0) return reduced_value(v0_, node);
  if (sequence == 2) return reduced_value(v2_, node);
  return reduced_value(v1_, node);
}

Complex PhasorNetwork::port_current(int port) const {
  const auto k = static_cast<std::size_t>(port);
  if (!state_.port_active(k)) return {};
  if (net_.ports[k].kind == PortKind::CurrentSource) return port_source_[k];
  return port_y_[k] * (port_source_[k] - node_voltage(net_.ports[k].node));
}

PortMeasurement PhasorNetwork::measure_port(int port, double angle) const {
  const Complex back = std::polar(1.0, -angle);
  const Complex v = node_voltage(net_.ports.at(static_cast<std::size_t>(port)).node) * back;
  const Complex i = port_current(port) * back;
  return {v.real(), v.imag(), i.real(), i.imag()};
}

double PhasorNetwork::node_voltage_magnitude(int node) const { return std::abs(node_voltage(node)); }

}  // namespace powerdyn::network
