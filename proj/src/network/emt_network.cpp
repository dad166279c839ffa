#include "powerdyn/network/emt_network.hpp"

#include <cmath>
#include <numbers>

#include "powerdyn/core/errors.hpp"

namespace powerdyn::network {

namespace {

const Complex kRotate = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);

/// Phase values at time t of a balanced set whose phase-a phasor is p.
Vec3 balanced(Complex p, double omega, double t) {
  const Complex rot = std::polar(1.0, omega * t);
  return {std::real(p * rot), std::real(p * rot / kRotate), std::real(p * rot * kRotate)};
}

Vec3 to_modes(const Vec3& phase) { return modal_transform().transpose() * phase; }
Vec3 to_phase(const Vec3& modes) { return modal_transform() * modes; }

}  // namespace

Discretization parse_discretization(const std::string& tag) {
  if (tag == "trapezoidal") return Discretization::Trapezoidal;
  if (tag == "backward_euler") return Discretization::BackwardEuler;
  throw ConfigError("unknown companion '" + tag + "' (expected trapezoidal | backward_euler)");
}

std::string to_string(Discretization method) {
  return method == Discretization::Trapezoidal ? "trapezoidal" : "backward_euler";
}

EmtNetwork::EmtNetwork(CompiledNetwork net, double step_h, Discretization method)
    : net_(std::move(net)), h_(step_h), method_(method), state_(net_) {
  if (!(h_ > 0.0)) throw ConfigError("EMT step must be positive");
  const double w = net_.omega_nom;
  for (const auto& s : net_.series) series_.push_back(make_branch(s.a, s.b, s.modes));
  for (const auto& l : net_.lines) {
    if (l.model == LineModel::Pi) {
      std::array<ModeParams, 3> modes;
      std::array<double, 3> half{};
      for (int m = 0; m < 3; ++m) {
        modes[m] = {l.r[m], l.x[m], false};
        half[m] = l.b_sh[m] / 2.0;
      }
      pi_lines_.push_back(PiLine{make_branch(l.a, l.b, modes), make_shunt(l.a, half),
                                 make_shunt(l.b, half)});
      tl_lines_.emplace_back();
    } else {
      TravellingLine tl;
      tl.a = l.a;
      tl.b = l.b;
      Vec3 g;
      for (int m = 0; m < 3; ++m) {
        try {
          tl.modes.emplace_back(l.r[m], l.x[m] / w, l.b_sh[m] / w, h_);
        } catch (const ConfigError& e) {
          throw ConfigError("line '" + l.id + "': " + e.what());
        }
        g[m] = tl.modes.back().conductance();
      }
      tl.g_phase = modal_to_phase(g);
      tl_lines_.push_back(std::move(tl));
      pi_lines_.emplace_back();
    }
  }
  for (const auto& p : net_.ports) {
    if (p.kind == PortKind::VoltageBehindImpedance) {
      if (!(p.ground_g > 0.0)) throw ConfigError("port '" + p.id + "' needs a positive ground conductance");
      std::array<ModeParams, 3> modes{ModeParams{1.0 / p.ground_g, 0.0, false},
                                      ModeParams{p.r, p.x, false}, ModeParams{p.r, p.x, false}};
      vbi_ports_.push_back(make_branch(-1, p.node, modes));
    } else {
      vbi_ports_.emplace_back();
    }
  }
  port_source_.assign(net_.ports.size(), PortSource{});
  cs_current_.assign(net_.ports.size(), Vec3::Zero());
  for (const auto& f : net_.faults) {
    if (!(f.r > 0.0)) throw ConfigError("fault '" + f.id + "' needs a positive resistance");
    Vec3 g = Vec3::Zero();
    if (f.type == FaultType::ThreePhase) {
      g.setConstant(1.0 / f.r);
    } else {
      g[f.phase] = 1.0 / f.r;
    }
    fault_g_.push_back(g);
  }
  was_active_series_.assign(series_.size(), true);
  was_active_line_.assign(net_.lines.size(), true);
  was_active_port_.assign(net_.ports.size(), true);
}

EmtNetwork::RlBranch EmtNetwork::make_branch(int a, int b,
                                             const std::array<ModeParams, 3>& modes) const {
  RlBranch br;
  br.a = a;
  br.b = b;
  for (int m = 0; m < 3; ++m) {
    if (modes[m].open) continue;
    const double l = modes[m].x / net_.omega_nom;
    const double r = modes[m].r;
    if (method_ == Discretization::Trapezoidal) {
      br.g[m] = 1.0 / (r + 2.0 * l / h_);
      br.alpha[m] = 1.0;
      br.beta[m] = 2.0 * l / h_ - r;
    } else {
      br.g[m] = 1.0 / (r + l / h_);
      br.alpha[m] = 0.0;
      br.beta[m] = l / h_;
    }
    if (!std::isfinite(br.g[m])) throw ConfigError("series element with zero impedance");
  }
  br.g_phase = modal_to_phase(br.g);
  return br;
}

EmtNetwork::Shunt EmtNetwork::make_shunt(int node, const std::array<double, 3>& b_sh) const {
  Shunt sh;
  sh.node = node;
  for (int m = 0; m < 3; ++m) {
    const double c = b_sh[m] / net_.omega_nom;
    const bool trap = method_ == Discretization::Trapezoidal;
    sh.g[m] = (trap ? 2.0 : 1.0) * c / h_;
    sh.delta[m] = trap ? 1.0 : 0.0;
  }
  sh.g_phase = modal_to_phase(sh.g);
  return sh;
}

void EmtNetwork::set_active(const std::string& id, bool active) {
  if (state_.set_active(id, active)) dirty_ = true;
}

void EmtNetwork::set_switch(const std::string& id, bool closed) {
  if (state_.set_switch(id, closed)) dirty_ = true;
}

bool EmtNetwork::is_active(const std::string& id) const { return state_.is_active(id); }

void EmtNetwork::set_port_source(int port, double d, double q, double angle) {
  port_source_.at(static_cast<std::size_t>(port)) = {d, q, angle};
}

int EmtNetwork::index(int node, int phase) const {
  if (node < 0) return -1;
  const int r = reduced_[static_cast<std::size_t>(node)];
  return r < 0 ? -1 : 3 * r + phase;
}

Vec3 EmtNetwork::voltage_of(int node) const {
  Vec3 v = Vec3::Zero();
  for (int ph = 0; ph < 3; ++ph) {
    const int k = index(node, ph);
    if (k >= 0) v[ph] = solution_[k];
  }
  return v;
}

void EmtNetwork::stamp(int a, int b, const Mat3& g) {
  for (int p = 0; p < 3; ++p) {
    const int ap = index(a, p);
    const int bp = index(b, p);
    for (int q = 0; q < 3; ++q) {
      const int aq = index(a, q);
      const int bq = index(b, q);
      if (ap >= 0 && aq >= 0) g_matrix_(ap, aq) += g(p, q);
      if (bp >= 0 && bq >= 0) g_matrix_(bp, bq) += g(p, q);
      if (ap >= 0 && bq >= 0) g_matrix_(ap, bq) -= g(p, q);
      if (bp >= 0 && aq >= 0) g_matrix_(bp, aq) -= g(p, q);
    }
  }
}

void EmtNetwork::inject(int node, const Vec3& current) {
  for (int ph = 0; ph < 3; ++ph) {
    const int k = index(node, ph);
    if (k >= 0) rhs_[k] += current[ph];
  }
}

void EmtNetwork::reset_element_states() {
  auto clear_branch = [](RlBranch& br) {
    br.hist.setZero();
    br.i.setZero();
  };
  auto clear_shunt = [](Shunt& sh) {
    sh.hist.setZero();
    sh.i.setZero();
  };
  for (std::size_t k = 0; k < series_.size(); ++k) {
    const bool on = state_.series_active(k);
    if (on != was_active_series_[k]) clear_branch(series_[k]);
    was_active_series_[k] = on;
  }
  for (std::size_t k = 0; k < net_.lines.size(); ++k) {
    const bool on = state_.line_active(k);
    if (on != was_active_line_[k]) {
      if (pi_lines_[k]) {
        clear_branch(pi_lines_[k]->series);
        clear_shunt(pi_lines_[k]->end_a);
        clear_shunt(pi_lines_[k]->end_b);
      } else {
        auto& tl = *tl_lines_[k];
        for (auto& m : tl.modes) m.prime([](std::size_t) { return BergeronMode::Sample{}; });
        tl.i_a.setZero();
      }
    }
    was_active_line_[k] = on;
  }
  for (std::size_t k = 0; k < net_.ports.size(); ++k) {
    const bool on = state_.port_active(k);
    if (on != was_active_port_[k] && vbi_ports_[k]) clear_branch(*vbi_ports_[k]);
    was_active_port_[k] = on;
  }
}

void EmtNetwork::rebuild() {
  reduced_ = state_.reduce(reduced_count_);
  reset_element_states();
  const auto n = static_cast<Eigen::Index>(3 * reduced_count_);
  g_matrix_ = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < series_.size(); ++k) {
    if (state_.series_active(k)) stamp(series_[k].a, series_[k].b, series_[k].g_phase);
  }
  for (std::size_t k = 0; k < net_.lines.size(); ++k) {
    if (!state_.line_active(k)) continue;
    if (pi_lines_[k]) {
      const auto& pl = *pi_lines_[k];
      stamp(pl.series.a, pl.series.b, pl.series.g_phase);
      stamp(pl.end_a.node, -1, pl.end_a.g_phase);
      stamp(pl.end_b.node, -1, pl.end_b.g_phase);
    } else {
      const auto& tl = *tl_lines_[k];
      stamp(tl.a, -1, tl.g_phase);
      stamp(tl.b, -1, tl.g_phase);
    }
  }
  for (std::size_t k = 0; k < net_.ports.size(); ++k) {
    if (state_.port_active(k) && vbi_ports_[k]) stamp(-1, vbi_ports_[k]->b, vbi_ports_[k]->g_phase);
  }
  for (std::size_t k = 0; k < net_.faults.size(); ++k) {
    if (state_.fault_active(k)) stamp(net_.faults[k].node, -1, fault_g_[k].asDiagonal().toDenseMatrix());
  }
  lu_.compute(g_matrix_);
  ++factorizations_;
  if (n > 0 && !(lu_.rcond() > 1e-13)) {
    throw ConfigError("EMT conductance matrix is singular for the current topology");
  }
  rhs_ = Eigen::VectorXd::Zero(n);
  solution_ = Eigen::VectorXd::Zero(n);
  dirty_ = false;
}

const Eigen::MatrixXd& EmtNetwork::conductance_matrix() {
  if (dirty_) rebuild();
  return g_matrix_;
}

void EmtNetwork::update_branch(RlBranch& br) {
  const Vec3 u = to_modes(voltage_of(br.a) - voltage_of(br.b)) + br.e;
  br.i = br.g.cwiseProduct(u) + br.hist;
  br.hist = br.g.cwiseProduct(br.alpha.cwiseProduct(u) + br.beta.cwiseProduct(br.i));
}

void EmtNetwork::update_shunt(Shunt& sh) {
  const Vec3 v = to_modes(voltage_of(sh.node));
  sh.i = sh.g.cwiseProduct(v) + sh.hist;
  sh.hist = -(sh.g.cwiseProduct(v) + sh.delta.cwiseProduct(sh.i));
}

void EmtNetwork::solve(double t) {
  if (dirty_) rebuild();
  t_ = t;
  rhs_.setZero();
  const double w = net_.omega_nom;

  // Norton current of a branch a -> b: leaves a, enters b.
  auto branch_sources = [&](const RlBranch& br) {
    const Vec3 i_eq = to_phase(br.g.cwiseProduct(br.e) + br.hist);
    if (br.a >= 0) inject(br.a, -i_eq);
    if (br.b >= 0) inject(br.b, i_eq);
  };
  for (std::size_t k = 0; k < series_.size(); ++k) {
    if (state_.series_active(k)) branch_sources(series_[k]);
  }
  for (std::size_t k = 0; k < net_.lines.size(); ++k) {
    if (!state_.line_active(k)) continue;
    if (pi_lines_[k]) {
      auto& pl = *pi_lines_[k];
      branch_sources(pl.series);
      inject(pl.end_a.node, -to_phase(pl.end_a.hist));
      inject(pl.end_b.node, -to_phase(pl.end_b.hist));
    } else {
      auto& tl = *tl_lines_[k];
      for (int m = 0; m < 3; ++m) {
        const auto [ik, im] = tl.modes[static_cast<std::size_t>(m)].history();
        tl.hist_a[m] = ik;
        tl.hist_b[m] = im;
      }
      inject(tl.a, -to_phase(tl.hist_a));
      inject(tl.b, -to_phase(tl.hist_b));
    }
  }
  for (std::size_t k = 0; k < net_.ports.size(); ++k) {
    if (!state_.port_active(k)) continue;
    const auto& src = port_source_[k];
    const Vec3 abc = dq0_to_abc(Vec3(src.d, src.q, 0.0), w * t + src.angle);
    if (vbi_ports_[k]) {
      vbi_ports_[k]->e = to_modes(abc);
      branch_sources(*vbi_ports_[k]);
    } else {
      cs_current_[k] = abc;
      inject(net_.ports[k].node, abc);
    }
  }

  if (rhs_.size() > 0) solution_ = lu_.solve(rhs_);

  for (std::size_t k = 0; k < series_.size(); ++k) {
    if (state_.series_active(k)) update_branch(series_[k]);
  }
  for (std::size_t k = 0; k < net_.lines.size(); ++k) {
    if (!state_.line_active(k)) continue;
    if (pi_lines_[k]) {
      auto& pl = *pi_lines_[k];
      update_branch(pl.series);
      update_shunt(pl.end_a);
      update_shunt(pl.end_b);
    } else {
      auto& tl = *tl_lines_[k];
      const Vec3 va = to_modes(voltage_of(tl.a));
      const Vec3 vb = to_modes(voltage_of(tl.b));
      for (int m = 0; m < 3; ++m) {
        const auto [ikm, imk] =
            tl.modes[static_cast<std::size_t>(m)].record(va[m], vb[m], tl.hist_a[m], tl.hist_b[m]);
        (void)imk;
        tl.i_a[m] = ikm;
      }
    }
  }
  for (std::size_t k = 0; k < net_.ports.size(); ++k) {
    if (state_.port_active(k) && vbi_ports_[k]) update_branch(*vbi_ports_[k]);
  }
}

void EmtNetwork::initialize(const SteadyState& ss) {
  if (ss.node_voltage.size() != net_.node_count() || ss.port_source.size() != net_.ports.size()) {
    throw ConfigError("steady state does not match the network size");
  }
  if (dirty_) rebuild();
  const double w = net_.omega_nom;
  const double t_prev = ss.t0 - h_;
  auto node_v = [&](int node) { return node < 0 ? Complex{} : ss.node_voltage[static_cast<std::size_t>(node)]; };

  auto init_branch = [&](RlBranch& br, Complex current) {
    const Complex drop = node_v(br.a) - node_v(br.b);
    const Vec3 i_m = to_modes(balanced(current, w, t_prev));
    const Vec3 v_m = to_modes(balanced(drop, w, t_prev)) + br.e;
    br.i = i_m;
    br.hist = br.g.cwiseProduct(br.alpha.cwiseProduct(v_m) + br.beta.cwiseProduct(br.i));
  };
  auto init_shunt = [&](Shunt& sh, double b_half) {
    const Complex v = node_v(sh.node);
    const Vec3 v_m = to_modes(balanced(v, w, t_prev));
    sh.i = to_modes(balanced(Complex(0.0, b_half) * v, w, t_prev));
    sh.hist = -(sh.g.cwiseProduct(v_m) + sh.delta.cwiseProduct(sh.i));
  };

  for (std::size_t k = 0; k < series_.size(); ++k) {
    if (!state_.series_active(k)) continue;
    const auto& mode = net_.series[k].modes[1];
    Complex current{};
    if (!mode.open) {
      current = (node_v(series_[k].a) - node_v(series_[k].b)) / Complex(mode.r, mode.x);
    }
    series_[k].e.setZero();
    init_branch(series_[k], current);
  }
  for (std::size_t k = 0; k < net_.lines.size(); ++k) {
    if (!state_.line_active(k)) continue;
    const auto& l = net_.lines[k];
    const Complex va = node_v(l.a);
    const Complex vb = node_v(l.b);
    if (pi_lines_[k]) {
      auto& pl = *pi_lines_[k];
      pl.series.e.setZero();
      init_branch(pl.series, (va - vb) / Complex(l.r[1], l.x[1]));
      init_shunt(pl.end_a, l.b_sh[1] / 2.0);
      init_shunt(pl.end_b, l.b_sh[1] / 2.0);
    } else {
      auto& tl = *tl_lines_[k];
      const Complex z(l.r[1], l.x[1]);
      const Complex y(0.0, l.b_sh[1]);
      const Complex gl = std::sqrt(z * y);
      const Complex zc = std::sqrt(z / y);
      const Complex i_ab = (va * std::cosh(gl) - vb) / (zc * std::sinh(gl));
      const Complex i_ba = (vb * std::cosh(gl) - va) / (zc * std::sinh(gl));
      for (std::size_t m = 0; m < 3; ++m) {
        tl.modes[m].prime([&](std::size_t back) {
          const double t = ss.t0 - static_cast<double>(back) * h_;
          const auto mode = static_cast<Eigen::Index>(m);
          return BergeronMode::Sample{to_modes(balanced(va, w, t))[mode],
                                      to_modes(balanced(vb, w, t))[mode],
                                      to_modes(balanced(i_ab, w, t))[mode],
                                      to_modes(balanced(i_ba, w, t))[mode]};
        });
      }
    }
  }
  for (std::size_t k = 0; k < net_.ports.size(); ++k) {
    if (!state_.port_active(k)) continue;
    const Complex src = ss.port_source[k];
    if (vbi_ports_[k]) {
      auto& br = *vbi_ports_[k];
      const auto& p = net_.ports[k];
      const Complex v = node_v(p.node);
      br.e = to_modes(balanced(src, w, t_prev));
      init_branch(br, (src - v) / Complex(p.r, p.x));
    } else {
      cs_current_[k] = balanced(src, w, t_prev);
    }
  }
  t_ = t_prev;
}

PortMeasurement EmtNetwork::measure_port(int port, double angle) const {
  const auto k = static_cast<std::size_t>(port);
  const double theta = net_.omega_nom * t_ + angle;
  const Vec3 v = abc_to_dq0(voltage_of(net_.ports.at(k).node), theta);
  const Vec3 i = abc_to_dq0(port_current(port), theta);
  return {v[0], v[1], i[0], i[1]};
}

Vec3 EmtNetwork::node_voltage(int node) const { return voltage_of(node); }

Vec3 EmtNetwork::port_current(int port) const {
  const auto k = static_cast<std::size_t>(port);
  if (!state_.port_active(k)) return Vec3::Zero();
  if (vbi_ports_[k]) return to_phase(vbi_ports_[k]->i);
  return cs_current_[k];
}

Vec3 EmtNetwork::line_current(const std::string& id) const {
  for (std::size_t k = 0; k < net_.lines.size(); ++k) {
    if (net_.lines[k].id != id) continue;
    if (!state_.line_active(k)) return Vec3::Zero();
    if (pi_lines_[k]) return to_phase(pi_lines_[k]->series.i + pi_lines_[k]->end_a.i);
    return to_phase(tl_lines_[k]->i_a);
  }
  throw ConfigError("unknown line '" + id + "'");
}

double EmtNetwork::node_voltage_magnitude(int node) const {
  return space_vector_magnitude(voltage_of(node));
}

}  // namespace powerdyn::network
