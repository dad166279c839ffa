#include "powerdyn/network/network_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "powerdyn/core/errors.hpp"

namespace powerdyn::network {

LineModel parse_line_model(const std::string& tag) {
  if (tag == "pi") return LineModel::Pi;
  if (tag == "bergeron") return LineModel::Bergeron;
  throw ConfigError("unknown line model '" + tag + "' (expected pi | bergeron)");
}

std::string to_string(LineModel model) { return model == LineModel::Pi ? "pi" : "bergeron"; }

NetworkModel::NetworkModel(double s_base_mva, double f_nom)
    : s_base_mva_(s_base_mva), f_nom_(f_nom) {
  if (!(s_base_mva > 0.0) || !(f_nom > 0.0)) {
    throw ConfigError("network bases must be positive");
  }
}

double NetworkModel::omega_nom() const { return 2.0 * std::numbers::pi * f_nom_; }

int NetworkModel::bus_index(const std::string& id) const {
  for (std::size_t i = 0; i < buses.size(); ++i) {
    if (buses[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

const Line* NetworkModel::find_line(const std::string& id) const {
  for (const auto& l : lines) {
    if (l.id == id) return &l;
  }
  return nullptr;
}

PerUnitBase NetworkModel::zone_base(const std::string& bus) const {
  const int i = bus_index(bus);
  if (i < 0) throw ConfigError("unknown bus '" + bus + "'");
  return PerUnitBase(s_base_mva_ * 1e6, buses[static_cast<std::size_t>(i)].v_base_kv * 1e3, f_nom_);
}

std::vector<std::string> NetworkModel::problems() const {
  std::vector<std::string> out;
  std::set<std::string> ids;
  auto unique_id = [&](const std::string& kind, const std::string& id) {
    if (id.empty()) {
      out.push_back(kind + " with empty id");
    } else if (!ids.insert(id).second) {
      out.push_back("duplicate id '" + id + "'");
    }
  };
  auto bus_exists = [&](const std::string& what, const std::string& bus) {
    if (bus_index(bus) < 0) {
      out.push_back(what + " references unknown bus '" + bus + "'");
      return false;
    }
    return true;
  };

  for (const auto& b : buses) {
    unique_id("bus", b.id);
    if (!(b.v_base_kv > 0.0)) out.push_back("bus '" + b.id + "' needs a positive kV base");
  }
  for (const auto& l : lines) {
    unique_id("line", l.id);
    const bool ends = bus_exists("line '" + l.id + "'", l.from) &
                      bus_exists("line '" + l.id + "'", l.to);
    if (ends && buses[bus_index(l.from)].v_base_kv != buses[bus_index(l.to)].v_base_kv) {
      out.push_back("line '" + l.id + "' connects different voltage zones");
    }
    if (!(l.length_km > 0.0)) out.push_back("line '" + l.id + "' needs a positive length");
    const auto& p = l.per_km;
    if (p.r1 < 0.0 || p.r0 < 0.0 || !(p.x1 > 0.0) || !(p.x0 > 0.0) || p.b1 < 0.0 || p.b0 < 0.0) {
      out.push_back("line '" + l.id + "' needs R >= 0, L > 0, C >= 0 in every sequence");
    }
    if (l.model == LineModel::Bergeron && (!(p.b1 > 0.0) || !(p.b0 > 0.0))) {
      out.push_back("Bergeron line '" + l.id + "' needs positive shunt capacitance");
    }
  }
  for (const auto& t : transformers) {
    unique_id("transformer", t.id);
    bus_exists("transformer '" + t.id + "'", t.from);
    bus_exists("transformer '" + t.id + "'", t.to);
    if (t.r < 0.0 || !(t.x > 0.0)) out.push_back("transformer '" + t.id + "' needs r >= 0, x > 0");
  }
  for (const auto& l : loads) {
    unique_id("load", l.id);
    bus_exists("load '" + l.id + "'", l.bus);
    if (!(l.p_mw > 0.0) || l.q_mvar < 0.0) {
      out.push_back("load '" + l.id + "' needs P > 0 and Q >= 0");
    }
  }
  for (const auto& p : ports) {
    unique_id("port", p.id);
    bus_exists("port '" + p.id + "'", p.bus);
    if (p.kind == PortKind::VoltageBehindImpedance && (p.r < 0.0 || !(p.x > 0.0))) {
      out.push_back("port '" + p.id + "' needs r >= 0 and x > 0");
    }
    if (!(p.ground_g > 0.0)) out.push_back("port '" + p.id + "' needs a positive ground conductance");
  }
  std::map<std::string, int> faults_per_line;
  for (const auto& f : faults) {
    unique_id("fault", f.id);
    if (!(f.r_ohm > 0.0)) out.push_back("fault '" + f.id + "' needs a positive resistance");
    if (f.type == FaultType::SinglePhase && (f.phase < 0 || f.phase > 2)) {
      out.push_back("fault '" + f.id + "' has an invalid phase");
    }
    if (!f.line.empty()) {
      if (!find_line(f.line)) out.push_back("fault '" + f.id + "' references unknown line '" + f.line + "'");
      if (!(f.line_fraction > 0.0 && f.line_fraction < 1.0)) {
        out.push_back("fault '" + f.id + "' line fraction must lie in (0, 1)");
      }
      if (++faults_per_line[f.line] > 1) {
        out.push_back("line '" + f.line + "' carries more than one fault location");
      }
    } else {
      bus_exists("fault '" + f.id + "'", f.bus);
    }
  }
  for (const auto& b : breakers) {
    unique_id("breaker", b.id);
    if (!find_line(b.line)) out.push_back("breaker '" + b.id + "' references unknown line '" + b.line + "'");
  }
  return out;
}

void NetworkModel::validate() const {
  auto p = problems();
  if (!p.empty()) throw ConfigError(p);
}

int CompiledNetwork::port_index(const std::string& id) const {
  for (std::size_t i = 0; i < ports.size(); ++i) {
    if (ports[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

namespace {

CompiledLine line_section(const Line& l, const PerUnitBase& base, double fraction, int a, int b) {
  CompiledLine c;
  c.id = l.id;
  c.a = a;
  c.b = b;
  c.model = l.model;
  const double len = l.length_km * fraction;
  const double z = base.z_base();
  const auto& p = l.per_km;
  c.r = {p.r0 * len / z, p.r1 * len / z, p.r1 * len / z};
  c.x = {p.x0 * len / z, p.x1 * len / z, p.x1 * len / z};
  c.b_sh = {p.b0 * len * z, p.b1 * len * z, p.b1 * len * z};
  return c;
}

}  // namespace

CompiledNetwork compile(const NetworkModel& model) {
  model.validate();
  CompiledNetwork net;
  net.omega_nom = model.omega_nom();
  for (const auto& b : model.buses) {
    net.bus_node.push_back(static_cast<int>(net.node_names.size()));
    net.node_names.push_back(b.id);
  }
  auto node_of = [&](const std::string& bus) { return net.bus_node[model.bus_index(bus)]; };
  auto new_node = [&](std::string name) {
    net.node_names.push_back(std::move(name));
    return static_cast<int>(net.node_names.size()) - 1;
  };

  std::map<std::string, int> line_fault_node;
  for (const auto& l : model.lines) {
    const auto base = model.zone_base(l.from);
    int a = node_of(l.from);
    int b = node_of(l.to);
    for (const auto& br : model.breakers) {
      if (br.line != l.id) continue;
      const int bus_node = br.at_from_end ? a : b;
      const int priv = new_node(l.id + ":" + (br.at_from_end ? l.from : l.to));
      net.switches.push_back({br.id, bus_node, priv});
      (br.at_from_end ? a : b) = priv;
    }
    const Fault* fault = nullptr;
    for (const auto& f : model.faults) {
      if (f.line == l.id) fault = &f;
    }
    if (fault) {
      std::ostringstream name;
      name << l.id << "@" << fault->line_fraction;
      const int mid = new_node(name.str());
      line_fault_node[l.id] = mid;
      net.lines.push_back(line_section(l, base, fault->line_fraction, a, mid));
      net.lines.push_back(line_section(l, base, 1.0 - fault->line_fraction, mid, b));
    } else {
      net.lines.push_back(line_section(l, base, 1.0, a, b));
    }
  }

  for (const auto& t : model.transformers) {
    CompiledSeries windings{t.id, node_of(t.from), node_of(t.to), {}};
    windings.modes[0].open = true;
    windings.modes[1] = windings.modes[2] = {t.r, t.x, false};
    net.series.push_back(windings);
    CompiledSeries grounding{t.id, node_of(t.to), -1, {}};
    grounding.modes[0] = {t.r, t.x, false};
    grounding.modes[1].open = grounding.modes[2].open = true;
    net.series.push_back(grounding);
  }

  for (const auto& l : model.loads) {
    const double p = l.p_mw / model.s_base_mva();
    const double q = l.q_mvar / model.s_base_mva();
    const double s2 = p * p + q * q;
    CompiledSeries load{l.id, node_of(l.bus), -1, {}};
    load.modes.fill({p / s2, q / s2, false});
    net.series.push_back(load);
  }

  for (const auto& p : model.ports) {
    net.ports.push_back({p.id, node_of(p.bus), p.kind, p.r, p.x, p.ground_g});
  }

  for (const auto& f : model.faults) {
    const bool on_line = !f.line.empty();
    const int node = on_line ? line_fault_node.at(f.line) : node_of(f.bus);
    const auto base = model.zone_base(on_line ? model.find_line(f.line)->from : f.bus);
    net.faults.push_back({f.id, node, base.impedance_to_pu(f.r_ohm), f.type, f.phase});
  }
  return net;
}

std::vector<std::string> initially_inactive(const NetworkModel& model) {
  std::vector<std::string> ids;
  for (const auto& f : model.faults) ids.push_back(f.id);
  for (const auto& l : model.loads) {
    if (!l.connected) ids.push_back(l.id);
  }
  return ids;
}

}  // namespace powerdyn::network
