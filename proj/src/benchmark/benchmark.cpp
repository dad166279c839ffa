#include "powerdyn/benchmark/benchmark.hpp"

#include <fstream>
#include <map>

#include "json.hpp"
#include "powerdyn/core/errors.hpp"

namespace powerdyn::benchmark {

namespace fs = std::filesystem;
using nlohmann::json;

SgModel parse_sg_model(const std::string& tag) {
  if (tag == "simplified") return SgModel::Simplified;
  if (tag == "model22") return SgModel::Model22;
  if (tag == "model22_sat") return SgModel::Model22Sat;
  throw ConfigError("unknown SG model '" + tag + "' (expected simplified, model22 or model22_sat)");
}

std::string to_string(SgModel model) {
  switch (model) {
    case SgModel::Simplified: return "simplified";
    case SgModel::Model22: return "model22";
    case SgModel::Model22Sat: return "model22_sat";
  }
  return "?";
}

ConverterModel parse_converter_model(const std::string& tag) {
  if (tag == "emt_avg") return ConverterModel::EmtAverage;
  if (tag == "phasor") return ConverterModel::Phasor;
  throw ConfigError("unknown converter model '" + tag + "' (expected emt_avg or phasor)");
}

std::string to_string(ConverterModel model) {
  return model == ConverterModel::EmtAverage ? "emt_avg" : "phasor";
}

Axis parse_axis(const std::string& tag) {
  if (tag == "none") return Axis::None;
  if (tag == "sg") return Axis::Sg;
  if (tag == "line") return Axis::Line;
  if (tag == "converter") return Axis::Converter;
  if (tag == "res") return Axis::Res;
  throw ConfigError("unknown axis '" + tag + "' (expected sg, line, converter or res)");
}

std::string to_string(Axis axis) {
  switch (axis) {
    case Axis::None: return "none";
    case Axis::Sg: return "sg";
    case Axis::Line: return "line";
    case Axis::Converter: return "converter";
    case Axis::Res: return "res";
  }
  return "?";
}

SimulationMode ModelSelection::mode() const {
  return converter == ConverterModel::EmtAverage ? SimulationMode::Emt : SimulationMode::Phasor;
}

std::string ModelSelection::variant(Axis axis) const {
  switch (axis) {
    case Axis::None: return "base";
    case Axis::Sg: return to_string(sg);
    case Axis::Line: return network::to_string(line);
    case Axis::Converter: return to_string(converter);
    case Axis::Res: return res::to_string(res);
  }
  return "?";
}

std::string ModelSelection::label() const {
  return "sg=" + to_string(sg) + ",line=" + network::to_string(line) + ",converter=" + to_string(converter) +
         ",res=" + res::to_string(res);
}

std::vector<ModelSelection> axis_variants(const ModelSelection& base, Axis axis) {
  std::vector<ModelSelection> out;
  auto with = [&](auto setter) {
    ModelSelection s = base;
    setter(s);
    out.push_back(s);
  };
  switch (axis) {
    case Axis::None: out.push_back(base); break;
    case Axis::Sg:
      for (SgModel m : {SgModel::Model22, SgModel::Model22Sat, SgModel::Simplified}) with([m](auto& s) { s.sg = m; });
      break;
    case Axis::Line:
      for (auto m : {network::LineModel::Pi, network::LineModel::Bergeron}) with([m](auto& s) { s.line = m; });
      break;
    case Axis::Converter:
      for (auto m : {ConverterModel::EmtAverage, ConverterModel::Phasor}) with([m](auto& s) { s.converter = m; });
      break;
    case Axis::Res:
      for (auto m : {res::ResKind::IdealDc, res::ResKind::StaticPv, res::ResKind::StaticWind,
                     res::ResKind::DynamicPv, res::ResKind::DynamicWind}) {
        with([m](auto& s) { s.res = m; });
      }
      break;
  }
  return out;
}

double initial_dispatch(int test_id) { return test_id == 1 ? 0.5 : 0.8; }

namespace {

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("missing benchmark parameter file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("malformed parameter file " + path.string() + ": " + e.what());
  }
}

/// Runs a parser over one file, turning JSON access errors into
/// configuration errors that name the file.
template <class F>
auto parse_file(const fs::path& path, F&& parse) {
  const json doc = read_json(path);
  try {
    return parse(doc);
  } catch (const json::exception& e) {
    throw ConfigError("bad entry in " + path.string() + ": " + e.what());
  }
}

machines::Model22Params parse_model22(const json& j) {
  machines::Model22Params p;
  p.ra = j.at("ra");
  p.ll = j.at("ll");
  p.lad = j.at("lad");
  p.laq = j.at("laq");
  p.lfd = j.at("lfd");
  p.rfd = j.at("rfd");
  p.l1d = j.at("l1d");
  p.r1d = j.at("r1d");
  p.l1q = j.at("l1q");
  p.r1q = j.at("r1q");
  p.l2q = j.at("l2q");
  p.r2q = j.at("r2q");
  p.h = j.at("h");
  return p;
}

converter::VscParams parse_vsc(const json& j) {
  converter::VscParams p;
  p.s_rated_mva = j.at("s_rated_mva");
  p.r_filter = j.at("r_filter");
  p.x_filter = j.at("x_filter");
  p.c_dc = j.at("c_dc");
  p.i_max = j.at("i_max");
  p.droop_gain = j.at("droop_gain");
  p.deadband_hz = j.at("deadband_hz");
  p.frt_threshold = j.at("frt_threshold");
  p.frt_gain = j.at("frt_gain");
  p.pll_kp = j.at("pll_kp");
  p.pll_ki = j.at("pll_ki");
  p.pll_limit = j.at("pll_limit");
  p.outer_kp = j.at("outer_kp");
  p.outer_ki = j.at("outer_ki");
  p.t_meas = j.at("t_meas");
  p.t_current = j.at("t_current");
  p.k_dc = j.at("k_dc");
  p.chopper_on = j.at("chopper_on");
  p.chopper_gain = j.at("chopper_gain");
  return p;
}

res::WindParams parse_wind(const json& j) {
  res::WindParams w;
  w.radius = j.at("radius");
  w.rho = j.at("rho");
  w.rated_power_w = j.at("rated_power_w");
  w.n_turbines = j.at("n_turbines");
  w.j_rotor = j.at("j_rotor");
  w.j_gen = j.at("j_gen");
  w.k_shaft = j.at("k_shaft");
  w.d_shaft = j.at("d_shaft");
  w.omega_rated = j.at("omega_rated");
  w.efficiency = j.at("efficiency");
  w.beta_min = j.at("beta_min");
  w.beta_max = j.at("beta_max");
  w.pitch_rate = j.at("pitch_rate");
  w.t_pitch = j.at("t_pitch");
  w.t_torque = j.at("t_torque");
  w.torque_kp = j.at("torque_kp");
  w.torque_ki = j.at("torque_ki");
  w.pitch_kp = j.at("pitch_kp");
  w.pitch_ki = j.at("pitch_ki");
  w.schedule_knee = j.at("schedule_knee");
  w.schedule_points = j.at("schedule_points").get<std::vector<double>>();
  return w;
}

struct GeneratorEntry {
  std::string id;
  std::string terminal;
  std::string bus;
  double s_rated_mva;
  network::BusType type;
  double p_mw;
  double v_set;
};

struct MachineData {
  machines::Model22Params model22;
  machines::SaturationParams saturation;
  machines::SimplifiedSGParams simplified;
  machines::AvrParams avr;
  machines::GovernorParams governor;
  double xfmr_r = 0.0;
  double xfmr_x = 0.0;
  std::vector<GeneratorEntry> generators;
};

MachineData parse_machines(const json& j) {
  MachineData d;
  d.model22 = parse_model22(j.at("model22"));
  const json& s = j.at("saturation");
  d.saturation = machines::SaturationParams::fit(s.at("knee"), s.at("psi1"), s.at("k1"), s.at("psi2"), s.at("k2"));
  const json& sm = j.at("simplified");
  d.simplified.h = sm.at("h");
  d.simplified.tau_f = sm.at("tau_f");
  d.simplified.x_s = sm.at("x_s");
  d.simplified.r_s = sm.at("r_s");
  const json& avr = j.at("avr");
  d.avr.t_meas = avr.at("t_meas");
  d.avr.kp = avr.at("kp");
  d.avr.ki = avr.at("ki");
  d.avr.vf_min = avr.at("vf_min");
  d.avr.vf_max = avr.at("vf_max");
  const json& gov = j.at("governor");
  d.governor.droop = gov.at("droop");
  d.governor.t_servo = gov.at("t_servo");
  d.governor.pm_max = gov.at("pm_max");
  d.xfmr_r = j.at("unit_transformer").at("r");
  d.xfmr_x = j.at("unit_transformer").at("x");
  for (const json& g : j.at("generators")) {
    const std::string type = g.at("type");
    network::BusType bt;
    if (type == "slack") {
      bt = network::BusType::Slack;
    } else if (type == "pv") {
      bt = network::BusType::PV;
    } else {
      throw ConfigError("generator type '" + type + "' must be slack or pv");
    }
    d.generators.push_back({g.at("id"), g.at("terminal"), g.at("bus"), g.at("s_rated_mva"), bt, g.at("p_mw"),
                            g.at("v_set")});
  }
  return d;
}

network::NetworkModel parse_network(const json& j) {
  network::NetworkModel net(j.at("s_base_mva"), j.at("f_nom_hz"));
  for (const json& b : j.at("buses")) net.buses.push_back({b.at("id"), b.at("v_base_kv")});
  std::map<std::string, network::SequenceParams> types;
  for (const auto& [name, t] : j.at("line_types").items()) {
    types[name] = {t.at("r1"), t.at("x1"), t.at("b1"), t.at("r0"), t.at("x0"), t.at("b0")};
  }
  for (const json& l : j.at("lines")) {
    const std::string type = l.at("type");
    const auto it = types.find(type);
    if (it == types.end()) throw ConfigError("line type '" + type + "' is not defined");
    network::Line line;
    line.id = l.at("id");
    line.from = l.at("from");
    line.to = l.at("to");
    line.length_km = l.at("length_km");
    line.per_km = it->second;
    net.lines.push_back(line);
  }
  for (const json& d : j.at("loads")) {
    net.loads.push_back({d.at("id"), d.at("bus"), d.at("p_mw"), d.at("q_mvar"), true});
  }
  return net;
}

res::ResConfig parse_res(const json& j, const fs::path& data_dir, double s_rated_mva) {
  res::ResConfig cfg;
  cfg.s_base_w = s_rated_mva * 1e6;
  const json& pv = j.at("pv");
  res::PvCellParams cell;
  cell.i_ph_stc = pv.at("i_ph_stc");
  cell.i_s = pv.at("i_s");
  cell.a_n = pv.at("a_n");
  cell.r_h = pv.at("r_h");
  cell.alpha_t = pv.at("alpha_t");
  cell.n_series = pv.at("n_series");
  cfg.pv = res::size_pv_array(cell, static_cast<double>(pv.at("plant_mpp_mw")) * 1e6);
  cfg.irradiance = pv.at("irradiance");
  cfg.v_dc_nominal = pv.at("v_dc_nominal");
  const json& tr = j.at("tracking");
  const std::string mode = tr.at("mode");
  if (mode == "mpp") {
    cfg.tracking = res::TrackingMode::Mpp;
  } else if (mode == "dpp") {
    cfg.tracking = res::TrackingMode::Dpp;
  } else {
    throw ConfigError("tracking mode '" + mode + "' must be mpp or dpp");
  }
  cfg.po_period = tr.at("period_s");
  cfg.boost.delta_d = tr.at("delta_d");
  cfg.boost.d_max = tr.at("d_max");
  cfg.wind = parse_wind(j.at("wind"));
  cfg.wind_speed = j.at("wind").at("wind_speed");
  const fs::path cp_path = data_dir / j.at("cp_table").get<std::string>();
  if (!fs::exists(cp_path)) throw ConfigError("missing benchmark parameter file " + cp_path.string());
  cfg.cp = std::make_shared<const res::CpTable>(res::CpTable::load(cp_path));
  return cfg;
}

}  // namespace

sim::System build_benchmark(const ModelSelection& selection, const fs::path& data_dir, const TestCase* test) {
  network::NetworkModel net = parse_file(data_dir / "network.json", parse_network);
  const MachineData machines = parse_file(data_dir / "machines.json", parse_machines);
  const fs::path vsc_path = data_dir / "converter.json";
  const json vsc_doc = read_json(vsc_path);
  converter::VscParams vsc;
  std::string vsc_id;
  std::string vsc_bus;
  try {
    vsc = parse_vsc(vsc_doc);
    vsc_id = vsc_doc.at("id");
    vsc_bus = vsc_doc.at("bus");
  } catch (const json::exception& e) {
    throw ConfigError("bad entry in " + vsc_path.string() + ": " + e.what());
  }
  vsc.f_nom = net.f_nom();
  vsc.validate();
  res::ResConfig source = parse_file(data_dir / "res.json", [&](const json& j) {
    return parse_res(j, data_dir, vsc.s_rated_mva);
  });
  source.kind = selection.res;
  source.validate();

  for (auto& line : net.lines) line.model = selection.line;
  const double s_base = net.s_base_mva();
  const bool emt = selection.mode() == SimulationMode::Emt;

  sim::System system;
  system.s_base_mva = s_base;
  for (const auto& b : net.buses) {
    if (b.v_base_kv > 100.0) system.bus_ids.push_back(b.id);
  }

  for (std::size_t g = 0; g < machines.generators.size(); ++g) {
    const GeneratorEntry& gen = machines.generators[g];
    const double to_sys = s_base / gen.s_rated_mva;
    net.transformers.push_back({"T" + gen.id.substr(1), gen.terminal, gen.bus, machines.xfmr_r * to_sys,
                                machines.xfmr_x * to_sys});
    sim::MachineSetup setup{gen.s_rated_mva, gen.type, gen.p_mw, gen.v_set, machines.avr, machines.governor};
    network::Port port;
    port.id = gen.id + ".port";
    port.bus = gen.terminal;
    port.kind = network::PortKind::VoltageBehindImpedance;
    if (selection.sg == SgModel::Simplified) {
      machines::SimplifiedSGParams p = machines.simplified;
      p.s_rated = gen.s_rated_mva * 1e6;
      port.r = p.r_s * to_sys;
      port.x = p.x_s * to_sys;
      system.devices.push_back(std::make_unique<sim::SimplifiedSGDevice>(gen.id, port.id, setup, p));
    } else {
      std::tie(port.r, port.x) = sim::Model22Device::port_impedance(machines.model22, gen.s_rated_mva, s_base);
      const machines::SaturationParams sat =
          selection.sg == SgModel::Model22Sat ? machines.saturation : machines::SaturationParams::none();
      system.devices.push_back(
          std::make_unique<sim::Model22Device>(gen.id, port.id, setup, machines.model22, sat));
    }
    net.ports.push_back(port);
  }

  const int test_id = test ? test->id : 0;
  network::Port vsc_port;
  vsc_port.id = vsc_id + ".port";
  vsc_port.bus = vsc_bus;
  vsc_port.kind = emt ? network::PortKind::VoltageBehindImpedance : network::PortKind::CurrentSource;
  vsc_port.r = vsc.r_filter * s_base / vsc.s_rated_mva;
  vsc_port.x = vsc.x_filter * s_base / vsc.s_rated_mva;
  net.ports.push_back(vsc_port);
  const double p_vsc = initial_dispatch(test_id) * vsc.s_rated_mva;
  system.devices.push_back(std::make_unique<sim::VscDevice>(vsc_id, vsc_port.id, vsc, source, p_vsc, 0.0));

  if (test) {
    net.loads.insert(net.loads.end(), test->loads.begin(), test->loads.end());
    net.faults.insert(net.faults.end(), test->faults.begin(), test->faults.end());
    net.breakers.insert(net.breakers.end(), test->breakers.begin(), test->breakers.end());
  }
  net.validate();
  system.inactive = network::initially_inactive(net);
  system.network = network::compile(net);
  return system;
}

}  // namespace powerdyn::benchmark
