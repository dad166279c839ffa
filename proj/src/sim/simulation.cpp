#include "powerdyn/sim/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_map>

#include "powerdyn/core/errors.hpp"
#include "powerdyn/core/event_queue.hpp"
#include "powerdyn/network/phasor_network.hpp"
#include "powerdyn/network/power_flow.hpp"

namespace powerdyn::sim {

EventType parse_event_type(const std::string& tag) {
  if (tag == "setpoint") return EventType::Setpoint;
  if (tag == "connect") return EventType::Connect;
  if (tag == "disconnect") return EventType::Disconnect;
  if (tag == "breaker_open") return EventType::BreakerOpen;
  if (tag == "breaker_close") return EventType::BreakerClose;
  if (tag == "trip") return EventType::Trip;
  throw ConfigError("unknown event type '" + tag + "'");
}

std::string to_string(EventType type) {
  switch (type) {
    case EventType::Setpoint: return "setpoint";
    case EventType::Connect: return "connect";
    case EventType::Disconnect: return "disconnect";
    case EventType::BreakerOpen: return "breaker_open";
    case EventType::BreakerClose: return "breaker_close";
    case EventType::Trip: return "trip";
  }
  return "?";
}

std::size_t RunResult::column(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ConfigError("signal '" + name + "' not in run result");
  return static_cast<std::size_t>(it - names.begin());
}

std::vector<double> RunResult::series(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out(rows());
  for (std::size_t r = 0; r < rows(); ++r) out[r] = at(r, c);
  return out;
}

void RunOptions::validate() const {
  std::vector<std::string> problems;
  try {
    IntegratorConfig{step, mode}.validate();
  } catch (const ConfigError& e) {
    problems.push_back(e.what());
  }
  if (!(duration >= 0.0)) problems.push_back("duration must be non-negative");
  if (!(settle >= 0.0)) problems.push_back("settling time must be non-negative");
  if (!(output_interval >= 0.0)) problems.push_back("output interval must be non-negative");
  if (!problems.empty()) throw ConfigError(problems);
}

std::vector<std::string> available_signals(const System& system) {
  std::vector<std::string> out;
  for (const auto& d : system.devices) {
    for (const auto& s : d->signal_names()) out.push_back(d->id() + "." + s);
  }
  for (const auto& b : system.bus_ids) out.push_back(b + ".v_pu");
  return out;
}

namespace {

std::unique_ptr<network::NetworkSolver> make_solver(const System& system, const RunOptions& opt) {
  if (opt.mode == SimulationMode::Emt) {
    return std::make_unique<network::EmtNetwork>(system.network, opt.step, opt.discretization);
  }
  return std::make_unique<network::PhasorNetwork>(system.network);
}

void validate_events(const System& system, const network::NetworkSolver& solver,
                     const std::vector<Event>& events, double duration) {
  std::vector<std::string> problems;
  auto has_device = [&](const std::string& id) {
    return std::any_of(system.devices.begin(), system.devices.end(),
                       [&](const auto& d) { return d->id() == id; });
  };
  for (const auto& e : events) {
    if (!(e.time >= 0.0) || e.time > duration) {
      problems.push_back(to_string(e.type) + " event on '" + e.target + "' at t=" +
                         std::to_string(e.time) + " s lies outside [0, duration]");
    }
    if (e.type == EventType::Setpoint || e.type == EventType::Trip) {
      if (!has_device(e.target)) problems.push_back("event references unknown device '" + e.target + "'");
      continue;
    }
    try {
      (void)solver.is_active(e.target);
    } catch (const ConfigError&) {
      problems.push_back("event references unknown network element '" + e.target + "'");
    }
  }
  if (!problems.empty()) throw ConfigError(problems);
}

}  // namespace

RunResult simulate(System& system, const std::vector<Event>& events, const RunOptions& opt) {
  opt.validate();
  auto solver = make_solver(system, opt);
  validate_events(system, *solver, events, opt.duration);
  for (const auto& id : system.inactive) solver->set_active(id, false);

  const auto& net = system.network;
  std::unordered_map<std::string, Device*> by_id;
  std::vector<network::PowerFlowSpec> specs;
  for (auto& d : system.devices) {
    const int port = net.port_index(d->port_id());
    if (port < 0) throw ConfigError("device '" + d->id() + "' references unknown port '" + d->port_id() + "'");
    d->bind_port(port);
    by_id[d->id()] = d.get();
    specs.push_back(d->power_flow_spec(system.s_base_mva));
  }
  const auto pf = network::solve_power_flow(net, specs, system.inactive);

  const double h = opt.step;
  const bool emt = opt.mode == SimulationMode::Emt;
  const std::int64_t k_start = emt ? -std::llround(opt.settle / h) : 0;
  const std::int64_t k_end = std::llround(opt.duration / h);
  StepContext ctx{static_cast<double>(k_start) * h, h, opt.mode, net.omega_nom, system.s_base_mva};

  StateVector x;
  network::SteadyState ss;
  ss.node_voltage = pf.node_voltage;
  ss.port_source.assign(net.ports.size(), network::Complex{});
  ss.t0 = ctx.t;
  for (auto& d : system.devices) {
    const auto p = static_cast<std::size_t>(d->port());
    ss.port_source[p] = d->initialize(pf.node_voltage[static_cast<std::size_t>(net.ports[p].node)],
                                      pf.port_current[p], x, ctx);
  }
  solver->initialize(ss);

  // Output selection.
  const auto all = available_signals(system);
  std::vector<std::size_t> pick;
  if (opt.signals.empty()) {
    for (std::size_t k = 0; k < all.size(); ++k) pick.push_back(k);
  } else {
    std::vector<std::string> missing;
    for (const auto& s : opt.signals) {
      const auto it = std::find(all.begin(), all.end(), s);
      if (it == all.end()) {
        missing.push_back("unknown output signal '" + s + "'");
      } else {
        pick.push_back(static_cast<std::size_t>(it - all.begin()));
      }
    }
    if (!missing.empty()) throw ConfigError(missing);
  }
  std::vector<int> bus_nodes;
  for (const auto& b : system.bus_ids) {
    const auto it = std::find(net.node_names.begin(), net.node_names.end(), b);
    if (it == net.node_names.end()) throw ConfigError("unknown bus '" + b + "'");
    bus_nodes.push_back(static_cast<int>(it - net.node_names.begin()));
  }

  RunResult result;
  for (auto k : pick) result.names.push_back(all[k]);
  const std::int64_t decimation =
      opt.output_interval > 0.0 ? std::max<std::int64_t>(1, std::llround(opt.output_interval / h)) : 1;
  result.meta["mode"] = emt ? "emt" : "phasor";
  result.meta["step_s"] = std::to_string(h);
  result.meta["duration_s"] = std::to_string(opt.duration);

  EventQueue<Event> queue(h);
  for (const auto& e : events) queue.schedule(e.time, e);

  std::vector<double> dx(x.size(), 0.0);
  std::vector<double> row(all.size(), 0.0);
  auto apply = [&](const Event& e) {
    switch (e.type) {
      case EventType::Setpoint: by_id.at(e.target)->set_setpoint(e.p_mw, e.q_mvar); break;
      case EventType::Connect: solver->set_active(e.target, true); break;
      case EventType::Disconnect: solver->set_active(e.target, false); break;
      case EventType::BreakerOpen: solver->set_switch(e.target, false); break;
      case EventType::BreakerClose: solver->set_switch(e.target, true); break;
      case EventType::Trip: {
        Device* d = by_id.at(e.target);
        d->trip();
        solver->set_active(d->port_id(), false);
        break;
      }
    }
  };

  if (opt.duration <= 0.0) return result;

  using Clock = std::chrono::steady_clock;
  Clock::time_point started{};
  for (std::int64_t k = k_start; k <= k_end; ++k) {
    if (k == 0) started = Clock::now();
    ctx.t = static_cast<double>(k) * h;
    if (k >= 0) {
      for (const auto& entry : queue.pop_due(k)) apply(entry.payload);
    }
    for (auto& d : system.devices) d->set_source(x, *solver, ctx);
    solver->solve(ctx.t);
    std::fill(dx.begin(), dx.end(), 0.0);
    for (auto& d : system.devices) d->derivatives(x, dx, *solver, ctx);

    if (k >= 0 && k % decimation == 0) {
      std::size_t c = 0;
      for (const auto& d : system.devices) {
        for (double v : d->signals()) row[c++] = v;
      }
      for (int node : bus_nodes) row[c++] = solver->node_voltage_magnitude(node);
      result.time.push_back(ctx.t);
      for (auto p : pick) result.data.push_back(row[p]);
    }
    if (k == k_end) break;

    auto values = x.values();
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += h * dx[i];
    if (const auto bad = x.first_non_finite(); bad < x.size()) {
      throw NumericAbort("state '" + x.slot_name(bad) + "' became non-finite at t=" +
                         std::to_string(ctx.t + h) + " s");
    }
    ctx.t = static_cast<double>(k + 1) * h;
    for (auto& d : system.devices) d->post_step(x, ctx);
    if (k >= 0) ++result.steps;
  }
  result.wall_seconds = std::chrono::duration<double>(Clock::now() - started).count();
  return result;
}

}  // namespace powerdyn::sim
