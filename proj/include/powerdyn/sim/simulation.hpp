#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "powerdyn/core/integrator.hpp"
#include "powerdyn/network/emt_network.hpp"
#include "powerdyn/network/network_model.hpp"
#include "powerdyn/sim/devices.hpp"

namespace powerdyn::sim {

enum class EventType { Setpoint, Connect, Disconnect, BreakerOpen, BreakerClose, Trip };

EventType parse_event_type(const std::string& tag);
std::string to_string(EventType type);

/// A timed change: setpoints address devices, connect/disconnect address
/// network elements (loads, faults, lines, transformers, ports), breaker
/// events address breakers, and a trip removes a device with its port.
struct Event {
  double time = 0.0;
  EventType type = EventType::Connect;
  std::string target;
  double p_mw = 0.0;
  double q_mvar = 0.0;
};

/// Uniformly sampled signals of one run plus timing metadata.
struct RunResult {
  std::vector<std::string> names;  // signal columns, time excluded
  std::vector<double> time;
  std::vector<double> data;        // row-major: time.size() x names.size()
  double wall_seconds = 0.0;       // integration loop only
  std::size_t steps = 0;
  std::map<std::string, std::string> meta;

  std::size_t rows() const { return time.size(); }
  /// Column index of a signal; throws ConfigError when absent.
  std::size_t column(const std::string& name) const;
  std::vector<double> series(const std::string& name) const;
  double at(std::size_t row, std::size_t col) const { return data[row * names.size() + col]; }
};

/// An assembled system ready to simulate.
struct System {
  network::CompiledNetwork network;
  std::vector<std::unique_ptr<Device>> devices;
  std::vector<std::string> inactive;  // elements out of service at start
  double s_base_mva = 100.0;
  std::vector<std::string> bus_ids;   // buses whose voltage magnitude is recorded
};

struct RunOptions {
  SimulationMode mode = SimulationMode::Emt;
  double step = IntegratorConfig::kDefaultEmtStep;
  double duration = 10.0;
  double settle = 1.0;            // EMT settling before t = 0, not timed or recorded
  double output_interval = 0.0;   // 0 records every step
  std::vector<std::string> signals;  // empty records everything
  network::Discretization discretization = network::Discretization::Trapezoidal;

  void validate() const;
};

/// Load flow, back-initialization, optional EMT settling and the fixed-step
/// Euler loop. Each step fires due events, lets devices set their sources,
/// solves the network, evaluates derivatives, records, then integrates.
RunResult simulate(System& system, const std::vector<Event>& events, const RunOptions& options);

/// Names of every recordable signal of a system in output order.
std::vector<std::string> available_signals(const System& system);

}  // namespace powerdyn::sim
