#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "powerdyn/core/per_unit.hpp"

namespace powerdyn::network {

enum class LineModel { Pi, Bergeron };

LineModel parse_line_model(const std::string& tag);
std::string to_string(LineModel model);

/// Per-km sequence data in SI: ohm/km for r and x (at f_nom), S/km for b.
struct SequenceParams {
  double r1 = 0.0;
  double x1 = 0.0;
  double b1 = 0.0;
  double r0 = 0.0;
  double x0 = 0.0;
  double b0 = 0.0;
};

struct Bus {
  std::string id;
  double v_base_kv = 0.0;
};

struct Line {
  std::string id;
  std::string from;
  std::string to;
  double length_km = 0.0;
  SequenceParams per_km;
  LineModel model = LineModel::Pi;
};

/// Unit transformer, p.u. on the system base. Zero sequence is blocked
/// between the windings and grounded through the leakage on the `to` side
/// (delta on the generator side, grounded star on the network side).
struct Transformer {
  std::string id;
  std::string from;
  std::string to;
  double r = 0.0;
  double x = 0.0;
};

/// Constant-impedance grounded-star load specified at 1 p.u. voltage.
struct Load {
  std::string id;
  std::string bus;
  double p_mw = 0.0;
  double q_mvar = 0.0;
  bool connected = true;
};

enum class PortKind { VoltageBehindImpedance, CurrentSource };

/// Attachment point of a dynamic device (machine or converter).
struct Port {
  std::string id;
  std::string bus;
  PortKind kind = PortKind::VoltageBehindImpedance;
  double r = 0.0;  // p.u. system base, aerial (positive/negative sequence)
  double x = 0.0;
  double ground_g = 1e-3;  // zero-sequence conductance to ground, p.u.
};

enum class FaultType { ThreePhase, SinglePhase };

struct Fault {
  std::string id;
  std::string bus;               // set for bus faults
  std::string line;              // set for line faults
  double line_fraction = 0.5;    // distance from the line's `from` end
  double r_ohm = 0.0;
  FaultType type = FaultType::ThreePhase;
  int phase = 0;                 // 0, 1, 2 for a, b, c (single-phase only)
};

/// Ideal breaker at one end of a line.
struct Breaker {
  std::string id;
  std::string line;
  bool at_from_end = true;
};

/// Bus/branch description of a three-phase network.
class NetworkModel {
 public:
  NetworkModel(double s_base_mva, double f_nom);

  double s_base_mva() const { return s_base_mva_; }
  double f_nom() const { return f_nom_; }
  double omega_nom() const;
  PerUnitBase zone_base(const std::string& bus) const;

  std::vector<Bus> buses;
  std::vector<Line> lines;
  std::vector<Transformer> transformers;
  std::vector<Load> loads;
  std::vector<Port> ports;
  std::vector<Fault> faults;
  std::vector<Breaker> breakers;

  int bus_index(const std::string& id) const;  // -1 when absent
  const Line* find_line(const std::string& id) const;

  /// All structural problems at once (empty when valid).
  std::vector<std::string> problems() const;
  /// Throws ConfigError listing problems().
  void validate() const;

 private:
  double s_base_mva_;
  double f_nom_;
};

// ---------------------------------------------------------------------------
// Compiled topology shared by the EMT and phasor solvers. A node is a
// three-phase terminal group; node -1 is ground.

struct ModeParams {
  double r = 0.0;
  double x = 0.0;  // reactance at f_nom, p.u.
  bool open = false;
};

/// Series R-L per mode (index 0 = zero sequence, 1 and 2 = aerial).
struct CompiledSeries {
  std::string id;
  int a = -1;
  int b = -1;
  std::array<ModeParams, 3> modes;
};

/// One line section with totals over its length.
struct CompiledLine {
  std::string id;       // owning line id
  int a = -1;
  int b = -1;
  LineModel model = LineModel::Pi;
  std::array<double, 3> r{};  // per mode totals, p.u.
  std::array<double, 3> x{};
  std::array<double, 3> b_sh{};
};

struct CompiledPort {
  std::string id;
  int node = -1;
  PortKind kind = PortKind::VoltageBehindImpedance;
  double r = 0.0;
  double x = 0.0;
  double ground_g = 0.0;
};

struct CompiledFault {
  std::string id;
  int node = -1;
  double r = 0.0;  // p.u.
  FaultType type = FaultType::ThreePhase;
  int phase = 0;
};

struct CompiledSwitch {
  std::string id;
  int a = -1;
  int b = -1;
};

struct CompiledNetwork {
  double omega_nom = 0.0;
  std::vector<std::string> node_names;
  std::vector<int> bus_node;  // bus index -> node
  std::vector<CompiledSeries> series;
  std::vector<CompiledLine> lines;
  std::vector<CompiledPort> ports;
  std::vector<CompiledFault> faults;
  std::vector<CompiledSwitch> switches;

  std::size_t node_count() const { return node_names.size(); }
  int port_index(const std::string& id) const;
};

/// Lowers a validated model: converts to p.u., splits lines at fault
/// locations, and gives breakered line ends private nodes. Loads and
/// transformers become series elements (node -1 is ground); line shunts stay
/// inside the line sections. Line sections carry the owning line's id, and
/// both transformer branches carry the transformer's id.
CompiledNetwork compile(const NetworkModel& model);

/// Groups of element ids that start inactive (faults, disconnected loads).
std::vector<std::string> initially_inactive(const NetworkModel& model);

}  // namespace powerdyn::network
