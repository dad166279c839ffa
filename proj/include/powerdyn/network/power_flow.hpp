#pragma once

#include <string>
#include <vector>

#include "powerdyn/network/solver.hpp"

namespace powerdyn::network {

enum class BusType { Slack, PV, PQ };

/// Load-flow role of one port. Powers are injections into the network in
/// p.u. on the system base; `v` is the scheduled voltage magnitude.
struct PowerFlowSpec {
  std::string port;
  BusType type = BusType::PQ;
  double p = 0.0;
  double q = 0.0;
  double v = 1.0;
};

struct PowerFlowResult {
  std::vector<Complex> node_voltage;  // per compiled node, zero when unused
  std::vector<Complex> port_power;    // per compiled port, injection
  std::vector<Complex> port_current;  // per compiled port, injection
  int iterations = 0;
};

/// Newton-Raphson load flow on the positive-sequence network with the
/// elements listed in `inactive` out of service. Exactly one slack port is
/// required; ports without a spec inject nothing.
PowerFlowResult solve_power_flow(const CompiledNetwork& net, const std::vector<PowerFlowSpec>& specs,
                                 const std::vector<std::string>& inactive,
                                 double tolerance = 1e-10, int max_iterations = 30);

}  // namespace powerdyn::network
