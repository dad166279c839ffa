#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "powerdyn/network/network_model.hpp"

namespace powerdyn::network {

/// Switching state of a compiled network: which elements are in service,
/// which breakers are closed, and the resulting node reduction.
class TopologyState {
 public:
  explicit TopologyState(const CompiledNetwork& net);

  /// Returns true when the state changed. Unknown ids throw ConfigError.
  bool set_active(const std::string& id, bool active);
  bool set_switch(const std::string& id, bool closed);
  bool is_active(const std::string& id) const;

  bool series_active(std::size_t i) const { return flags_[series_flag_[i]]; }
  bool line_active(std::size_t i) const { return flags_[line_flag_[i]]; }
  bool port_active(std::size_t i) const { return flags_[port_flag_[i]]; }
  bool fault_active(std::size_t i) const { return flags_[fault_flag_[i]]; }
  bool switch_closed(std::size_t i) const { return closed_[i]; }

  /// Maps every node to a reduced index (closed breakers merge nodes; nodes
  /// touched by no active element map to -1). Throws ConfigError naming the
  /// nodes of any subnetwork without a path to ground.
  std::vector<int> reduce(std::size_t& reduced_count) const;

 private:
  std::size_t flag_for(const std::string& id);

  const CompiledNetwork& net_;
  std::unordered_map<std::string, std::size_t> id_flag_;
  std::vector<bool> flags_;
  std::vector<std::size_t> series_flag_, line_flag_, port_flag_, fault_flag_;
  std::unordered_map<std::string, std::size_t> switch_index_;
  std::vector<bool> closed_;
};

}  // namespace powerdyn::network
