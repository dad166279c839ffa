#include "powerdyn/network/topology_state.hpp"

#include <numeric>

#include "powerdyn/core/errors.hpp"

namespace powerdyn::network {

namespace {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void join(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
  std::vector<std::size_t> parent;
};

}  // namespace

TopologyState::TopologyState(const CompiledNetwork& net) : net_(net) {
  for (const auto& s : net.series) series_flag_.push_back(flag_for(s.id));
  for (const auto& l : net.lines) line_flag_.push_back(flag_for(l.id));
  for (const auto& p : net.ports) port_flag_.push_back(flag_for(p.id));
  for (const auto& f : net.faults) fault_flag_.push_back(flag_for(f.id));
  for (std::size_t i = 0; i < net.switches.size(); ++i) switch_index_[net.switches[i].id] = i;
  closed_.assign(net.switches.size(), true);
}

std::size_t TopologyState::flag_for(const std::string& id) {
  auto [it, inserted] = id_flag_.try_emplace(id, flags_.size());
  if (inserted) flags_.push_back(true);
  return it->second;
}

bool TopologyState::set_active(const std::string& id, bool active) {
  auto it = id_flag_.find(id);
  if (it == id_flag_.end()) throw ConfigError("unknown network element '" + id + "'");
  if (flags_[it->second] == active) return false;
  flags_[it->second] = active;
  return true;
}

bool TopologyState::set_switch(const std::string& id, bool closed) {
  auto it = switch_index_.find(id);
  if (it == switch_index_.end()) throw ConfigError("unknown breaker '" + id + "'");
  if (closed_[it->second] == closed) return false;
  closed_[it->second] = closed;
  return true;
}

bool TopologyState::is_active(const std::string& id) const {
  if (auto it = id_flag_.find(id); it != id_flag_.end()) return flags_[it->second];
  if (auto it = switch_index_.find(id); it != switch_index_.end()) return closed_[it->second];
  throw ConfigError("unknown network element '" + id + "'");
}

std::vector<int> TopologyState::reduce(std::size_t& reduced_count) const {
  const std::size_t n = net_.node_count();
  DisjointSets merged(n);
  for (std::size_t i = 0; i < net_.switches.size(); ++i) {
    if (closed_[i]) merged.join(net_.switches[i].a, net_.switches[i].b);
  }

  // Electrical connectivity on top of the merge, plus grounding marks.
  DisjointSets connected = merged;
  std::vector<bool> used(n, false);
  std::vector<bool> grounded(n, false);
  auto touch = [&](int a, int b, bool to_ground) {
    if (a >= 0) used[merged.find(a)] = true;
    if (b >= 0) used[merged.find(b)] = true;
    if (a >= 0 && b >= 0) connected.join(merged.find(a), merged.find(b));
    if (to_ground) {
      if (a >= 0) grounded[merged.find(a)] = true;
      if (b >= 0) grounded[merged.find(b)] = true;
    }
  };
  for (std::size_t i = 0; i < net_.series.size(); ++i) {
    if (!series_active(i)) continue;
    const auto& s = net_.series[i];
    touch(s.a, s.b, s.a < 0 || s.b < 0);
  }
  for (std::size_t i = 0; i < net_.lines.size(); ++i) {
    if (!line_active(i)) continue;
    const auto& l = net_.lines[i];
    const bool shunt = l.model == LineModel::Bergeron || l.b_sh[1] > 0.0 || l.b_sh[0] > 0.0;
    touch(l.a, l.b, shunt);
  }
  for (std::size_t i = 0; i < net_.ports.size(); ++i) {
    if (port_active(i)) touch(net_.ports[i].node, -1, true);
  }
  for (std::size_t i = 0; i < net_.faults.size(); ++i) {
    if (fault_active(i)) touch(net_.faults[i].node, -1, true);
  }

  std::vector<bool> component_grounded(n, false);
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t r = merged.find(v);
    if (used[r] && grounded[r]) component_grounded[connected.find(r)] = true;
  }
  std::vector<std::string> floating;
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t r = merged.find(v);
    if (used[r] && !component_grounded[connected.find(r)]) floating.push_back(net_.node_names[v]);
  }
  if (!floating.empty()) {
    std::string names;
    for (const auto& f : floating) names += (names.empty() ? "" : ", ") + f;
    throw ConfigError("floating subnetwork without a path to ground: " + names);
  }

  std::vector<int> rep_index(n, -1);
  std::vector<int> out(n, -1);
  reduced_count = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t r = merged.find(v);
    if (!used[r]) continue;
    if (rep_index[r] < 0) rep_index[r] = static_cast<int>(reduced_count++);
    out[v] = rep_index[r];
  }
  return out;
}

}  // namespace powerdyn::network
