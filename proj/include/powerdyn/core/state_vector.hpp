#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace powerdyn {

/// Flat vector of every dynamic state in a run, with a registry mapping
/// "device.slot" names to indices.
class StateVector {
 public:
  /// Registers a new slot and returns its index. Duplicate names throw.
  std::size_t add(const std::string& device, const std::string& slot, double initial = 0.0);

  std::size_t index(const std::string& device, const std::string& slot) const;
  bool contains(const std::string& device, const std::string& slot) const;
  const std::string& slot_name(std::size_t index) const { return names_.at(index); }

  std::size_t size() const { return values_.size(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  /// Index of the first non-finite value, or size() when all are finite.
  std::size_t first_non_finite() const;

 private:
  std::vector<double> values_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

}  // namespace powerdyn
