#include "powerdyn/core/state_vector.hpp"

#include <cmath>

#include "powerdyn/core/errors.hpp"

namespace powerdyn {

std::size_t StateVector::add(const std::string& device, const std::string& slot, double initial) {
  std::string name = device + "." + slot;
  if (lookup_.contains(name)) {
    throw ConfigError("state slot registered twice: " + name);
  }
  const std::size_t idx = values_.size();
  lookup_.emplace(name, idx);
  names_.push_back(std::move(name));
  values_.push_back(initial);
  return idx;
}

std::size_t StateVector::index(const std::string& device, const std::string& slot) const {
  auto it = lookup_.find(device + "." + slot);
  if (it == lookup_.end()) {
    throw ConfigError("unknown state slot " + device + "." + slot);
  }
  return it->second;
}

bool StateVector::contains(const std::string& device, const std::string& slot) const {
  return lookup_.contains(device + "." + slot);
}

std::size_t StateVector::first_non_finite() const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) return i;
  }
  return values_.size();
}

}  // namespace powerdyn
