#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace powerdyn {

/// Invalid model, network or scenario description. Detected before or while
/// assembling a simulation.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
  explicit ConfigError(const std::vector<std::string>& problems);

  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// The integration produced a non-finite or physically impossible value.
class NumericAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace powerdyn
