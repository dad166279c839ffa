#pragma once

#include <functional>
#include <span>
#include <vector>

#include "powerdyn/core/state_vector.hpp"

namespace powerdyn {

enum class SimulationMode { Emt, Phasor };

/// Fixed-step forward Euler configuration.
struct IntegratorConfig {
  double step_h;
  SimulationMode mode;

  static constexpr double kDefaultEmtStep = 50e-6;
  static constexpr double kDefaultPhasorStep = 1e-3;
  static constexpr double kMaxEmtStep = 100e-6;
  static constexpr double kMaxPhasorStep = 10e-3;

  static IntegratorConfig defaults(SimulationMode mode);
  /// Throws ConfigError when the step violates the mode bounds.
  void validate() const;
};

using DerivativeFn = std::function<void(std::span<const double> x, std::span<double> dx)>;

/// x <- x + h * dx, evaluated element by element in index order.
void euler_update(std::span<double> x, std::span<const double> dx, double h);

/// One forward Euler step over a whole state vector. A non-finite derivative
/// component raises NumericAbort naming the offending slot.
StateVector euler_step(const StateVector& state, const DerivativeFn& derivative, double h);

}  // namespace powerdyn
