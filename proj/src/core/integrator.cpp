#include "powerdyn/core/integrator.hpp"

#include <cmath>

#include "powerdyn/core/errors.hpp"

namespace powerdyn {

IntegratorConfig IntegratorConfig::defaults(SimulationMode mode) {
  return {mode == SimulationMode::Emt ? kDefaultEmtStep : kDefaultPhasorStep, mode};
}

void IntegratorConfig::validate() const {
  if (!(step_h > 0.0)) throw ConfigError("integration step must be positive");
  const double limit = mode == SimulationMode::Emt ? kMaxEmtStep : kMaxPhasorStep;
  if (step_h > limit) {
    throw ConfigError(std::string(mode == SimulationMode::Emt ? "EMT" : "phasor") +
                      " step " + std::to_string(step_h) + " s exceeds " +
                      std::to_string(limit) + " s");
  }
}

void euler_update(std::span<double> x, std::span<const double> dx, double h) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += h * dx[i];
}

StateVector euler_step(const StateVector& state, const DerivativeFn& derivative, double h) {
  if (!(h > 0.0)) throw ConfigError("integration step must be positive");
  std::vector<double> dx(state.size(), 0.0);
  derivative(state.values(), dx);
  for (std::size_t i = 0; i < dx.size(); ++i) {
    if (!std::isfinite(dx[i])) {
      throw NumericAbort("non-finite derivative in slot " + state.slot_name(i));
    }
  }
  StateVector next = state;
  euler_update(next.values(), dx, h);
  return next;
}

}  // namespace powerdyn
