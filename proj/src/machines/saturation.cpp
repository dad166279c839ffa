#include "powerdyn/machines/saturation.hpp"

#include <cmath>

#include "powerdyn/core/errors.hpp"

namespace powerdyn::machines {

SaturationParams SaturationParams::fit(double knee, double psi1, double k1, double psi2,
                                       double k2) {
  if (!(knee < psi1 && psi1 < psi2) || !(k1 > 1.0) || !(k2 > k1)) {
    throw ConfigError("saturation fit needs knee < psi1 < psi2 and 1 < k1 < k2");
  }
  const double extra1 = (k1 - 1.0) * psi1;
  const double extra2 = (k2 - 1.0) * psi2;
  const double d1 = psi1 - knee;
  const double d2 = psi2 - knee;
  // ratio(b) = (exp(b d2) - 1) / (exp(b d1) - 1) rises from d2/d1 at b -> 0.
  const double target = extra2 / extra1;
  if (!(target > d2 / d1)) {
    throw ConfigError("saturation points are not convex above the knee");
  }
  auto ratio = [&](double b) { return std::expm1(b * d2) / std::expm1(b * d1); };
  double lo = 1e-9;
  double hi = 1.0;
  while (ratio(hi) < target) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ratio(mid) < target ? lo : hi) = mid;
  }
  const double b = 0.5 * (lo + hi);
  return {knee, extra1 / std::expm1(b * d1), b};
}

SaturationParams SaturationParams::standard() { return fit(0.8, 1.0, 1.02, 1.2, 1.10); }

void SaturationParams::validate() const {
  if (!(knee > 0.0) || a < 0.0 || b < 0.0 || (a > 0.0 && !(b > 0.0))) {
    throw ConfigError("invalid saturation parameters");
  }
}

double SaturationParams::extra_flux(double saturated) const {
  if (!enabled() || saturated <= knee) return 0.0;
  return a * std::expm1(b * (saturated - knee));
}

double SaturationParams::factor_from_saturated(double saturated) const {
  if (!enabled() || saturated <= knee) return 1.0;
  return (saturated + extra_flux(saturated)) / saturated;
}

double apply_saturation(double unsaturated_flux, const SaturationParams& params) {
  if (!params.enabled() || unsaturated_flux <= params.knee) return unsaturated_flux;
  // s + psi_i(s) = u is strictly increasing in s; the root lies in [knee, u].
  double lo = params.knee;
  double hi = unsaturated_flux;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mid + params.extra_flux(mid) < unsaturated_flux ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace powerdyn::machines
