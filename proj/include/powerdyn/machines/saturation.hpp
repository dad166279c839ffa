#pragma once

namespace powerdyn::machines {

/// Magnetizing saturation law.
///
/// With s the saturated air-gap flux, the extra magnetizing MMF (in flux
/// units) above the knee is psi_i(s) = a * (exp(b * (s - knee)) - 1), so the
/// unsaturated flux producing s is u = s + psi_i(s) and k = u / s >= 1.
struct SaturationParams {
  double knee = 0.8;
  double a = 0.0;
  double b = 0.0;

  /// No saturation: k == 1 everywhere.
  static SaturationParams none() { return {}; }
  /// Fits (a, b) so that k(psi1) = k1 and k(psi2) = k2, knee < psi1 < psi2.
  static SaturationParams fit(double knee, double psi1, double k1, double psi2, double k2);
  /// Default curve: knee at 0.8 p.u., 2 % at 1.0 p.u., 10 % at 1.2 p.u.
  static SaturationParams standard();

  bool enabled() const { return a > 0.0; }
  void validate() const;

  /// psi_i as a function of the saturated flux.
  double extra_flux(double saturated) const;
  /// k as a function of the saturated flux.
  double factor_from_saturated(double saturated) const;
};

/// Maps an unsaturated magnetizing flux to its saturated value, i.e. returns
/// input / k(input). Nondecreasing, never above the identity, continuous.
double apply_saturation(double unsaturated_flux, const SaturationParams& params);

}  // namespace powerdyn::machines
