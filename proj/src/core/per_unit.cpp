#include "powerdyn/core/per_unit.hpp"

#include "powerdyn/core/errors.hpp"

namespace powerdyn {

PerUnitBase::PerUnitBase(double s_base, double v_base, double f_nom)
    : s_base_(s_base), v_base_(v_base), f_nom_(f_nom) {
  if (!(s_base > 0.0) || !(v_base > 0.0) || !(f_nom > 0.0)) {
    throw ConfigError("per-unit bases must be strictly positive");
  }
}

}  // namespace powerdyn
