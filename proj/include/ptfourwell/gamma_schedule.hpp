#pragma once

#include <cmath>
#include <numbers>

#include "ptfourwell/errors.hpp"

namespace ptfw {

struct GammaValue {
  double value = 0.0;
  double rate = 0.0;  ///< analytic time derivative
};

/// Γ(t) = Γf [1 - cos(π t / tf)] / 2 on [0, tf], clamped outside.
inline GammaValue gamma_ramp(double t, double gamma_f, double t_f) {
  if (!(t_f > 0.0)) throw InputError("gamma ramp needs t_f > 0");
  if (t <= 0.0) return {0.0, 0.0};
  if (t >= t_f) return {gamma_f, 0.0};
  const double phase = std::numbers::pi * t / t_f;
  return {0.5 * gamma_f * (1.0 - std::cos(phase)),
          0.5 * gamma_f * std::numbers::pi / t_f * std::sin(phase)};
}

/// Time profile of the gain/loss parameter driving the four-mode controller.
struct GammaSchedule {
  enum class Kind { constant, cosine_ramp };

  Kind kind = Kind::constant;
  double gamma_f = 0.0;
  double t_f = 1.0;

  static GammaSchedule constant(double gamma) { return {Kind::constant, gamma, 1.0}; }
  static GammaSchedule cosine_ramp(double gamma_f, double t_f) {
    return {Kind::cosine_ramp, gamma_f, t_f};
  }

  GammaValue at(double t) const {
    if (kind == Kind::constant) return {gamma_f, 0.0};
    return gamma_ramp(t, gamma_f, t_f);
  }
};

}  // namespace ptfw
