#include "vortex/constants.hpp"

#include <cmath>
#include <string>

#include "vortex/errors.hpp"

namespace vortex {

namespace {

void require_positive(const char* name, double value) {
  if (!std::isfinite(value)) throw ValidationError(name, "must be finite, got " + std::to_string(value));
  if (value <= 0.0) throw ValidationError(name, "must be strictly positive, got " + std::to_string(value));
}

}  // namespace

void validate(const PhysicalConstants& c) {
  require_positive("rho0", c.rho0);
  require_positive("v0", c.v0);
  require_positive("R0", c.R0);
  require_positive("L", c.L);
  require_positive("mu0", c.mu0);
  require_positive("hbar", c.hbar);
  if (!std::isfinite(c.epsilon) || c.epsilon < 0.0 || c.epsilon >= 1.0)
    throw ValidationError("epsilon", "must satisfy 0 <= epsilon < 1, got " + std::to_string(c.epsilon));
}

double DerivedScales::mu_v(double R) const {
  if (!(R > 0.0) || !std::isfinite(R)) throw ValidationError("R", "ring radius must be positive");
  const double ratio = R / R0;
  return mu0 * ratio * ratio;
}

DerivedScales derive_scales(const PhysicalConstants& c) {
  validate(c);
  DerivedScales s;
  s.t0 = c.R0 / c.v0;
  s.E0 = 0.5 * c.mu0 * c.v0 * c.v0;
  s.mu_tilde0 = c.rho0 * c.R0 * c.R0 * c.L;
  s.alpha = c.mu0 / s.mu_tilde0;
  s.beta = c.hbar / (c.mu0 * c.v0 * c.R0);
  s.R0 = c.R0;
  s.mu0 = c.mu0;
  s.hbar = c.hbar;
  return s;
}

}  // namespace vortex
