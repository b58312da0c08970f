#pragma once

namespace vortex {

/// Dimensional inputs of the model. Units must be coherent; no conversion is
/// performed. `hbar` is a free input so that quantum corrections can be
/// magnified to a size that is testable in double precision.
struct PhysicalConstants {
  double rho0 = 1.0;     ///< fluid density
  double v0 = 1.0;       ///< speed of sound
  double R0 = 1.0;       ///< natural scale length (diameter of the cross-section)
  double L = 1.0;        ///< cylinder height
  double mu0 = 1.0;      ///< mass parameter
  double hbar = 1e-3;    ///< reduced Planck constant
  double epsilon = 0.0;  ///< perturbation amplitude, 0 <= epsilon < 1
};

/// Throws ValidationError naming the first offending field.
void validate(const PhysicalConstants& c);

struct DerivedScales {
  double t0 = 0.0;         ///< R0 / v0
  double E0 = 0.0;         ///< mu0 v0^2 / 2
  double mu_tilde0 = 0.0;  ///< rho0 R0^2 L
  double alpha = 0.0;      ///< mu0 / mu_tilde0
  double beta = 0.0;       ///< hbar / (mu0 v0 R0)
  double R0 = 0.0;
  double mu0 = 0.0;
  double hbar = 0.0;

  /// Effective vortex mass mu0 (R/R0)^2.
  double mu_v(double R) const;

  /// hbar / (t0 E0): squared scale of the oscillator amplitude that replaces a
  /// tangent mode on quantisation. Equals 2 beta.
  double mode_quantum() const { return hbar / (t0 * E0); }
};

DerivedScales derive_scales(const PhysicalConstants& c);

}  // namespace vortex
