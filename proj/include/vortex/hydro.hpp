#pragma once

#include <span>

#include "vortex/constants.hpp"
#include "vortex/filament.hpp"

namespace vortex {

/// f = 1/2 double-integral of [xi - eta] j(eta) x j(xi) over [0, 2pi)^2,
/// evaluated from the Fourier coefficients of the sampled tangent field
/// (exact for band-limited states). N >= 4 max(1, max_mode).
Vec3 impulse_f(const FilamentState& s, int N);

/// Same functional from samples of j on a uniform grid.
Vec3 impulse_f(std::span<const Vec3> tangents);

/// Direct pairwise double sum on the N x N grid, second order in 1/N.
/// Independent of the spectral route; used to cross-check it.
Vec3 impulse_f_direct(const FilamentState& s, int N);

struct ImpulseResult {
  Vec3 f = Vec3::Zero();
  Vec3 p_tilde = Vec3::Zero();    ///< rho0 R^2 Gamma f
  double p_z = 0.0;               ///< from f_z
  double p_z_classic = 0.0;       ///< pi rho0 R^2 Gamma
  double p_z_rel_diff = 0.0;      ///< |p_z - p_z_classic| / |p_z_classic|, 0 when both vanish
  Complex p_perp = 0.0;           ///< p_x + i p_y
  Complex p_perp_linear = 0.0;    ///< first-order prediction -2 pi rho0 R^2 Gamma eps j_{-1}
};

ImpulseResult momentum(const FilamentState& s, const PhysicalConstants& c, int N);

/// |p|^2 - alpha^2 pi^2 rho0^2 Gamma^2 R^4 (1 + 4 eps^2 |j_{-1}|^2),
/// with eps taken from the constants.
double phi_gamma(const Vec3& p, Complex j_minus1, double Gamma, const PhysicalConstants& c, double R);

/// Nonnegative root of phi_gamma in Gamma; 0 for p = 0.
double solve_gamma_classical(const Vec3& p, Complex j_minus1, const PhysicalConstants& c, double R);

}  // namespace vortex
