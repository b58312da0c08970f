#pragma once

#include <map>
#include <string>
#include <vector>

#include "vortex/types.hpp"

namespace vortex {

/// Sparse complex amplitudes of the tangent perturbation j_rho + i j_z,
/// keyed by signed mode index. Absent means zero.
using ModeMap = std::map<int, Complex>;

/// Closed filament: r(xi) = q + R * integral_0^{2pi} [xi - eta] j(eta) d eta,
/// with j = j0 + epsilon (Re(sj) e_rho + Im(sj) e_z), j0 = (-sin, cos, 0),
/// e_rho = (cos, sin, 0) and sj(xi) = sum_n j_n e^{i n xi}.
struct FilamentState {
  Vec3 q = Vec3::Zero();
  double R = 1.0;
  double Gamma = 1.0;
  double epsilon = 0.0;
  ModeMap modes;
  int n_max = 32;  ///< truncation limit on |n|

  /// Largest stored |n| (0 for the bare ring).
  int max_mode() const;

  /// Amplitude j_n, zero when absent.
  Complex mode(int n) const;
};

struct SampledCurve {
  std::vector<Vec3> points;    ///< r(xi_i), xi_i = 2 pi i / N
  std::vector<Vec3> tangents;  ///< j(xi_i)
};

FilamentState base_ring(const Vec3& q0, double R, double Gamma);

/// Store j_n = amplitude together with the partner j_{-n} = g_n conj(j_n)
/// demanded by the mode coupling (for n = 0 the amplitude must be real).
/// Throws ValidationError if |n| > n_max or n = 0 with a nonzero imaginary part.
void set_mode(FilamentState& s, int n, Complex amplitude);

/// Invariant checks. Hard failures throw ValidationError; soft ones (R large
/// against R0) are returned as warnings. Pass R0 <= 0 to skip the advisory.
std::vector<std::string> validate(const FilamentState& s, double R0 = 0.0);

/// Analytic integrals of every Cartesian component of j over one period.
Vec3 check_closure(const FilamentState& s);

/// sj(xi_i) by Fourier synthesis.
std::vector<Complex> sample_amplitude(const FilamentState& s, int N);

/// j(xi_i). Throws AliasingError if N < 4 max(1, max_mode()).
std::vector<Vec3> tangent_field(const FilamentState& s, int N);

/// Throws ConstraintError when the discrete closure residual exceeds 1e-10.
SampledCurve reconstruct_curve(const FilamentState& s, int N);

/// Modes of sj recovered from a tangent field sampled on the uniform grid
/// (radial and axial projections in the unperturbed frame), divided by epsilon
/// when epsilon > 0. Inverse of `tangent_field` for band-limited states.
ModeMap analyze_tangents(const std::vector<Vec3>& tangents, double epsilon, int n_keep);

/// JSON record {"q":[..], "R":.., "Gamma":.., "epsilon":.., "n_max":..,
/// "modes":[[n, re, im], ...]}.
std::string to_json(const FilamentState& s);
/// Parses and validates a record; stored pairs must satisfy the coupling to
/// relative 1e-12.
FilamentState filament_from_json(const std::string& text);

}  // namespace vortex
