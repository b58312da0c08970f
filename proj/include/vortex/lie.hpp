#pragma once

#include <span>
#include <string>
#include <vector>

#include "vortex/filament.hpp"

namespace vortex {

/// Exact linear propagator: j_n -> j_n exp(i w_n tau), w_n = dispersion(n).
ModeMap evolve_modes(const ModeMap& m, double tau);

struct ModeEvolution {
  ModeMap initial;
  double tau = 0.0;
  ModeMap evolved;
};

ModeEvolution propagate(const ModeMap& m, double tau);

/// Largest RK4 step for the linearized system on N points: the spatial
/// operator has eigenvalues +-i k sqrt(k^2 - 1) up to k = N/2, and classical
/// RK4 is stable on the imaginary axis up to 2 sqrt(2).
double linearized_stability_bound(int N);

/// Perturbation in the cylindrical frame: rho and z carry the dynamics,
/// phi is constant in time and only forces z through its derivative.
struct CylindricalField {
  std::vector<double> rho, phi, z;
};

/// RK4 with spectral derivatives on
///   d rho/dt = z + z'',  d z/dt = -rho'' + 2 phi',  d phi/dt = 0.
/// dt <= 0 picks half the stability bound. The step is shrunk so an integer
/// number of steps lands on tau. Throws StabilityError for dt above the bound.
CylindricalField evolve_linearized(const CylindricalField& f, double tau, double dt = 0.0);

/// Same system for the complex amplitude sj = rho + i z with phi = 0:
/// d sj/dt = -i sj'' - (i/2)(sj - conj(sj)).
std::vector<Complex> evolve_linearized_pde(std::span<const Complex> sj, double tau, double dt = 0.0);

/// Time of the linear theory for a ring of radius R: the linearized equations
/// hold in tau_lin = (R / R0) tau.
inline double linear_time(double tau, double R, double R0) { return tau * R / R0; }

/// RK4 step limit for the curve equation, using |r_xi| on the grid.
double nonlinear_stability_bound(std::span<const Vec3> points, double R0);

struct NonlinearOptions {
  double R = 1.0;          ///< ring radius, normalises the impulse diagnostic
  int output_every = 0;    ///< steps between recorded frames; 0 records start and end only
  int reparam_every = 0;   ///< resample to uniform arclength every K steps; 0 disables
};

struct NonlinearRun {
  std::vector<double> times;
  std::vector<std::vector<Vec3>> frames;
  std::vector<double> length;
  std::vector<Vec3> impulse;  ///< f = (1 / 2R^2) closed-integral of r x r_xi
  double dt = 0.0;
  long steps = 0;
  bool aborted = false;
  std::string message;

  const std::vector<Vec3>& final_points() const { return frames.back(); }
};

/// dr/dtau = (1/R0) r_xi x r_xixi with spectral derivatives, a two-thirds
/// dealiased right-hand side and RK4. A non-finite or runaway state stops the
/// run; the last good frame is kept and `aborted` is set.
NonlinearRun evolve_nonlinear(const SampledCurve& c, double tau, double dt, double R0,
                              const NonlinearOptions& opt = {});

double curve_length(std::span<const Vec3> points);
Vec3 curve_impulse(std::span<const Vec3> points, double R);

/// Resample a closed curve at uniform arclength from node 0, evaluating the
/// Fourier interpolant directly.
std::vector<Vec3> resample_uniform_arclength(std::span<const Vec3> points);

/// Linear-theory curve at LIE time tau: centre offset q(tau) from the base
/// drift R^2/R0 plus its first-order correction, and the tangent field of the
/// evolved modes at tau_lin.
std::vector<Vec3> linear_prediction(const FilamentState& s, double tau, double R0, int N);

}  // namespace vortex
