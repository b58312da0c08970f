#include "vortex/hydro.hpp"

#include <array>
#include <cmath>

#include "vortex/errors.hpp"
#include "vortex/kernels.hpp"
#include "vortex/spectral.hpp"

namespace vortex {

namespace {

using CVec3 = Eigen::Vector3cd;

// Eigen conjugates the result of cross() for complex arguments; spell it out.
CVec3 cross(const CVec3& a, const CVec3& b) {
  return CVec3(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]);
}

}  // namespace

Vec3 impulse_f(std::span<const Vec3> tangents) {
  const int n = static_cast<int>(tangents.size());
  const FourierGrid g(n);
  std::vector<double> comp(n);
  std::array<std::vector<Complex>, 3> c;
  for (int d = 0; d < 3; ++d) {
    for (int i = 0; i < n; ++i) comp[i] = tangents[i][d];
    c[d] = g.analyze(std::span<const double>(comp));
  }
  auto coeff = [&](int idx) { return CVec3(c[0][idx], c[1][idx], c[2][idx]); };

  // f = sum_{m>=1} (2 pi / m) Im(J_m x conj J_m) + 2 pi J_0 x sum_{m != 0} J_m / (i m)
  Vec3 f = Vec3::Zero();
  CVec3 tail = CVec3::Zero();
  for (int idx = 1; idx < n; ++idx) {
    const int m = g.wavenumber(idx);
    if (2 * std::abs(m) == n) continue;  // Nyquist has no partner
    const CVec3 J = coeff(idx);
    tail += J / Complex(0.0, m);
    if (m > 0) f += (kTwoPi / m) * cross(J, J.conjugate()).imag();
  }
  const CVec3 J0 = coeff(0);
  f += kTwoPi * cross(J0, tail).real();
  return f;
}

Vec3 impulse_f(const FilamentState& s, int N) {
  const auto t = tangent_field(s, N);
  return impulse_f(std::span<const Vec3>(t));
}

Vec3 impulse_f_direct(const FilamentState& s, int N) {
  const auto t = tangent_field(s, N);
  std::vector<double> x(N), y(N), z(N);
  for (int i = 0; i < N; ++i) x[i] = t[i].x(), y[i] = t[i].y(), z[i] = t[i].z();
  // Kernel is -1 where eta > xi: f = -1/2 h^2 sum_i sum_{k>i} j_k x j_i.
  const double h = kTwoPi / N;
  return -0.5 * h * h * kernels::pairwise_cross_sum({x, y, z});
}

ImpulseResult momentum(const FilamentState& s, const PhysicalConstants& c, int N) {
  ImpulseResult r;
  r.f = impulse_f(s, N);
  const double scale = c.rho0 * s.R * s.R * s.Gamma;
  r.p_tilde = scale * r.f;
  r.p_z = r.p_tilde.z();
  r.p_z_classic = kPi * scale;
  r.p_z_rel_diff = r.p_z_classic == 0.0 ? std::abs(r.p_z) : std::abs(r.p_z - r.p_z_classic) / std::abs(r.p_z_classic);
  r.p_perp = Complex(r.p_tilde.x(), r.p_tilde.y());
  r.p_perp_linear = -kTwoPi * scale * s.epsilon * s.mode(-1);
  return r;
}

double phi_gamma(const Vec3& p, Complex j_minus1, double Gamma, const PhysicalConstants& c, double R) {
  const auto d = derive_scales(c);
  const double e2 = c.epsilon * c.epsilon;
  const double a = d.alpha * kPi * c.rho0 * Gamma * R * R;
  return p.squaredNorm() - a * a * (1.0 + 4.0 * e2 * std::norm(j_minus1));
}

double solve_gamma_classical(const Vec3& p, Complex j_minus1, const PhysicalConstants& c, double R) {
  const double np = p.norm();
  if (np == 0.0) return 0.0;
  if (!(R > 0.0)) throw ValidationError("R", "must be positive");
  const auto d = derive_scales(c);
  const double e2 = c.epsilon * c.epsilon;
  return np / (d.alpha * kPi * c.rho0 * R * R * std::sqrt(1.0 + 4.0 * e2 * std::norm(j_minus1)));
}

}  // namespace vortex
