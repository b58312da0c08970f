#include "vortex/lie.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "vortex/dispersion.hpp"
#include "vortex/errors.hpp"
#include "vortex/kernels.hpp"
#include "vortex/spectral.hpp"

namespace vortex {

namespace {

constexpr double kRk4ImagLimit = 2.8284271247461903;  // 2 sqrt(2)

int step_count(double tau, double dt) {
  if (tau <= 0.0) return 0;
  return static_cast<int>(std::ceil(tau / dt * (1.0 - 1e-12)));
}

// First and second spectral derivatives from a single analysis.
void derivatives(const FourierGrid& g, std::span<const double> f, std::span<double> d1, std::span<double> d2) {
  const int n = g.size();
  auto c = g.analyze(f);
  std::vector<Complex> c1(n), c2(n);
  for (int i = 0; i < n; ++i) {
    const double k = g.wavenumber(i);
    c1[i] = (n % 2 == 0 && i == n / 2) ? Complex(0.0) : c[i] * Complex(0.0, k);
    c2[i] = -k * k * c[i];
  }
  const auto s1 = g.synthesize(c1);
  const auto s2 = g.synthesize(c2);
  for (int i = 0; i < n; ++i) {
    d1[i] = s1[i].real();
    d2[i] = s2[i].real();
  }
}

struct Soa {
  std::vector<double> x, y, z;
  explicit Soa(int n = 0) : x(n), y(n), z(n) {}
  kernels::Soa3View view() const { return {x, y, z}; }
  kernels::Soa3Span span() { return {x, y, z}; }
  std::array<std::vector<double>*, 3> comps() { return {&x, &y, &z}; }
};

Soa to_soa(std::span<const Vec3> p) {
  Soa s(static_cast<int>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) {
    s.x[i] = p[i].x();
    s.y[i] = p[i].y();
    s.z[i] = p[i].z();
  }
  return s;
}

std::vector<Vec3> from_soa(const Soa& s) {
  std::vector<Vec3> p(s.x.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = Vec3(s.x[i], s.y[i], s.z[i]);
  return p;
}

class CurveRhs {
 public:
  CurveRhs(int n, double R0) : grid_(n), n_(n), inv_R0_(1.0 / R0), d1_(n), d2_(n) {}

  void operator()(Soa& r, Soa& out) {
    auto rc = r.comps();
    auto c1 = d1_.comps();
    auto c2 = d2_.comps();
    for (int d = 0; d < 3; ++d) derivatives(grid_, *rc[d], *c1[d], *c2[d]);
    kernels::cross(d1_.view(), d2_.view(), out.span());
    for (auto* comp : out.comps()) {
      for (auto& v : *comp) v *= inv_R0_;
      grid_.dealias(*comp);
    }
  }

  const FourierGrid& grid() const { return grid_; }
  int size() const { return n_; }

 private:
  FourierGrid grid_;
  int n_;
  double inv_R0_;
  Soa d1_, d2_;
};

bool finite_and_bounded(const Soa& s, double limit) {
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    const double a = s.x[i], b = s.y[i], c = s.z[i];
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) return false;
    if (std::abs(a) > limit || std::abs(b) > limit || std::abs(c) > limit) return false;
  }
  return true;
}

// Fourier interpolant evaluated at an arbitrary point.
Complex eval_series(const FourierGrid& g, const std::vector<Complex>& c, double xi) {
  Complex s(0.0);
  const int n = g.size();
  for (int i = 0; i < n; ++i) {
    const int k = g.wavenumber(i);
    if (n % 2 == 0 && i == n / 2) {
      s += c[i] * std::cos(k * xi);  // real-valued Nyquist term
      continue;
    }
    s += c[i] * std::polar(1.0, k * xi);
  }
  return s;
}

}  // namespace

ModeMap evolve_modes(const ModeMap& m, double tau) {
  ModeMap out;
  for (const auto& [n, amp] : m) out[n] = amp * std::polar(1.0, dispersion(n) * tau);
  return out;
}

ModeEvolution propagate(const ModeMap& m, double tau) { return {m, tau, evolve_modes(m, tau)}; }

double linearized_stability_bound(int N) {
  const double k = std::floor(N / 2.0);
  if (k <= 1.0) return std::numeric_limits<double>::infinity();
  return kRk4ImagLimit / (k * std::sqrt(k * k - 1.0));
}

CylindricalField evolve_linearized(const CylindricalField& f, double tau, double dt) {
  const int n = static_cast<int>(f.rho.size());
  if (f.z.size() != f.rho.size() || (!f.phi.empty() && f.phi.size() != f.rho.size()))
    throw ValidationError("field", "rho, phi and z must have the same length");
  const double bound = linearized_stability_bound(n);
  if (dt <= 0.0) dt = 0.5 * bound;
  if (dt > bound) {
    std::ostringstream msg;
    msg << "dt = " << dt << " exceeds the RK4 stability bound " << bound << " for N = " << n;
    throw StabilityError(msg.str(), bound);
  }
  const FourierGrid g(n);
  CylindricalField out = f;
  if (out.phi.empty()) out.phi.assign(n, 0.0);
  const int steps = step_count(tau, dt);
  if (steps == 0) return out;
  const double h = tau / steps;

  // Constant forcing 2 phi' on z.
  std::vector<double> forcing = g.derivative(std::span<const double>(out.phi), 1);
  for (auto& v : forcing) v *= 2.0;

  std::vector<double> d1(n), d2(n);
  auto rhs = [&](const std::vector<double>& rho, const std::vector<double>& z, std::vector<double>& drho,
                 std::vector<double>& dz) {
    derivatives(g, z, d1, d2);
    for (int i = 0; i < n; ++i) drho[i] = z[i] + d2[i];
    derivatives(g, rho, d1, d2);
    for (int i = 0; i < n; ++i) dz[i] = -d2[i] + forcing[i];
  };

  std::vector<double> k1r(n), k1z(n), k2r(n), k2z(n), k3r(n), k3z(n), k4r(n), k4z(n), tr(n), tz(n);
  auto& rho = out.rho;
  auto& z = out.z;
  for (int s = 0; s < steps; ++s) {
    rhs(rho, z, k1r, k1z);
    for (int i = 0; i < n; ++i) tr[i] = rho[i] + 0.5 * h * k1r[i], tz[i] = z[i] + 0.5 * h * k1z[i];
    rhs(tr, tz, k2r, k2z);
    for (int i = 0; i < n; ++i) tr[i] = rho[i] + 0.5 * h * k2r[i], tz[i] = z[i] + 0.5 * h * k2z[i];
    rhs(tr, tz, k3r, k3z);
    for (int i = 0; i < n; ++i) tr[i] = rho[i] + h * k3r[i], tz[i] = z[i] + h * k3z[i];
    rhs(tr, tz, k4r, k4z);
    for (int i = 0; i < n; ++i) {
      rho[i] += h / 6.0 * (k1r[i] + 2.0 * k2r[i] + 2.0 * k3r[i] + k4r[i]);
      z[i] += h / 6.0 * (k1z[i] + 2.0 * k2z[i] + 2.0 * k3z[i] + k4z[i]);
    }
  }
  return out;
}

std::vector<Complex> evolve_linearized_pde(std::span<const Complex> sj, double tau, double dt) {
  const int n = static_cast<int>(sj.size());
  CylindricalField f{std::vector<double>(n), {}, std::vector<double>(n)};
  for (int i = 0; i < n; ++i) f.rho[i] = sj[i].real(), f.z[i] = sj[i].imag();
  const auto g = evolve_linearized(f, tau, dt);
  std::vector<Complex> out(n);
  for (int i = 0; i < n; ++i) out[i] = Complex(g.rho[i], g.z[i]);
  return out;
}

double nonlinear_stability_bound(std::span<const Vec3> points, double R0) {
  const int n = static_cast<int>(points.size());
  const FourierGrid g(n);
  Soa s = to_soa(points);
  Soa d(n);
  auto sc = s.comps();
  auto dc = d.comps();
  for (int c = 0; c < 3; ++c) *dc[c] = g.derivative(std::span<const double>(*sc[c]), 1);
  double speed = 0.0;
  for (int i = 0; i < n; ++i) speed = std::max(speed, std::hypot(d.x[i], d.y[i], d.z[i]));
  const double k = std::floor(n / 2.0);
  if (speed == 0.0) return std::numeric_limits<double>::infinity();
  return kRk4ImagLimit * R0 / (speed * k * k);
}

double curve_length(std::span<const Vec3> points) {
  const int n = static_cast<int>(points.size());
  const FourierGrid g(n);
  Soa s = to_soa(points);
  std::array<std::vector<double>, 3> d;
  auto sc = s.comps();
  for (int c = 0; c < 3; ++c) d[c] = g.derivative(std::span<const double>(*sc[c]), 1);
  std::vector<double> speed(n);
  for (int i = 0; i < n; ++i) speed[i] = std::hypot(d[0][i], d[1][i], d[2][i]);
  return g.period_integral(speed);
}

Vec3 curve_impulse(std::span<const Vec3> points, double R) {
  const int n = static_cast<int>(points.size());
  const FourierGrid g(n);
  Soa s = to_soa(points);
  Soa d(n), w(n);
  auto sc = s.comps();
  auto dc = d.comps();
  for (int c = 0; c < 3; ++c) *dc[c] = g.derivative(std::span<const double>(*sc[c]), 1);
  kernels::cross(s.view(), d.view(), w.span());
  const double scale = 0.5 / (R * R);
  return scale * Vec3(g.period_integral(w.x), g.period_integral(w.y), g.period_integral(w.z));
}

std::vector<Vec3> resample_uniform_arclength(std::span<const Vec3> points) {
  const int n = static_cast<int>(points.size());
  const FourierGrid g(n);
  Soa s = to_soa(points);
  auto sc = s.comps();
  std::array<std::vector<Complex>, 3> coeff;
  std::array<std::vector<double>, 3> d;
  for (int c = 0; c < 3; ++c) {
    coeff[c] = g.analyze(std::span<const double>(*sc[c]));
    d[c] = g.derivative(std::span<const double>(*sc[c]), 1);
  }
  std::vector<double> speed(n);
  for (int i = 0; i < n; ++i) speed[i] = std::hypot(d[0][i], d[1][i], d[2][i]);
  auto sp = g.analyze(std::span<const double>(speed));
  const double mean = sp[0].real();
  const double total = kTwoPi * mean;

  // s(xi) = mean xi + sum_{k != 0} c_k (e^{ik xi} - 1) / (ik)
  std::vector<Complex> anti(n, Complex(0.0));
  Complex offset(0.0);
  for (int i = 1; i < n; ++i) {
    if (n % 2 == 0 && i == n / 2) continue;
    anti[i] = sp[i] / Complex(0.0, g.wavenumber(i));
    offset += anti[i];
  }
  std::vector<Complex> sp_no_mean = sp;
  sp_no_mean[0] = 0.0;
  if (n % 2 == 0) sp_no_mean[n / 2] = 0.0;
  auto arc = [&](double xi) { return mean * xi + (eval_series(g, anti, xi) - offset).real(); };
  auto rate = [&](double xi) { return mean + eval_series(g, sp_no_mean, xi).real(); };

  std::vector<Vec3> out(n);
  double xi = 0.0;
  for (int i = 0; i < n; ++i) {
    const double target = total * i / n;
    if (i > 0) xi = std::max(xi, g.node(i) - 0.5 * g.spacing());
    for (int it = 0; it < 50; ++it) {
      const double step = (arc(xi) - target) / rate(xi);
      xi -= step;
      if (std::abs(step) < 1e-15) break;
    }
    out[i] = Vec3(eval_series(g, coeff[0], xi).real(), eval_series(g, coeff[1], xi).real(),
                  eval_series(g, coeff[2], xi).real());
  }
  return out;
}

NonlinearRun evolve_nonlinear(const SampledCurve& c, double tau, double dt, double R0, const NonlinearOptions& opt) {
  const int n = static_cast<int>(c.points.size());
  if (n < 64) throw ValidationError("N", "nonlinear runs need at least 64 points");
  if (!(R0 > 0.0)) throw ValidationError("R0", "must be positive");
  const double bound = nonlinear_stability_bound(c.points, R0);
  if (dt <= 0.0) dt = 0.5 * bound;
  if (dt > bound) {
    std::ostringstream msg;
    msg << "dt = " << dt << " exceeds the RK4 stability bound " << bound;
    throw StabilityError(msg.str(), bound);
  }
  const int steps = step_count(tau, dt);
  const double h = steps > 0 ? tau / steps : 0.0;

  NonlinearRun run;
  run.dt = h;
  auto record = [&](double t, const std::vector<Vec3>& p) {
    run.times.push_back(t);
    run.frames.push_back(p);
    run.length.push_back(curve_length(p));
    run.impulse.push_back(curve_impulse(p, opt.R));
  };
  record(0.0, c.points);

  double extent = 0.0;
  for (const auto& p : c.points) extent = std::max(extent, p.cwiseAbs().maxCoeff());
  const double limit = 1e6 * (extent + 1.0) + 10.0 * std::abs(tau) / R0 * extent * extent;

  CurveRhs rhs(n, R0);
  Soa r = to_soa(c.points);
  Soa k1(n), k2(n), k3(n), k4(n), tmp(n);
  auto stage = [&](const Soa& base, const Soa& k, double a) {
    for (int i = 0; i < n; ++i) {
      tmp.x[i] = base.x[i] + a * k.x[i];
      tmp.y[i] = base.y[i] + a * k.y[i];
      tmp.z[i] = base.z[i] + a * k.z[i];
    }
  };

  for (int s = 1; s <= steps; ++s) {
    rhs(r, k1);
    stage(r, k1, 0.5 * h);
    rhs(tmp, k2);
    stage(r, k2, 0.5 * h);
    rhs(tmp, k3);
    stage(r, k3, h);
    rhs(tmp, k4);
    Soa next = r;
    for (int i = 0; i < n; ++i) {
      next.x[i] += h / 6.0 * (k1.x[i] + 2.0 * k2.x[i] + 2.0 * k3.x[i] + k4.x[i]);
      next.y[i] += h / 6.0 * (k1.y[i] + 2.0 * k2.y[i] + 2.0 * k3.y[i] + k4.y[i]);
      next.z[i] += h / 6.0 * (k1.z[i] + 2.0 * k2.z[i] + 2.0 * k3.z[i] + k4.z[i]);
    }
    if (!finite_and_bounded(next, limit)) {
      std::ostringstream msg;
      msg << "state blew up at step " << s << " (tau = " << s * h << ")";
      run.aborted = true;
      run.message = msg.str();
      run.steps = s - 1;
      const double t_last = (s - 1) * h;
      if (run.times.back() != t_last) record(t_last, from_soa(r));
      return run;
    }
    r = std::move(next);
    if (opt.reparam_every > 0 && s % opt.reparam_every == 0) r = to_soa(resample_uniform_arclength(from_soa(r)));
    const bool out_step = opt.output_every > 0 && s % opt.output_every == 0;
    if (out_step || s == steps) record(s * h, from_soa(r));
  }
  run.steps = steps;
  return run;
}

std::vector<Vec3> linear_prediction(const FilamentState& s, double tau, double R0, int N) {
  const double tl = linear_time(tau, s.R, R0);
  FilamentState evolved = s;
  evolved.modes = evolve_modes(s.modes, tl);
  const auto curve = reconstruct_curve(evolved, N);

  // First-order motion of the node xi = 0: velocity eps R^2/R0 (b', -b, -a')
  // integrated in closed form.
  Complex sum_j(0.0), sum_nj(0.0);
  for (const auto& [n, amp] : s.modes) {
    const double w = dispersion(n);
    const Complex E = (w == 0.0) ? Complex(tl) : (std::polar(1.0, w * tl) - 1.0) / Complex(0.0, w);
    sum_j += amp * E;
    sum_nj += Complex(0.0, n) * amp * E;
  }
  const Vec3 dq = s.epsilon * s.R * Vec3(sum_nj.imag(), -sum_j.imag(), -sum_nj.real());
  const Vec3 drift(0.0, 0.0, s.R * s.R / R0 * tau);

  std::vector<Vec3> out(curve.points.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = curve.points[i] + drift + dq;
  return out;
}

}  // namespace vortex
