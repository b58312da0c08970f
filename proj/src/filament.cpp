#include "vortex/filament.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "vortex/dispersion.hpp"
#include "vortex/errors.hpp"
#include "vortex/spectral.hpp"

namespace vortex {

namespace {

constexpr double kClosureTolerance = 1e-10;
constexpr double kCouplingTolerance = 1e-12;

void require_grid(const FilamentState& s, int N) {
  const int need = 4 * std::max(1, s.max_mode());
  if (N < need)
    throw AliasingError("grid of " + std::to_string(N) + " points aliases modes up to |n| = " +
                        std::to_string(s.max_mode()) + "; need N >= " + std::to_string(need));
}

}  // namespace

int FilamentState::max_mode() const {
  int m = 0;
  for (const auto& [n, amp] : modes) m = std::max(m, std::abs(n));
  return m;
}

Complex FilamentState::mode(int n) const {
  const auto it = modes.find(n);
  return it == modes.end() ? Complex(0.0, 0.0) : it->second;
}

FilamentState base_ring(const Vec3& q0, double R, double Gamma) {
  if (!(R > 0.0) || !std::isfinite(R)) throw ValidationError("R", "ring radius must be positive");
  FilamentState s;
  s.q = q0;
  s.R = R;
  s.Gamma = Gamma;
  return s;
}

void set_mode(FilamentState& s, int n, Complex amplitude) {
  if (std::abs(n) > s.n_max)
    throw ValidationError("modes", "mode " + std::to_string(n) + " exceeds n_max = " + std::to_string(s.n_max));
  if (n == 0) {
    if (amplitude.imag() != 0.0) throw ValidationError("modes", "j_0 must be real");
    s.modes[0] = amplitude;
    return;
  }
  s.modes[n] = amplitude;
  s.modes[-n] = coupling_factor(n) * std::conj(amplitude);
}

std::vector<std::string> validate(const FilamentState& s, double R0) {
  std::vector<std::string> warnings;
  if (!(s.R > 0.0) || !std::isfinite(s.R)) throw ValidationError("R", "ring radius must be positive");
  if (!std::isfinite(s.Gamma)) throw ValidationError("Gamma", "must be finite");
  if (!std::isfinite(s.epsilon) || s.epsilon < 0.0 || s.epsilon >= 1.0)
    throw ValidationError("epsilon", "must satisfy 0 <= epsilon < 1");
  if (s.n_max < 1) throw ValidationError("n_max", "must be at least 1");
  if (!s.q.allFinite()) throw ValidationError("q", "must be finite");
  for (const auto& [n, amp] : s.modes) {
    if (std::abs(n) > s.n_max)
      throw ValidationError("modes", "mode " + std::to_string(n) + " exceeds n_max = " + std::to_string(s.n_max));
    if (!std::isfinite(amp.real()) || !std::isfinite(amp.imag()))
      throw ValidationError("modes", "mode " + std::to_string(n) + " is not finite");
  }
  for (const auto& [n, amp] : s.modes) {
    if (n < 0 && s.modes.count(-n)) continue;  // checked from the positive side
    const int p = std::abs(n);
    const Complex jp = s.mode(p);
    const Complex jm = s.mode(-p);
    const double scale = std::max({std::abs(jp), std::abs(jm), 1e-300});
    const double residual = std::abs(std::conj(jm) - coupling_factor(p) * jp);
    if (residual > kCouplingTolerance * scale) {
      std::ostringstream msg;
      msg << "pair (" << p << ", " << -p << ") violates conj(j_-n) = g_n j_n, residual " << residual;
      throw ValidationError("modes", msg.str());
    }
  }
  if (R0 > 0.0 && s.R > 0.5 * R0) {
    std::ostringstream msg;
    msg << "ring radius R = " << s.R << " is not small against R0 = " << R0;
    warnings.push_back(msg.str());
  }
  return warnings;
}

Vec3 check_closure(const FilamentState& s) {
  const Complex w = s.mode(-1) + std::conj(s.mode(1));
  return s.epsilon * Vec3(kPi * w.real(), kPi * w.imag(), kTwoPi * s.mode(0).imag());
}

std::vector<Complex> sample_amplitude(const FilamentState& s, int N) {
  require_grid(s, N);
  const FourierGrid grid(N);
  std::vector<Complex> c(N, Complex(0.0, 0.0));
  for (const auto& [n, amp] : s.modes) c[static_cast<std::size_t>(((n % N) + N) % N)] += amp;
  return grid.synthesize(c);
}

std::vector<Vec3> tangent_field(const FilamentState& s, int N) {
  const auto sj = sample_amplitude(s, N);
  std::vector<Vec3> t(N);
  for (int i = 0; i < N; ++i) {
    const double xi = kTwoPi * i / N;
    const double c = std::cos(xi), sn = std::sin(xi);
    const double a = s.epsilon * sj[i].real();
    const double b = s.epsilon * sj[i].imag();
    t[i] = Vec3(-sn + a * c, c + a * sn, b);
  }
  return t;
}

SampledCurve reconstruct_curve(const FilamentState& s, int N) {
  SampledCurve out;
  out.tangents = tangent_field(s, N);
  const FourierGrid grid(N);
  std::vector<double> comp(N);
  std::array<std::vector<double>, 3> F;
  Vec3 total;
  for (int d = 0; d < 3; ++d) {
    for (int i = 0; i < N; ++i) comp[i] = out.tangents[i][d];
    total[d] = grid.period_integral(comp);
    F[d] = grid.integral_from_zero(comp);
  }
  if (total.norm() > kClosureTolerance) {
    std::ostringstream msg;
    msg << "closure violated: integral of j over one period = (" << total.x() << ", " << total.y() << ", "
        << total.z() << ")";
    throw ConstraintError(msg.str(), total);
  }
  // Kernel [xi - eta] is 0 for eta <= xi and -1 for eta > xi on [0, 2pi)^2:
  // r(xi) = q - R int_xi^{2pi} j = q + R (F(xi) - F(2pi)).
  out.points.resize(N);
  for (int i = 0; i < N; ++i) out.points[i] = s.q + s.R * (Vec3(F[0][i], F[1][i], F[2][i]) - total);
  return out;
}

ModeMap analyze_tangents(const std::vector<Vec3>& tangents, double epsilon, int n_keep) {
  const int N = static_cast<int>(tangents.size());
  const FourierGrid grid(N);
  std::vector<Complex> sj(N);
  const double scale = epsilon > 0.0 ? 1.0 / epsilon : 1.0;
  for (int i = 0; i < N; ++i) {
    const double xi = grid.node(i);
    const double c = std::cos(xi), sn = std::sin(xi);
    const Vec3 u = tangents[i] - Vec3(-sn, c, 0.0);
    sj[i] = scale * Complex(u.x() * c + u.y() * sn, u.z());
  }
  const auto coeffs = grid.analyze(sj);
  ModeMap out;
  for (int idx = 0; idx < N; ++idx) {
    const int k = grid.wavenumber(idx);
    if (std::abs(k) <= n_keep && 2 * std::abs(k) < N) out[k] = coeffs[idx];
  }
  return out;
}

std::string to_json(const FilamentState& s) {
  nlohmann::json j;
  j["q"] = {s.q.x(), s.q.y(), s.q.z()};
  j["R"] = s.R;
  j["Gamma"] = s.Gamma;
  j["epsilon"] = s.epsilon;
  j["n_max"] = s.n_max;
  auto modes = nlohmann::json::array();
  for (const auto& [n, amp] : s.modes) modes.push_back({n, amp.real(), amp.imag()});
  j["modes"] = modes;
  return j.dump(2);
}

FilamentState filament_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("filament", std::string("malformed record: ") + e.what());
  }
  FilamentState s;
  try {
    const auto& q = j.at("q");
    if (!q.is_array() || q.size() != 3) throw ValidationError("q", "expected 3 numbers");
    s.q = Vec3(q[0].get<double>(), q[1].get<double>(), q[2].get<double>());
    s.R = j.at("R").get<double>();
    s.Gamma = j.at("Gamma").get<double>();
    s.epsilon = j.value("epsilon", 0.0);
    s.n_max = j.value("n_max", 32);
    for (const auto& m : j.value("modes", nlohmann::json::array())) {
      if (!m.is_array() || m.size() != 3) throw ValidationError("modes", "each entry must be [n, re, im]");
      const int n = m[0].get<int>();
      if (s.modes.count(n)) throw ValidationError("modes", "duplicate mode " + std::to_string(n));
      s.modes[n] = Complex(m[1].get<double>(), m[2].get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("filament", std::string("bad field: ") + e.what());
  }
  validate(s);
  return s;
}

}  // namespace vortex
