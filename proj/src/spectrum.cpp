#include "vortex/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "vortex/errors.hpp"
#include "vortex/kernels.hpp"
#include "vortex/types.hpp"

namespace vortex {

namespace {

constexpr double kRuleTol = 1e-12;

double prefactor(const PhysicalConstants& c, const DerivedScales& d, double R) {
  return c.hbar / (kPi * d.alpha * c.rho0 * R * R);
}

double axial_sq(int n, const PhysicalConstants& c) {
  const double a = kPi * n / c.L;
  return a * a;
}

}  // namespace

std::string CirculationLevel::sector() const {
  return "H(" + std::to_string(qn.n) + "," + std::to_string(qn.m) + "," + std::to_string(qn.k) + ")";
}

double gamma_exact(const QuantumNumbers& qn, double lambda, const PhysicalConstants& c, double R) {
  const auto d = derive_scales(c);
  if (!(R > 0.0)) throw ValidationError("R", "must be positive");
  const double e2 = c.epsilon * c.epsilon;
  const double num = axial_sq(qn.n, c) + e2 * lambda * lambda;
  const double den = 1.0 + 8.0 * e2 * d.beta * qn.k;
  return prefactor(c, d, R) * (std::sqrt(num) / std::sqrt(den));
}

bool admissible(const QuantumNumbers& qn, double lambda, const PhysicalConstants& c) {
  const auto d = derive_scales(c);
  return qn.n >= 1 && qn.k >= 0 && lambda <= kPi * qn.n / c.L * (1.0 + kRuleTol) &&
         8.0 * d.beta * qn.k <= 1.0 + kRuleTol;
}

int max_k(const PhysicalConstants& c) {
  const auto d = derive_scales(c);
  return static_cast<int>(std::floor((1.0 + kRuleTol) / (8.0 * d.beta)));
}

CirculationLevel gamma_series(const QuantumNumbers& qn, double lambda, const PhysicalConstants& c, double R) {
  const auto d = derive_scales(c);
  CirculationLevel l;
  l.qn = qn;
  l.lambda = lambda;
  l.gamma_exact = gamma_exact(qn, lambda, c, R);
  const double mu_v = d.mu_v(R);
  l.reduced = mu_v * l.gamma_exact / c.hbar;
  const double e2 = c.epsilon * c.epsilon;
  if (qn.n == 0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    l.base = 0.0;
    l.form_factor = l.fine_structure = l.gamma_series = l.residual = nan;
  } else {
    l.base = c.hbar * qn.n / mu_v;
    const double F = c.L * lambda / (kPi * qn.n);
    l.form_factor = 0.5 * F * F;
    l.fine_structure = -4.0 * c.hbar * qn.k / (c.mu0 * c.v0 * c.R0);
    l.gamma_series = l.base * (1.0 + e2 * (l.form_factor + l.fine_structure));
    l.residual = std::abs(l.gamma_exact - l.gamma_series);
  }
  if (qn.n < 1 || lambda > kPi * qn.n / c.L * (1.0 + kRuleTol)) {
    std::ostringstream msg;
    msg << "lambda_m = " << lambda << " exceeds pi n / L = " << kPi * qn.n / c.L;
    l.warnings.push_back(msg.str());
  }
  if (8.0 * d.beta * qn.k > 1.0 + kRuleTol) {
    std::ostringstream msg;
    msg << "k = " << qn.k << " violates 8 hbar k <= mu0 v0 R0";
    l.warnings.push_back(msg.str());
  }
  return l;
}

std::vector<CirculationLevel> enumerate_levels(const PhysicalConstants& c, double R, const EigenResult& eig,
                                               const EnumerateOptions& opt) {
  const auto d = derive_scales(c);
  if (opt.n_max < 1) throw ValidationError("sweep.n_max", "must be at least 1");
  const int krule = max_k(c);
  const int kmax = opt.k_max < 0 ? krule : std::min(opt.k_max, krule);
  const double top = kPi * opt.n_max / c.L;
  if (eig.size() == 0 || eig.lambdas.back() / c.R0 <= top * (1.0 + kRuleTol)) {
    std::ostringstream msg;
    msg << "eigenvalue list ends at m = " << eig.size() << " (lambda = "
        << (eig.size() ? eig.lambdas.back() / c.R0 : 0.0) << ") but the selection rule admits lambda up to pi n_max / L = "
        << top << "; eigenvalues m > " << eig.size() << " are missing";
    throw IncompleteSpectrumError(msg.str());
  }

  const double e2 = c.epsilon * c.epsilon;
  const double pref = prefactor(c, d, R);
  const double mu_v = d.mu_v(R);
  std::vector<double> den(static_cast<std::size_t>(kmax) + 1), num, ratio(den.size());
  for (int k = 0; k <= kmax; ++k) den[k] = 1.0 + 8.0 * e2 * d.beta * k;

  std::vector<CirculationLevel> levels;
  const auto clusters = eig.clusters();
  auto emit = [&](int n, int first, int mult) {
    const double lambda = eig.lambdas[first] / c.R0;
    num.assign(den.size(), axial_sq(n, c) + e2 * lambda * lambda);
    kernels::sqrt_ratio(num, den, ratio);
    for (int k = 0; k <= kmax; ++k) {
      CirculationLevel l = gamma_series({n, first + 1, k}, lambda, c, R);
      l.gamma_exact = pref * ratio[k];  // batched; same operation order as gamma_exact
      l.reduced = mu_v * l.gamma_exact / c.hbar;
      if (n != 0) l.residual = std::abs(l.gamma_exact - l.gamma_series);
      l.multiplicity = mult;
      levels.push_back(std::move(l));
    }
  };
  for (int n = opt.include_n0 ? 0 : 1; n <= opt.n_max; ++n)
    for (const auto& [first, mult] : clusters) {
      const double lambda = eig.lambdas[first] / c.R0;
      if (n > 0 && lambda > kPi * n / c.L * (1.0 + kRuleTol)) break;
      emit(n, first, mult);
    }
  std::sort(levels.begin(), levels.end(), [](const CirculationLevel& a, const CirculationLevel& b) {
    if (a.gamma_exact != b.gamma_exact) return a.gamma_exact < b.gamma_exact;
    if (a.qn.n != b.qn.n) return a.qn.n < b.qn.n;
    if (a.qn.m != b.qn.m) return a.qn.m < b.qn.m;
    return a.qn.k < b.qn.k;
  });
  return levels;
}

PeakHistogram peak_histogram(const std::vector<CirculationLevel>& levels, double bin_width) {
  if (!(bin_width > 0.0)) throw ValidationError("sweep.bin_width", "must be positive");
  if (levels.empty()) throw ValidationError("levels", "histogram needs at least one level");
  PeakHistogram h;
  std::map<long long, long> counts;
  for (const auto& l : levels) {
    counts[std::llround(l.reduced / bin_width)] += l.multiplicity;
    h.offsets.push_back(l.reduced - std::round(l.reduced));
  }
  for (const auto& [idx, n] : counts) h.bins.push_back({static_cast<double>(idx) * bin_width, n});
  return h;
}

std::vector<PeakCluster> peak_clusters(const std::vector<CirculationLevel>& levels, const PhysicalConstants& c) {
  const auto d = derive_scales(c);
  const double e2 = c.epsilon * c.epsilon;
  std::map<int, std::vector<const CirculationLevel*>> by_n;
  for (const auto& l : levels) by_n[l.qn.n].push_back(&l);
  std::vector<PeakCluster> out;
  for (auto& [n, members] : by_n) {
    PeakCluster p;
    p.integer = n;
    std::vector<double> values;
    for (const auto* l : members) {
      ++p.levels;
      values.push_back(l->reduced);
      if (n != 0) {
        p.max_rel_offset = std::max(p.max_rel_offset, std::abs(l->reduced / n - 1.0));
        p.bound = std::max(p.bound, e2 * std::max(l->form_factor, 4.0 * d.beta * l->qn.k));
      }
    }
    std::sort(values.begin(), values.end());
    for (std::size_t i = 0; i < values.size(); ++i)
      if (i == 0 || std::abs(values[i] - values[i - 1]) > 1e-12 * std::abs(values[i])) ++p.distinct;
    out.push_back(p);
  }
  return out;
}

}  // namespace vortex
