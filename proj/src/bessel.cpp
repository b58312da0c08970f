#include "vortex/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vortex {

namespace {

constexpr double kScanStep = 0.05;  // zeros are about pi apart

double refine(int nu, double a, double b) {
  double fa = std::cyl_bessel_j(nu, a);
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = std::cyl_bessel_j(nu, m);
    if (fm == 0.0) return m;
    if ((fa < 0.0) == (fm < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Sign-change scan from nu upwards (no zero of J_nu lies below nu). Stops at
// `count` zeros or past `limit`, whichever comes first.
std::vector<double> scan(int nu, std::size_t count, double limit) {
  if (nu < 0) throw std::invalid_argument("Bessel order must be nonnegative");
  std::vector<double> zeros;
  double a = std::max(static_cast<double>(nu), kScanStep);
  double fa = std::cyl_bessel_j(nu, a);
  while (zeros.size() < count && a <= limit) {
    const double b = a + kScanStep;
    const double fb = std::cyl_bessel_j(nu, b);
    if ((fa < 0.0) != (fb < 0.0)) {
      const double z = refine(nu, a, b);
      if (z > limit) break;
      zeros.push_back(z);
    }
    a = b;
    fa = fb;
  }
  return zeros;
}

}  // namespace

std::vector<double> bessel_j_zeros_below(int nu, double limit) {
  if (limit <= nu) return {};
  return scan(nu, static_cast<std::size_t>(-1), limit);
}

std::vector<double> bessel_j_zeros(int nu, int count) {
  if (count <= 0) return {};
  return scan(nu, static_cast<std::size_t>(count), std::numeric_limits<double>::infinity());
}

}  // namespace vortex
