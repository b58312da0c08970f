#include <cmath>

#include "vortex/kernels.hpp"

namespace vortex::kernels::scalar {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = y[i] + alpha * x[i];
}

void cross(Soa3View a, Soa3View b, Soa3Span out) {
  const std::size_t n = a.x.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double cx = a.y[i] * b.z[i] - a.z[i] * b.y[i];
    const double cy = a.z[i] * b.x[i] - a.x[i] * b.z[i];
    const double cz = a.x[i] * b.y[i] - a.y[i] * b.x[i];
    out.x[i] = cx;
    out.y[i] = cy;
    out.z[i] = cz;
  }
}

void stencil5(const Stencil5& op, std::span<const double> x, std::span<double> y) {
  const int s = op.stride();
  for (int iy = 1; iy <= op.ny; ++iy) {
    const int row = iy * s;
    for (int ix = 1; ix <= op.nx; ++ix) {
      const int c = row + ix;
      double t = op.diag[c] * x[c];
      t = t - x[c - 1];
      t = t - x[c + 1];
      t = t - x[c - s];
      t = t - x[c + s];
      y[c] = (t * op.inv_h2) * op.weight[c];
    }
  }
}

Vec3 pairwise_cross_sum(Soa3View j) {
  const std::size_t n = j.x.size();
  double sx = 0.0, sy = 0.0, sz = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double ax = 0.0, ay = 0.0, az = 0.0;
    for (std::size_t k = i + 1; k < n; ++k) {
      ax += j.y[k] * j.z[i] - j.z[k] * j.y[i];
      ay += j.z[k] * j.x[i] - j.x[k] * j.z[i];
      az += j.x[k] * j.y[i] - j.y[k] * j.x[i];
    }
    sx += ax;
    sy += ay;
    sz += az;
  }
  return {sx, sy, sz};
}

void sqrt_ratio(std::span<const double> num, std::span<const double> den, std::span<double> out) {
  for (std::size_t i = 0; i < num.size(); ++i) out[i] = std::sqrt(num[i]) / std::sqrt(den[i]);
}

}  // namespace vortex::kernels::scalar
