#include "vortex/kernels.hpp"

#if defined(__aarch64__) || defined(_M_ARM64)
#define VORTEX_HAVE_NEON 1
#include <arm_neon.h>
#else
#define VORTEX_HAVE_NEON 0
#endif

namespace vortex::kernels::neon {

#if VORTEX_HAVE_NEON

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  std::size_t i = 0;
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vmulq_f64(vld1q_f64(&a[i]), vld1q_f64(&b[i])));
    acc1 = vaddq_f64(acc1, vmulq_f64(vld1q_f64(&a[i + 2]), vld1q_f64(&b[i + 2])));
  }
  double res = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) res += a[i] * b[i];
  return res;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(&y[i], vaddq_f64(vld1q_f64(&y[i]), vmulq_f64(va, vld1q_f64(&x[i]))));
  for (; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void cross(Soa3View a, Soa3View b, Soa3Span out) {
  const std::size_t n = a.x.size();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t ax = vld1q_f64(&a.x[i]), ay = vld1q_f64(&a.y[i]), az = vld1q_f64(&a.z[i]);
    const float64x2_t bx = vld1q_f64(&b.x[i]), by = vld1q_f64(&b.y[i]), bz = vld1q_f64(&b.z[i]);
    vst1q_f64(&out.x[i], vsubq_f64(vmulq_f64(ay, bz), vmulq_f64(az, by)));
    vst1q_f64(&out.y[i], vsubq_f64(vmulq_f64(az, bx), vmulq_f64(ax, bz)));
    vst1q_f64(&out.z[i], vsubq_f64(vmulq_f64(ax, by), vmulq_f64(ay, bx)));
  }
  if (i < n) {
    scalar::cross({a.x.subspan(i), a.y.subspan(i), a.z.subspan(i)}, {b.x.subspan(i), b.y.subspan(i), b.z.subspan(i)},
                  {out.x.subspan(i), out.y.subspan(i), out.z.subspan(i)});
  }
}

void stencil5(const Stencil5& op, std::span<const double> x, std::span<double> y) {
  const int s = op.stride();
  const float64x2_t inv_h2 = vdupq_n_f64(op.inv_h2);
  const double* xp = x.data();
  for (int iy = 1; iy <= op.ny; ++iy) {
    const int row = iy * s;
    int ix = 1;
    for (; ix + 2 <= op.nx + 1; ix += 2) {
      const int c = row + ix;
      float64x2_t t = vmulq_f64(vld1q_f64(&op.diag[c]), vld1q_f64(xp + c));
      t = vsubq_f64(t, vld1q_f64(xp + c - 1));
      t = vsubq_f64(t, vld1q_f64(xp + c + 1));
      t = vsubq_f64(t, vld1q_f64(xp + c - s));
      t = vsubq_f64(t, vld1q_f64(xp + c + s));
      vst1q_f64(&y[c], vmulq_f64(vmulq_f64(t, inv_h2), vld1q_f64(&op.weight[c])));
    }
    for (; ix <= op.nx; ++ix) {
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
  float64x2_t sx = vdupq_n_f64(0.0), sy = vdupq_n_f64(0.0), sz = vdupq_n_f64(0.0);
  double tx = 0.0, ty = 0.0, tz = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xi = vdupq_n_f64(j.x[i]), yi = vdupq_n_f64(j.y[i]), zi = vdupq_n_f64(j.z[i]);
    std::size_t k = i + 1;
    for (; k + 2 <= n; k += 2) {
      const float64x2_t xk = vld1q_f64(&j.x[k]), yk = vld1q_f64(&j.y[k]), zk = vld1q_f64(&j.z[k]);
      sx = vaddq_f64(sx, vsubq_f64(vmulq_f64(yk, zi), vmulq_f64(zk, yi)));
      sy = vaddq_f64(sy, vsubq_f64(vmulq_f64(zk, xi), vmulq_f64(xk, zi)));
      sz = vaddq_f64(sz, vsubq_f64(vmulq_f64(xk, yi), vmulq_f64(yk, xi)));
    }
    for (; k < n; ++k) {
      tx += j.y[k] * j.z[i] - j.z[k] * j.y[i];
      ty += j.z[k] * j.x[i] - j.x[k] * j.z[i];
      tz += j.x[k] * j.y[i] - j.y[k] * j.x[i];
    }
  }
  return {vaddvq_f64(sx) + tx, vaddvq_f64(sy) + ty, vaddvq_f64(sz) + tz};
}

void sqrt_ratio(std::span<const double> num, std::span<const double> den, std::span<double> out) {
  const std::size_t n = num.size();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(&out[i], vdivq_f64(vsqrtq_f64(vld1q_f64(&num[i])), vsqrtq_f64(vld1q_f64(&den[i]))));
  if (i < n) scalar::sqrt_ratio(num.subspan(i), den.subspan(i), out.subspan(i));
}

#else  // not aarch64: never selected.

double dot(std::span<const double> a, std::span<const double> b) { return scalar::dot(a, b); }
void axpy(double alpha, std::span<const double> x, std::span<double> y) { scalar::axpy(alpha, x, y); }
void cross(Soa3View a, Soa3View b, Soa3Span out) { scalar::cross(a, b, out); }
void stencil5(const Stencil5& op, std::span<const double> x, std::span<double> y) { scalar::stencil5(op, x, y); }
Vec3 pairwise_cross_sum(Soa3View j) { return scalar::pairwise_cross_sum(j); }
void sqrt_ratio(std::span<const double> num, std::span<const double> den, std::span<double> out) {
  scalar::sqrt_ratio(num, den, out);
}

#endif

}  // namespace vortex::kernels::neon
