#include "vortex/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace vortex {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(int n) : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(n)))) {
    if (!data) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

}  // namespace

struct FourierGrid::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit Plans(int n) {
    FftwBuffer in(n), out(n);
    std::lock_guard lock(planner_mutex());
    forward = fftw_plan_dft_1d(n, in.data, out.data, FFTW_FORWARD, FFTW_ESTIMATE);
    backward = fftw_plan_dft_1d(n, in.data, out.data, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!forward || !backward) throw std::runtime_error("FFTW planning failed");
  }
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
};

FourierGrid::FourierGrid(int n) : n_(n) {
  if (n < 2) throw std::invalid_argument("FourierGrid needs at least 2 points");
  plans_ = std::make_unique<Plans>(n);
}

FourierGrid::~FourierGrid() = default;
FourierGrid::FourierGrid(FourierGrid&&) noexcept = default;
FourierGrid& FourierGrid::operator=(FourierGrid&&) noexcept = default;

double FourierGrid::spacing() const { return kTwoPi / n_; }
double FourierGrid::node(int i) const { return kTwoPi * i / n_; }

int FourierGrid::wavenumber(int index) const { return index <= n_ / 2 ? index : index - n_; }

std::vector<Complex> FourierGrid::analyze(std::span<const Complex> samples) const {
  FftwBuffer in(n_), out(n_);
  for (int i = 0; i < n_; ++i) {
    in.data[i][0] = samples[i].real();
    in.data[i][1] = samples[i].imag();
  }
  fftw_execute_dft(plans_->forward, in.data, out.data);
  std::vector<Complex> c(n_);
  const double inv = 1.0 / n_;
  for (int i = 0; i < n_; ++i) c[i] = Complex(out.data[i][0] * inv, out.data[i][1] * inv);
  return c;
}

std::vector<Complex> FourierGrid::analyze(std::span<const double> samples) const {
  std::vector<Complex> tmp(samples.begin(), samples.end());
  return analyze(std::span<const Complex>(tmp));
}

std::vector<Complex> FourierGrid::synthesize(std::span<const Complex> coeffs) const {
  FftwBuffer in(n_), out(n_);
  for (int i = 0; i < n_; ++i) {
    in.data[i][0] = coeffs[i].real();
    in.data[i][1] = coeffs[i].imag();
  }
  fftw_execute_dft(plans_->backward, in.data, out.data);
  std::vector<Complex> f(n_);
  for (int i = 0; i < n_; ++i) f[i] = Complex(out.data[i][0], out.data[i][1]);
  return f;
}

std::vector<Complex> FourierGrid::derivative(std::span<const Complex> f, int order) const {
  auto c = analyze(f);
  for (int i = 0; i < n_; ++i) {
    const int k = wavenumber(i);
    if (order % 2 == 1 && n_ % 2 == 0 && i == n_ / 2) {
      c[i] = 0.0;
      continue;
    }
    Complex factor(1.0, 0.0);
    for (int p = 0; p < order; ++p) factor *= Complex(0.0, static_cast<double>(k));
    c[i] *= factor;
  }
  return synthesize(c);
}

std::vector<double> FourierGrid::derivative(std::span<const double> f, int order) const {
  std::vector<Complex> tmp(f.begin(), f.end());
  const auto d = derivative(std::span<const Complex>(tmp), order);
  std::vector<double> out(n_);
  for (int i = 0; i < n_; ++i) out[i] = d[i].real();
  return out;
}

std::vector<double> FourierGrid::integral_from_zero(std::span<const double> f) const {
  auto c = analyze(f);
  const double mean = c[0].real();
  // F(xi) = mean*xi + sum_{k != 0} c_k (e^{ik xi} - 1) / (ik)
  Complex offset(0.0, 0.0);
  c[0] = 0.0;
  if (n_ % 2 == 0) c[n_ / 2] = 0.0;
  for (int i = 1; i < n_; ++i) {
    if (c[i] == Complex(0.0, 0.0)) continue;
    const Complex ik(0.0, static_cast<double>(wavenumber(i)));
    c[i] /= ik;
    offset += c[i];
  }
  const auto g = synthesize(c);
  std::vector<double> out(n_);
  for (int i = 0; i < n_; ++i) out[i] = mean * node(i) + (g[i] - offset).real();
  return out;
}

void FourierGrid::dealias(std::span<double> f) const {
  auto c = analyze(std::span<const double>(f.data(), f.size()));
  const int cutoff = n_ / 3;
  for (int i = 0; i < n_; ++i)
    if (std::abs(wavenumber(i)) > cutoff) c[i] = 0.0;
  const auto g = synthesize(c);
  for (int i = 0; i < n_; ++i) f[i] = g[i].real();
}

double FourierGrid::period_integral(std::span<const double> f) const {
  double s = 0.0;
  for (double v : f) s += v;
  return s * spacing();
}

}  // namespace vortex
