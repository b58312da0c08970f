#include <string>
#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "vortex/kernels.hpp"

namespace vortex::kernels {

namespace {

struct Table {
  Isa isa;
  double (*dot)(std::span<const double>, std::span<const double>);
  void (*axpy)(double, std::span<const double>, std::span<double>);
  void (*cross)(Soa3View, Soa3View, Soa3Span);
  void (*stencil5)(const Stencil5&, std::span<const double>, std::span<double>);
  Vec3 (*pairwise_cross_sum)(Soa3View);
  void (*sqrt_ratio)(std::span<const double>, std::span<const double>, std::span<double>);
};

constexpr Table kScalar{Isa::scalar,  &scalar::dot,          &scalar::axpy, &scalar::cross, &scalar::stencil5,
                        &scalar::pairwise_cross_sum, &scalar::sqrt_ratio};
constexpr Table kAvx2{Isa::avx2,    &avx2::dot,          &avx2::axpy, &avx2::cross, &avx2::stencil5,
                      &avx2::pairwise_cross_sum, &avx2::sqrt_ratio};
constexpr Table kNeon{Isa::neon,    &neon::dot,          &neon::axpy, &neon::cross, &neon::stencil5,
                      &neon::pairwise_cross_sum, &neon::sqrt_ratio};

const Table& table_for(Isa isa) {
  switch (isa) {
    case Isa::avx2: return kAvx2;
    case Isa::neon: return kNeon;
    case Isa::scalar: break;
  }
  return kScalar;
}

Isa detect() {
  if (const char* env = std::getenv("VORTEX_KERNELS")) {
    const std::string_view v(env);
    if (v == "scalar") return Isa::scalar;
    if (v == "avx2" && isa_supported(Isa::avx2)) return Isa::avx2;
    if (v == "neon" && isa_supported(Isa::neon)) return Isa::neon;
  }
  if (isa_supported(Isa::avx2)) return Isa::avx2;
  if (isa_supported(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

std::atomic<const Table*>& current() {
  static std::atomic<const Table*> t{&table_for(detect())};
  return t;
}

const Table& active() { return *current().load(std::memory_order_acquire); }

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
    case Isa::scalar: break;
  }
  return "scalar";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(__i386__)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() { return active().isa; }

void set_isa(Isa isa) {
  if (!isa_supported(isa)) throw std::invalid_argument(std::string("kernel ISA not supported on this host: ") + isa_name(isa));
  current().store(&table_for(isa), std::memory_order_release);
}

double dot(std::span<const double> a, std::span<const double> b) { return active().dot(a, b); }
void axpy(double alpha, std::span<const double> x, std::span<double> y) { active().axpy(alpha, x, y); }
void cross(Soa3View a, Soa3View b, Soa3Span out) { active().cross(a, b, out); }
void stencil5(const Stencil5& op, std::span<const double> x, std::span<double> y) { active().stencil5(op, x, y); }
Vec3 pairwise_cross_sum(Soa3View j) { return active().pairwise_cross_sum(j); }
void sqrt_ratio(std::span<const double> num, std::span<const double> den, std::span<double> out) {
  active().sqrt_ratio(num, den, out);
}

}  // namespace vortex::kernels
