#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "vortex/dispersion.hpp"
#include "vortex/errors.hpp"
#include "vortex/filament.hpp"
#include "vortex/lie.hpp"
#include "vortex/spectral.hpp"

using namespace vortex;

namespace {

FilamentState perturbed(double eps, double R = 1.0) {
  FilamentState s = base_ring(Vec3(0.1, -0.2, 0.3), R, 1.0);
  s.epsilon = eps;
  set_mode(s, 0, 0.4);
  set_mode(s, -1, Complex(0.3, -0.2));
  set_mode(s, 2, Complex(0.5, 0.1));
  set_mode(s, -3, Complex(-0.2, 0.25));
  return s;
}

std::vector<Vec3> spectral_tangent(const std::vector<Vec3>& pts, double R) {
  const int n = static_cast<int>(pts.size());
  FourierGrid g(n);
  std::vector<Vec3> t(n);
  for (int d = 0; d < 3; ++d) {
    std::vector<double> c(n);
    for (int i = 0; i < n; ++i) c[i] = pts[i][d];
    const auto dc = g.derivative(std::span<const double>(c), 1);
    for (int i = 0; i < n; ++i) t[i][d] = dc[i] / R;
  }
  return t;
}

}  // namespace

TEST(BaseRing, CircleAroundShiftedCentre) {
  for (double R : {1.0, 0.4}) {
    const Vec3 q0(0.3, -0.2, 1.1);
    const auto c = reconstruct_curve(base_ring(q0, R, 1.0), 128);
    const Vec3 centre = q0 + Vec3(-R, 0.0, 0.0);
    for (const auto& p : c.points) {
      EXPECT_NEAR((p - centre).norm(), R, 1e-14);
      EXPECT_NEAR(p.z(), q0.z(), 1e-14);
    }
  }
}

TEST(BaseRing, FirstNodeIsOffset) {
  const Vec3 q0(-2.0, 5.0, 0.25);
  const auto c = reconstruct_curve(base_ring(q0, 0.7, 1.0), 64);
  EXPECT_NEAR((c.points[0] - q0).norm(), 0.0, 1e-14);
}

TEST(BaseRing, NoModes) {
  EXPECT_TRUE(base_ring(Vec3::Zero(), 1.0, 1.0).modes.empty());
  EXPECT_THROW(base_ring(Vec3::Zero(), 0.0, 1.0), ValidationError);
  EXPECT_THROW(base_ring(Vec3::Zero(), -1.0, 1.0), ValidationError);
}

TEST(TangentField, BaseRingIsExact) {
  const int N = 48;
  const auto t = tangent_field(base_ring(Vec3::Zero(), 1.0, 1.0), N);
  for (int i = 0; i < N; ++i) {
    const double xi = kTwoPi * i / N;
    EXPECT_EQ(t[i], Vec3(-std::sin(xi), std::cos(xi), 0.0));
  }
}

TEST(TangentField, TwoTermModeMatchesPointwiseSum) {
  FilamentState s = base_ring(Vec3::Zero(), 1.0, 1.0);
  s.epsilon = 0.1;
  const Complex c(0.7, -0.4);
  set_mode(s, -1, c);
  EXPECT_EQ(s.mode(1), -std::conj(c));
  const int N = 32;
  const auto t = tangent_field(s, N);
  for (int i = 0; i < N; ++i) {
    const Vec3 ref = oracle::tangent(s.modes, s.epsilon, kTwoPi * i / N);
    EXPECT_NEAR((t[i] - ref).norm(), 0.0, 1e-14);
  }
}

TEST(TangentField, MultiModeMatchesPointwiseSum) {
  const auto s = perturbed(0.05);
  const int N = 64;
  const auto t = tangent_field(s, N);
  for (int i = 0; i < N; ++i)
    EXPECT_NEAR((t[i] - oracle::tangent(s.modes, s.epsilon, kTwoPi * i / N)).norm(), 0.0, 1e-14);
}

TEST(TangentField, ZeroedModesGiveBaseRing) {
  auto s = perturbed(0.1);
  for (auto& [n, a] : s.modes) a *= 0.0;
  EXPECT_EQ(tangent_field(s, 32), tangent_field(base_ring(s.q, s.R, s.Gamma), 32));
}

TEST(TangentField, RejectsAliasingGrid) {
  FilamentState s = base_ring(Vec3::Zero(), 1.0, 1.0);
  set_mode(s, 8, Complex(1.0, 0.0));
  EXPECT_THROW(tangent_field(s, 31), AliasingError);
  EXPECT_NO_THROW(tangent_field(s, 32));
  EXPECT_THROW(tangent_field(base_ring(Vec3::Zero(), 1.0, 1.0), 3), AliasingError);
}

TEST(Reconstruct, CircumferenceOfBaseRing) {
  const auto c = reconstruct_curve(base_ring(Vec3::Zero(), 1.0, 1.0), 128);
  EXPECT_NEAR(curve_length(c.points), kTwoPi, 1e-8);
  EXPECT_NEAR(oracle::arc_length({}, 0.0, 1.0), kTwoPi, 1e-12);
}

TEST(Reconstruct, PerturbedLengthMatchesQuadrature) {
  const auto s = perturbed(0.05, 0.6);
  const auto c = reconstruct_curve(s, 128);
  EXPECT_NEAR(curve_length(c.points), oracle::arc_length(s.modes, s.epsilon, s.R), 1e-12);
}

TEST(Reconstruct, ClosureViolationIsRejected) {
  FilamentState s = base_ring(Vec3::Zero(), 1.0, 1.0);
  s.epsilon = 0.1;
  s.modes[0] = Complex(0.0, 0.5);  // imaginary j_0 lifts the curve
  try {
    reconstruct_curve(s, 32);
    FAIL() << "no ConstraintError";
  } catch (const ConstraintError& e) {
    EXPECT_NEAR(e.residual().z(), kTwoPi * 0.1 * 0.5, 1e-14);
  }
}

TEST(Reconstruct, PerturbationStaysWithinKernelBound) {
  const double eps = 1e-3;
  const auto s = perturbed(eps, 0.8);
  const auto base = reconstruct_curve(base_ring(s.q, s.R, s.Gamma), 128);
  const auto c = reconstruct_curve(s, 128);
  double amp = 0.0;
  for (const auto& v : sample_amplitude(s, 128)) amp = std::max(amp, std::abs(v));
  double dmax = 0.0;
  for (int i = 0; i < 128; ++i) dmax = std::max(dmax, (c.points[i] - base.points[i]).norm());
  EXPECT_GT(dmax, 0.0);
  EXPECT_LE(dmax, kTwoPi * s.R * eps * amp);
}

TEST(Reconstruct, SpectralDerivativeRecoversTangent) {
  for (const auto& s : {base_ring(Vec3::Zero(), 1.0, 1.0), perturbed(0.05, 0.5)}) {
    const auto c = reconstruct_curve(s, 256);
    const auto t = spectral_tangent(c.points, s.R);
    for (int i = 0; i < 256; ++i) EXPECT_LE((t[i] - c.tangents[i]).norm(), 1e-8 * c.tangents[i].norm());
  }
}

TEST(Reconstruct, DoublingResolutionAgrees) {
  const auto s = perturbed(0.05, 0.9);
  const auto a = reconstruct_curve(s, 64), b = reconstruct_curve(s, 128);
  for (int i = 0; i < 64; ++i) EXPECT_LT((a.points[i] - b.points[2 * i]).norm(), 1e-10);
}

TEST(Closure, BaseRingIsClosed) { EXPECT_EQ(check_closure(base_ring(Vec3::Zero(), 1.0, 1.0)).norm(), 0.0); }

TEST(Closure, ImaginaryZeroModeLiftsLinearly) {
  for (double c : {0.2, 0.6}) {
    FilamentState s = base_ring(Vec3::Zero(), 1.0, 1.0);
    s.epsilon = 0.1;
    s.modes[0] = Complex(0.0, c);
    const Vec3 r = check_closure(s);
    EXPECT_NEAR(r.z(), kTwoPi * 0.1 * c, 1e-15);
    EXPECT_EQ(r.x(), 0.0);
    // quadrature of the sampled field agrees
    const auto t = tangent_field(s, 32);
    double z = 0.0;
    for (const auto& v : t) z += v.z() * kTwoPi / 32;
    EXPECT_NEAR(z, r.z(), 1e-14);
  }
}

TEST(Closure, RealZeroModeCloses) {
  FilamentState s = base_ring(Vec3::Zero(), 1.0, 1.0);
  s.epsilon = 0.1;
  set_mode(s, 0, 0.8);
  EXPECT_LT(check_closure(s).norm(), 1e-15);
}

TEST(Closure, BrokenFirstModePairIsDetected) {
  FilamentState s = base_ring(Vec3::Zero(), 1.0, 1.0);
  s.epsilon = 0.2;
  s.modes[-1] = Complex(0.5, 0.0);  // partner j_1 missing
  const Vec3 r = check_closure(s);
  EXPECT_NEAR(r.x(), kPi * 0.2 * 0.5, 1e-15);
  // pointwise quadrature oracle
  double x = 0.0;
  for (int i = 0; i < 64; ++i) x += oracle::tangent(s.modes, s.epsilon, kTwoPi * i / 64).x() * kTwoPi / 64;
  EXPECT_NEAR(x, r.x(), 1e-14);
}

TEST(Closure, CompliantStateBelowTolerance) { EXPECT_LT(check_closure(perturbed(0.3)).norm(), 1e-12); }

TEST(Modes, StoredPairsSatisfyCouplingExactly) {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FilamentState s = base_ring(Vec3::Zero(), 1.0, 1.0);
  for (int n = 2; n <= 12; ++n) set_mode(s, (n % 2 ? -n : n), Complex(u(gen), u(gen)));
  for (int n = 2; n <= 12; ++n) {
    const Complex r = std::conj(s.mode(-n)) - coupling_factor(n) * s.mode(n);
    if (n % 2 == 0) EXPECT_EQ(r, Complex(0.0));
    else EXPECT_LE(std::abs(r), 1e-14 * std::abs(s.mode(-n)));
  }
  EXPECT_NO_THROW(validate(s));
}

TEST(Modes, SetModeChecks) {
  FilamentState s = base_ring(Vec3::Zero(), 1.0, 1.0);
  s.n_max = 4;
  EXPECT_THROW(set_mode(s, 5, 1.0), ValidationError);
  EXPECT_THROW(set_mode(s, 0, Complex(0.0, 1.0)), ValidationError);
}

TEST(Modes, ValidateFlagsBrokenPairAndLargeRing) {
  FilamentState s = base_ring(Vec3::Zero(), 0.7, 1.0);
  set_mode(s, 3, Complex(0.1, 0.2));
  EXPECT_EQ(validate(s, 1.0).size(), 1u);
  EXPECT_TRUE(validate(s, 2.0).empty());
  s.modes[-3] *= 1.001;
  EXPECT_THROW(validate(s), ValidationError);
}

TEST(Modes, AnalysisInvertsSynthesis) {
  const auto s = perturbed(0.01);
  const auto m = analyze_tangents(tangent_field(s, 64), s.epsilon, 8);
  for (int n = -8; n <= 8; ++n) EXPECT_NEAR(std::abs(m.at(n) - s.mode(n)), 0.0, 1e-12);
}

TEST(Serialization, RoundTrip) {
  const auto s = perturbed(0.02, 0.3);
  const auto r = filament_from_json(to_json(s));
  EXPECT_EQ(r.q, s.q);
  EXPECT_EQ(r.R, s.R);
  EXPECT_EQ(r.epsilon, s.epsilon);
  EXPECT_EQ(r.modes, s.modes);
}

TEST(Serialization, RejectsBadRecords) {
  EXPECT_THROW(filament_from_json("{"), ValidationError);
  EXPECT_THROW(filament_from_json(R"({"q":[0,0],"R":1,"Gamma":1})"), ValidationError);
  EXPECT_THROW(filament_from_json(R"({"q":[0,0,0],"R":1,"Gamma":1,"modes":[[2,1,0],[-2,1,0]]})"), ValidationError);
  EXPECT_NO_THROW(filament_from_json(R"({"q":[0,0,0],"R":1,"Gamma":1,"modes":[[1,0.5,0],[-1,-0.5,0]]})"));
}
