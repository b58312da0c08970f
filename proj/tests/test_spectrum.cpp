#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "vortex/constants.hpp"
#include "vortex/eigen.hpp"
#include "vortex/errors.hpp"
#include "vortex/spectrum.hpp"

using namespace vortex;

namespace {

constexpr double kJ01 = 2.404825557695773;

PhysicalConstants cylinder(double eps, double hbar = 1e-3, double L = 10.0) {
  PhysicalConstants c;
  c.L = L;
  c.hbar = hbar;
  c.epsilon = eps;
  return c;
}

}  // namespace

TEST(Level, FrozenDiskExample) {
  const auto c = cylinder(0.1);
  const auto lv = gamma_series({8, 1, 0}, kJ01, c, 1.0);
  const double ref = oracle::reduced_level(8, kJ01, 10.0, 0.1, 1e-3, 0);
  EXPECT_NEAR(ref, 8.036539009237093, 1e-14);
  EXPECT_NEAR(lv.reduced, ref, 1e-13);
  EXPECT_TRUE(lv.warnings.empty());
  EXPECT_EQ(lv.sector(), "H(8,1,0)");
}

TEST(Level, MatchesExtendedPrecisionOverGrid) {
  for (double eps : {0.0, 0.05, 0.3})
    for (int n : {1, 3, 17})
      for (int k : {0, 7, 100}) {
        const auto c = cylinder(eps, 1e-3, 1.0);
        const double lam = 0.9 * kPi * n;
        const auto lv = gamma_series({n, 1, k}, lam, c, 1.0);
        EXPECT_NEAR(lv.reduced, oracle::reduced_level(n, lam, 1.0, eps, 1e-3, k), 4e-16 * n) << eps << n << k;
      }
}

TEST(Level, ZeroEpsilonIsStandardCirculation) {
  for (double R : {1.0, 0.3, 0.77}) {
    auto c = cylinder(0.0);
    c.mu0 = 1.7;
    c.rho0 = 0.9;
    const double mu_v = derive_scales(c).mu_v(R);
    for (int n = 1; n <= 12; ++n)
      for (int k : {0, 13}) {
        const double g = gamma_exact({n, 2, k}, 1.3, c, R);
        EXPECT_NEAR(g, c.hbar * n / mu_v, 1e-15 * g);
        EXPECT_NEAR(gamma_series({n, 2, k}, 1.3, c, R).reduced, n, 1e-13);
      }
  }
}

TEST(Level, MassIdentity) {
  PhysicalConstants c;
  c.mu0 = 2.3;
  c.rho0 = 0.6;
  c.R0 = 1.4;
  c.L = 7.0;
  const auto d = derive_scales(c);
  for (double R : {0.2, 1.0, 1.4}) EXPECT_NEAR(d.alpha * c.rho0 * R * R * c.L, d.mu_v(R), 1e-15 * d.mu_v(R));
}

TEST(Level, FormFactorRaisesLevel) {
  const auto c = cylinder(0.1);
  const auto lv = gamma_series({5, 1, 0}, kJ01, c, 1.0);
  EXPECT_GT(lv.gamma_exact, lv.base);
  EXPECT_EQ(lv.fine_structure, 0.0);
}

TEST(Level, VanishingLambdaGivesBase) {
  const auto lv = gamma_series({3, 1, 0}, 0.0, cylinder(0.2), 1.0);
  EXPECT_EQ(lv.gamma_series, lv.base);
  EXPECT_EQ(lv.form_factor, 0.0);
}

TEST(Level, FineStructureLinearInK) {
  const auto c = cylinder(0.1);
  for (int k : {1, 5, 31}) {
    const double a = gamma_series({2, 1, k}, 1.0, c, 1.0).fine_structure;
    const double b = gamma_series({2, 1, 2 * k}, 1.0, c, 1.0).fine_structure;
    EXPECT_EQ(b, 2.0 * a);
    EXPECT_NEAR(a, -4.0 * c.hbar * k, 1e-18);
  }
}

TEST(Level, ResidualIsFourthOrderInEpsilon) {
  for (int k : {0, 50}) {
    const double lam = 2.0;
    const double a = gamma_series({1, 1, k}, lam, cylinder(0.1, 1e-6, 1.0), 1.0).residual;
    const double b = gamma_series({1, 1, k}, lam, cylinder(0.05, 1e-6, 1.0), 1.0).residual;
    EXPECT_GE(a / b, 8.0) << k;
  }
}

TEST(Level, MonotoneInQuantumNumbers) {
  const auto c = cylinder(0.2, 1e-3, 1.0);
  EXPECT_LT(gamma_exact({3, 1, 4}, 2.0, c, 1.0), gamma_exact({4, 1, 4}, 2.0, c, 1.0));
  EXPECT_LT(gamma_exact({3, 1, 4}, 2.0, c, 1.0), gamma_exact({3, 2, 4}, 2.5, c, 1.0));
  EXPECT_GT(gamma_exact({3, 1, 4}, 2.0, c, 1.0), gamma_exact({3, 1, 5}, 2.0, c, 1.0));
}

TEST(Level, FineCorrectionScalesAsHbarSquared) {
  std::vector<double> lh, lc;
  for (double hbar : {1e-4, 2e-4, 4e-4, 8e-4}) {
    const auto c = cylinder(0.1, hbar, 1.0);
    const double d = gamma_exact({2, 1, 0}, 1.0, c, 1.0) - gamma_exact({2, 1, 10}, 1.0, c, 1.0);
    lh.push_back(std::log(hbar));
    lc.push_back(std::log(d));
  }
  for (std::size_t i = 1; i < lh.size(); ++i) EXPECT_NEAR((lc[i] - lc[i - 1]) / (lh[i] - lh[i - 1]), 2.0, 0.01);
}

TEST(Level, RuleViolationsWarn) {
  const auto c = cylinder(0.1);  // pi n / L = 0.314 for n = 1
  const auto lv = gamma_series({1, 1, 200}, kJ01, c, 1.0);
  EXPECT_EQ(lv.warnings.size(), 2u);
  EXPECT_GT(lv.gamma_exact, 0.0);
  EXPECT_FALSE(admissible({1, 1, 0}, kJ01, c));
  EXPECT_TRUE(admissible({8, 1, 125}, kJ01, c));
  EXPECT_FALSE(admissible({8, 1, 126}, kJ01, c));
}

TEST(Level, ZeroAxialNumberHasNoSeries) {
  const auto lv = gamma_series({0, 1, 0}, kJ01, cylinder(0.1), 1.0);
  EXPECT_GT(lv.gamma_exact, 0.0);
  EXPECT_TRUE(std::isnan(lv.gamma_series));
  EXPECT_TRUE(std::isnan(lv.form_factor));
}

TEST(Rules, MaxK) {
  EXPECT_EQ(max_k(cylinder(0.1, 1e-3)), 125);
  EXPECT_EQ(max_k(cylinder(0.1, 0.00125)), 100);
  EXPECT_EQ(max_k(cylinder(0.1, 0.2)), 0);
}

TEST(Enumerate, EmptyWhenRuleExcludesEveryMode) {
  const auto c = cylinder(0.1, 1e-3, 2.0);
  EnumerateOptions o;
  o.n_max = 1;
  EXPECT_TRUE(enumerate_levels(c, 1.0, eigen_analytic(Disk{1.0}, 1), o).empty());
}

TEST(Enumerate, OccupationRange) {
  const auto c = cylinder(0.1, 1e-3, 1.0);
  EnumerateOptions o;
  o.n_max = 1;
  const auto lv = enumerate_levels(c, 1.0, eigen_analytic_covering(Disk{1.0}, kPi), o);
  ASSERT_EQ(lv.size(), 126u);
  std::set<int> ks;
  for (const auto& l : lv) {
    ks.insert(l.qn.k);
    EXPECT_EQ(l.qn.m, 1);
  }
  EXPECT_EQ(*ks.begin(), 0);
  EXPECT_EQ(*ks.rbegin(), 125);
  o.k_max = 3;
  EXPECT_EQ(enumerate_levels(c, 1.0, eigen_analytic_covering(Disk{1.0}, kPi), o).size(), 4u);
}

TEST(Enumerate, DegenerateModesShareOneLevel) {
  const auto c = cylinder(0.1, 0.02, 1.0);  // k = 0..6
  EnumerateOptions o;
  o.n_max = 2;
  const auto eig = eigen_analytic_covering(Disk{1.0}, 2.0 * kPi);
  const auto lv = enumerate_levels(c, 1.0, eig, o);
  int doubles = 0;
  std::set<std::tuple<int, int, int>> seen;
  for (const auto& l : lv) {
    EXPECT_TRUE(seen.insert({l.qn.n, l.qn.m, l.qn.k}).second);
    if (std::abs(l.lambda - 3.831705970207512) < 1e-12) {
      EXPECT_EQ(l.multiplicity, 2);
      EXPECT_EQ(l.qn.m, 2);
      ++doubles;
    }
  }
  EXPECT_EQ(doubles, 7);  // only n = 2 admits lambda = j_{1,1}
  for (std::size_t i = 1; i < lv.size(); ++i) EXPECT_LE(lv[i - 1].gamma_exact, lv[i].gamma_exact);
}

TEST(Enumerate, IncompleteTableIsReported) {
  const auto c = cylinder(0.1, 1e-3, 1.0);
  EnumerateOptions o;
  o.n_max = 2;
  EXPECT_THROW(enumerate_levels(c, 1.0, eigen_analytic(Disk{1.0}, 3), o), IncompleteSpectrumError);
}

TEST(Enumerate, EigenvaluesAreRescaledByR0) {
  auto c = cylinder(0.1, 1e-3, 1.0);
  c.R0 = 2.0;
  EnumerateOptions o;
  o.n_max = 1;
  o.k_max = 0;
  const auto lv = enumerate_levels(c, 1.0, eigen_analytic_covering(Disk{1.0}, 2.0 * kPi), o);
  ASSERT_FALSE(lv.empty());
  EXPECT_NEAR(lv.front().lambda, kJ01 / 2.0, 1e-14);
}

TEST(Histogram, IntegersAtZeroEpsilon) {
  const auto c = cylinder(0.0, 1e-3, 1.0);
  EnumerateOptions o;
  o.n_max = 4;
  o.k_max = 5;
  const auto lv = enumerate_levels(c, 1.0, eigen_analytic_covering(Disk{1.0}, 4.0 * kPi), o);
  const auto h = peak_histogram(lv, 0.01);
  long total = 0;
  for (const auto& b : h.bins) {
    EXPECT_NEAR(b.center, std::round(b.center), 1e-12);
    total += b.count;
  }
  long expected = 0;
  for (const auto& l : lv) expected += l.multiplicity;
  EXPECT_EQ(total, expected);
  for (double off : h.offsets) EXPECT_NEAR(off, 0.0, 1e-12);
}

TEST(Histogram, SingleLevelSingleBin) {
  const auto c = cylinder(0.1, 1e-3, 1.0);
  const auto h = peak_histogram({gamma_series({1, 1, 0}, kJ01, c, 1.0)}, 0.01);
  ASSERT_EQ(h.bins.size(), 1u);
  EXPECT_EQ(h.bins[0].count, 1);
  EXPECT_EQ(h.offsets.size(), 1u);
}

TEST(Histogram, OffsetsWithinCorrectionBound) {
  const auto c = cylinder(0.1, 1e-3, 10.0);
  EnumerateOptions o;
  o.n_max = 20;
  const auto lv = enumerate_levels(c, 1.0, eigen_analytic_covering(Disk{1.0}, 2.0 * kPi), o);
  ASSERT_FALSE(lv.empty());
  for (const auto& p : peak_clusters(lv, c)) {
    EXPECT_LE(p.max_rel_offset, p.bound) << p.integer;
    EXPECT_LE(p.bound, 0.01 * 0.5 + 1e-15);
  }
  double worst = 0.0;
  for (const auto& l : lv) {
    const double b = c.epsilon * c.epsilon * std::max(l.form_factor, -l.fine_structure);
    EXPECT_LE(std::abs(l.reduced / l.qn.n - 1.0), b + 1e-15);
    worst = std::max(worst, b);
  }
  EXPECT_GT(worst, 0.0);
}
