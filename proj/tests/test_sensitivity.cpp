#include <cmath>

#include <gtest/gtest.h>

#include "pruefer/sensitivity.hpp"

using namespace pruefer;

TEST(ThetaDot, ZeroPotentialVanishes) {
  const Potential p(ConstantPotential{0.0});
  EXPECT_EQ(theta_dot_integral(p, 5.0, 0.7), 0.0);
  EXPECT_NEAR(theta_dot_fd(p, 5.0, 0.7, default_fd_step(5.0)), 0.0, 1e-9);
}

TEST(ThetaDot, ConstantPotentialMatchesFiniteDifferences) {
  for (double c : {1.0, 5.0}) {
    const Potential p(ConstantPotential{c});
    for (double z : {3.0, 10.0, 17.0}) {
      for (double x0 : {0.3, 0.5, 1.0}) {
        const ThetaDotResult r = theta_dot(p, z, x0);
        EXPECT_LE(r.discrepancy, std::max(1e-8, 1e-6 * std::abs(r.value_integral)))
            << c << " " << z << " " << x0;
      }
    }
  }
}

TEST(ThetaDot, ConstantPotentialUnitStep) {
  const Potential p(ConstantPotential{5.0});
  EXPECT_NEAR(theta_dot_fd(p, 10.0, 1.0, 1e-4), theta_dot_integral(p, 10.0, 1.0), 1e-7);
}

TEST(ThetaDot, BumpAtThresholdIsNonnegative) {
  const Potential p(SineBump{0.8, 0.03});
  const double z = std::sqrt(11 * 0.83);
  const ThetaDotResult r = theta_dot(p, z, 0.5);
  EXPECT_GE(r.value_integral, -1e-10);
  EXPECT_LE(r.discrepancy, std::max(1e-7, 1e-5 * std::abs(r.value_integral)));
}

TEST(ThetaDot, FiniteDifferenceIsSecondOrder) {
  // The truncation error of the central difference scales with h^2; the
  // h/2 estimate is closer to the integral value by about 4x.
  const Potential p(SineBump{1.0, 0.1});
  const double z = 6.0;
  const double x0 = 0.5;
  const double exact = theta_dot_integral(p, z, x0, tight_integrator());
  const double e1 = theta_dot_fd(p, z, x0, 0.2) - exact;
  const double e2 = theta_dot_fd(p, z, x0, 0.1) - exact;
  EXPECT_NEAR(e1 / e2, 4.0, 0.2);
}

TEST(ThetaDot, InvalidArguments) {
  const Potential p(ConstantPotential{1.0});
  EXPECT_THROW(theta_dot_fd(p, 1.0, 0.5, 2.0), DomainError);
  EXPECT_THROW(theta_dot_integral(p, 1.0, 1.5), DomainError);
  EXPECT_EQ(theta_dot_integral(p, 1.0, 0.0), 0.0);
}

TEST(Scan, ZeroPotential) {
  const MonotonicityScan s = monotonicity_scan(Potential(ConstantPotential{0.0}), 0.5, 30.0, 20);
  EXPECT_TRUE(s.violations.empty());
  for (double v : s.theta_dot_values) EXPECT_EQ(v, 0.0);
  EXPECT_GT(s.z_grid.front(), 0.0);
}

TEST(Scan, AdmissibleBumpHasNoViolations) {
  const Potential p(SineBump{0.8, 0.03});
  const MonotonicityScan s = monotonicity_scan(p, 0.5, 40.0, 25);
  EXPECT_TRUE(s.hypotheses_hold);
  EXPECT_TRUE(s.violations.empty());
  EXPECT_GT(s.min_value, 0.0);
  EXPECT_NEAR(s.z_grid.front(), std::sqrt(11 * 0.83), 1e-12);
  for (std::size_t k = 0; k < s.z_grid.size(); ++k) {
    EXPECT_LE(s.discrepancy[k], std::max(1e-7, 1e-5 * std::abs(s.theta_dot_values[k])));
    if (k > 0) {
      EXPECT_GT(s.z_grid[k], s.z_grid[k - 1]);
    }
  }
}

TEST(Scan, SteepBumpIsRecordedNotRejected) {
  // Hypotheses fail; the scan still runs and reports what it finds.
  const Potential p(SineBump{1.0, 3.0});
  ScanOptions opts;
  opts.with_fd = false;
  const MonotonicityScan s = monotonicity_scan(p, 0.5, 30.0, 30, opts);
  EXPECT_FALSE(s.hypotheses_hold);
  EXPECT_EQ(s.z_grid.size(), 30u);
}

TEST(Scan, IncreasingSideHypotheses) {
  const Potential p(SineBump{0.8, 0.03});
  ScanOptions opts;
  opts.with_fd = false;
  opts.hypothesis_set = HypothesisSet::increasing_side;
  EXPECT_TRUE(monotonicity_scan(p, 0.5, 20.0, 5, opts).hypotheses_hold);
}

TEST(Scan, RequiresRangeAboveThreshold) {
  EXPECT_THROW(monotonicity_scan(Potential(ConstantPotential{5.0}), 0.5, 7.0, 10), PreconditionError);
}

TEST(Psi, ZeroPotentialIsOne) {
  const Potential p(ConstantPotential{0.0});
  for (double z : {1.0, 4.0, 9.5}) EXPECT_NEAR(psi(p, z, 0.3), 1.0, 1e-12);
}

TEST(Psi, ReversalSymmetry) {
  const Potential p(sample_admissible(5));
  const double x0 = classify(p).x0;
  EXPECT_NEAR(psi(p, 12.0, x0), psi(reverse(p), 12.0, 1.0 - x0), 1e-11);
}

TEST(Psi, IdentityAtEigenvalues) {
  for (const Potential& p : {Potential(ConstantPotential{0.0}), Potential(ConstantPotential{5.0}),
                             Potential(SineBump{0.8, 0.03})}) {
    for (const PsiResidual& r : psi_identity_check(p, 12)) {
      EXPECT_LE(r.residual, 1e-8) << describe(p.spec()) << " n=" << r.n;
    }
  }
}

TEST(Psi, IncreasingAboveThreshold) {
  const Potential p(SineBump{0.8, 0.03});
  const double z0 = std::sqrt(11 * 0.83);
  double prev = psi(p, z0);
  for (int k = 1; k <= 40; ++k) {
    const double v = psi(p, z0 + 0.75 * k);
    EXPECT_GE(v, prev - 1e-10);
    prev = v;
  }
}
