#include <cmath>

#include <gtest/gtest.h>

#include "pruefer/spectrum.hpp"

using namespace pruefer;

namespace {

// Richardson-extrapolated finite-difference eigenvalues of sine_bump(0.8, 0.03)
// (grids 2048/4096), produced by the oracle module.
constexpr double kBumpOracle[] = {
    10.695068861672823, 40.298789152027041, 89.646083964341784, 158.73307224869532,
    247.55940159812116, 356.12499063835452, 484.42981222358895, 632.47385518101657,
    800.25711421187521, 987.77958655527732,
};

}  // namespace

TEST(Count, ZeroPotential) {
  const Potential p(ConstantPotential{0.0});
  EXPECT_EQ(count_eigenvalues_below(p, 3.5 * kPi).count, 3u);
  EXPECT_FALSE(count_eigenvalues_below(p, 3.5 * kPi).at_eigenvalue);
  const EigenCount at = count_eigenvalues_below(p, kPi);
  EXPECT_EQ(at.count, 1u);
  EXPECT_TRUE(at.at_eigenvalue);
}

TEST(Count, ConstantShift) {
  const Potential p(ConstantPotential{5.0});
  const EigenCount c = count_eigenvalues_below(p, std::sqrt(kPi * kPi + 5.0));
  EXPECT_EQ(c.count, 1u);
  EXPECT_TRUE(c.at_eigenvalue);
  EXPECT_EQ(count_eigenvalues_below(p, 1.0).count, 0u);
}

TEST(Eigenvalue, ZeroPotential) {
  const Eigenvalue e = eigenvalue(Potential(ConstantPotential{0.0}), 7);
  EXPECT_EQ(e.n, 7);
  EXPECT_NEAR(e.z, 7 * kPi, 1e-10);
  EXPECT_NEAR(e.lambda / (49 * kPi * kPi), 1.0, 1e-12);
  EXPECT_EQ(e.lambda, e.z * e.z);
  EXPECT_LE(e.residual, 1e-9);
}

TEST(Eigenvalue, ConstantShiftIdentity) {
  const Eigenvalue e = eigenvalue(Potential(ConstantPotential{5.0}), 3);
  EXPECT_NEAR(e.lambda / (9 * kPi * kPi + 5.0), 1.0, 1e-9);
}

TEST(Eigenvalue, BumpGroundStateBracketAndOracle) {
  const Eigenvalue e = eigenvalue(Potential(SineBump{0.8, 0.03}), 1);
  EXPECT_GE(e.lambda, kPi * kPi + 0.8);
  EXPECT_LE(e.lambda, kPi * kPi + 0.83);
  EXPECT_NEAR(e.lambda / kBumpOracle[0], 1.0, 1e-5);
}

TEST(Eigenvalue, InvalidIndex) {
  EXPECT_THROW(eigenvalue(Potential(ConstantPotential{0.0}), 0), InputError);
}

TEST(Spectrum, ZeroAndShifted) {
  SpectrumConfig cfg;
  cfg.n_max = 5;
  const auto zero = spectrum(Potential(ConstantPotential{0.0}), cfg);
  const auto shifted = spectrum(Potential(ConstantPotential{2.5}), cfg);
  ASSERT_EQ(zero.size(), 5u);
  for (int n = 1; n <= 5; ++n) {
    EXPECT_EQ(zero[n - 1].n, n);
    EXPECT_NEAR(zero[n - 1].lambda / (n * n * kPi * kPi), 1.0, 1e-12);
    EXPECT_NEAR(shifted[n - 1].lambda / (n * n * kPi * kPi + 2.5), 1.0, 1e-11);
  }
}

TEST(Spectrum, BumpMatchesOracle) {
  SpectrumConfig cfg;
  cfg.n_max = 10;
  const auto eigs = spectrum(Potential(SineBump{0.8, 0.03}), cfg);
  for (std::size_t k = 0; k < eigs.size(); ++k) {
    EXPECT_NEAR(eigs[k].lambda / kBumpOracle[k], 1.0, 1e-5) << k + 1;
  }
}

TEST(Spectrum, InterlacingAndWeylBounds) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Potential p(sample_admissible(seed));
    const ShapeReport s = classify(p);
    SpectrumConfig cfg;
    cfg.n_max = 8;
    const auto eigs = spectrum(p, cfg);
    EXPECT_GE(eigs[0].z, std::sqrt(kPi * kPi + s.qmin) - 1e-12);
    for (const Eigenvalue& e : eigs) {
      const double n2 = e.n * e.n * kPi * kPi;
      EXPECT_GE(e.lambda, n2 + s.qmin - 1e-9);
      EXPECT_LE(e.lambda, n2 + s.q_sup + 1e-9);
      EXPECT_EQ(count_eigenvalues_below(p, e.z * (1 - 1e-7)).count, static_cast<std::size_t>(e.n - 1));
      EXPECT_EQ(count_eigenvalues_below(p, e.z * (1 + 1e-7)).count, static_cast<std::size_t>(e.n));
    }
  }
}

TEST(Spectrum, ReversalInvariant) {
  const Potential p(sample_admissible(11));
  SpectrumConfig cfg;
  cfg.n_max = 6;
  const auto a = spectrum(p, cfg);
  const auto b = spectrum(reverse(p), cfg);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_NEAR(a[k].z, b[k].z, 2 * cfg.root_tol * (1 + a[k].z));
  }
}

TEST(Spectrum, InvalidConfig) {
  SpectrumConfig cfg;
  cfg.n_max = 0;
  EXPECT_THROW(spectrum(Potential(ConstantPotential{0.0}), cfg), InputError);
  cfg = SpectrumConfig{};
  cfg.root_tol = 1e-3;
  EXPECT_THROW(spectrum(Potential(ConstantPotential{0.0}), cfg), InputError);
  cfg = SpectrumConfig{};
  cfg.bracket_growth = 1.0;
  EXPECT_THROW(spectrum(Potential(ConstantPotential{0.0}), cfg), InputError);
}

TEST(RequireOrdered, RejectsGapsAndDisorder) {
  std::vector<Eigenvalue> e{{1, 1.0, 1.0, 0.0}, {3, 2.0, 4.0, 0.0}};
  EXPECT_THROW(require_ordered(e), InputError);
  e = {{1, 2.0, 4.0, 0.0}, {2, 1.0, 1.0, 0.0}};
  EXPECT_THROW(require_ordered(e), InputError);
}
