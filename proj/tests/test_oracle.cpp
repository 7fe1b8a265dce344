#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "pruefer/oracle.hpp"
#include "pruefer/spectrum.hpp"

using namespace pruefer;

namespace {

double discrete_zero(std::size_t grid_n, int k) {
  const double h = 1.0 / static_cast<double>(grid_n + 1);
  return 2.0 / (h * h) * (1.0 - std::cos(k * kPi * h));
}

}  // namespace

TEST(SturmCount, OneByOne) {
  EXPECT_EQ(sturm_count({2.0}, 1.0, 3.0), 1u);
  EXPECT_EQ(sturm_count({2.0}, 1.0, 1.0), 0u);
}

TEST(SturmCount, ZeroPotentialClosedForm) {
  const std::size_t n = 100;
  const double h = 1.0 / (n + 1);
  const std::vector<double> diag(n, 2.0 / (h * h));
  const double off_sq = 1.0 / (h * h * h * h);
  const double mu = 0.5 * (discrete_zero(n, 3) + discrete_zero(n, 4));
  EXPECT_EQ(sturm_count(diag, off_sq, mu), 3u);
  EXPECT_EQ(sturm_count(diag, off_sq, 2.0 / (h * h) - 2.0 / (h * h) - 1.0), 0u);
  EXPECT_EQ(sturm_count(diag, off_sq, 5.0 / (h * h)), n);
}

TEST(FdSpectrum, ZeroPotential) {
  const Potential p(ConstantPotential{0.0});
  FdConfig plain{4096, false};
  const auto fd = fd_spectrum(p, plain, 3);
  const double h = 1.0 / 4097.0;
  // Pivot rounding limits the absolute accuracy to a few ulps of the matrix norm 4/h^2.
  const double floor = 16 * std::numeric_limits<double>::epsilon() * 4.0 / (h * h);
  for (int k = 1; k <= 3; ++k) {
    EXPECT_NEAR(fd[k - 1].lambda, discrete_zero(4096, k), floor);
  }
  EXPECT_LE(std::abs(fd[0].lambda - kPi * kPi), std::pow(kPi, 4) * h * h / 12 * 1.01);
  const auto rich = fd_spectrum(p, FdConfig{}, 1);
  EXPECT_NEAR(rich[0].lambda, kPi * kPi, 1e-8);
}

TEST(FdSpectrum, ShiftEquivariance) {
  const FdConfig cfg{512, false};
  const auto a = fd_spectrum(Potential(ConstantPotential{0.0}), cfg, 5);
  const auto b = fd_spectrum(Potential(ConstantPotential{5.0}), cfg, 5);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(b[k].lambda - a[k].lambda, 5.0, 1e-8);
}

TEST(FdSpectrum, SecondOrderConvergence) {
  for (const Potential& p : {Potential(ConstantPotential{0.0}), Potential(SineBump{0.8, 0.03})}) {
    SpectrumConfig sc;
    sc.n_max = 5;
    const auto exact = spectrum(p, sc);
    // h = 1/(N+1) halves exactly for N = 255 -> 511.
    const auto coarse = fd_spectrum(p, FdConfig{255, false}, 5);
    const auto fine = fd_spectrum(p, FdConfig{511, false}, 5);
    for (std::size_t k = 0; k < 5; ++k) {
      const double ratio = (coarse[k].lambda - exact[k].lambda) / (fine[k].lambda - exact[k].lambda);
      EXPECT_NEAR(ratio, 4.0, 0.05) << k + 1;
    }
  }
}

TEST(FdSpectrum, CountConsistency) {
  const Potential p(SineBump{0.8, 0.03});
  const FdConfig cfg{256, false};
  const auto eigs = fd_spectrum(p, cfg, 8);
  const double h = 1.0 / 257.0;
  std::vector<double> diag(256);
  for (std::size_t j = 0; j < diag.size(); ++j) diag[j] = 2.0 / (h * h) + p.q((j + 1) * h);
  for (std::size_t k = 0; k + 1 < eigs.size(); ++k) {
    const double mid = 0.5 * (eigs[k].lambda + eigs[k + 1].lambda);
    EXPECT_EQ(sturm_count(diag, 1.0 / (h * h * h * h), mid), k + 1);
  }
}

TEST(FdSpectrum, Preconditions) {
  const Potential p(ConstantPotential{0.0});
  EXPECT_THROW(fd_spectrum(p, FdConfig{32, false}, 1), InputError);
  EXPECT_THROW(fd_spectrum(p, FdConfig{256, false}, 65), PreconditionError);
  EXPECT_NO_THROW(fd_spectrum(p, FdConfig{256, false}, 64));
}
