#pragma once

// Independent eigenvalue oracle: second-order finite differences on a
// uniform interior grid, eigenvalues of the tridiagonal matrix by
// Sturm-count bisection.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "pruefer/errors.hpp"
#include "pruefer/potential.hpp"

namespace pruefer {

struct FdConfig {
  std::size_t grid_n = 4096;  ///< interior points; h = 1 / (grid_n + 1)
  bool richardson = true;     ///< combine grid_n / 2 and grid_n

  void validate() const {
    if (grid_n < 64) throw InputError("FdConfig: grid_n must be at least 64");
    if (richardson && grid_n / 2 < 64) throw InputError("FdConfig: grid_n/2 must be at least 64 with richardson");
  }
};

struct FdEigenvalue {
  int n = 0;
  double lambda = 0.0;
};

/// Number of eigenvalues strictly below mu of the symmetric tridiagonal matrix
/// with the given diagonal and constant squared off-diagonal, by the LDL^T
/// pivot recurrence d_k = (a_k - mu) - e^2 / d_{k-1} (negative pivots counted).
inline std::size_t sturm_count(const std::vector<double>& diag, double offdiag_sq, double mu) {
  constexpr double tiny = 1e-300;
  std::size_t count = 0;
  double d = 1.0;
  for (std::size_t k = 0; k < diag.size(); ++k) {
    d = (diag[k] - mu) - (k == 0 ? 0.0 : offdiag_sq / d);
    if (d == 0.0) d = -tiny;
    if (d < 0.0) ++count;
  }
  return count;
}

namespace detail {

inline std::vector<double> fd_diagonal(const Potential& p, std::size_t grid_n) {
  const double h = 1.0 / static_cast<double>(grid_n + 1);
  std::vector<double> diag(grid_n);
  for (std::size_t j = 0; j < grid_n; ++j) {
    diag[j] = 2.0 / (h * h) + p.q(static_cast<double>(j + 1) * h);
  }
  return diag;
}

/// The n_max smallest eigenvalues on one grid, each by bisection to relative 1e-12.
inline std::vector<double> fd_eigenvalues(const Potential& p, std::size_t grid_n, int n_max) {
  const double h = 1.0 / static_cast<double>(grid_n + 1);
  const double off_sq = 1.0 / (h * h * h * h);
  const std::vector<double> diag = fd_diagonal(p, grid_n);
  // Gershgorin interval.
  const auto [mn, mx] = std::minmax_element(diag.begin(), diag.end());
  const double g_lo = *mn - 2.0 / (h * h);
  const double g_hi = *mx + 2.0 / (h * h);

  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_max));
  double lower = g_lo;
  for (int n = 1; n <= n_max; ++n) {
    // Smallest mu with count(mu) >= n lies in (lower, g_hi].
    double lo = lower;
    double hi = g_hi;
    while (hi - lo > 1e-12 * std::max(std::abs(lo), std::abs(hi))) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (sturm_count(diag, off_sq, mid) >= static_cast<std::size_t>(n)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    const double lambda = 0.5 * (lo + hi);
    out.push_back(lambda);
    lower = lo;
  }
  return out;
}

}  // namespace detail

/// lambda_1 .. lambda_{n_max} of the discretized problem. With richardson on,
/// grids N/2 and N are combined with weights from their actual step sizes,
/// (h1^2 lambda_2 - h2^2 lambda_1) / (h1^2 - h2^2), which is (4 lambda_{2N} - lambda_N)/3
/// when the step halves exactly.
inline std::vector<FdEigenvalue> fd_spectrum(const Potential& p, const FdConfig& cfg, int n_max) {
  cfg.validate();
  if (n_max < 1) throw InputError("fd_spectrum: n_max must be at least 1");
  if (static_cast<std::size_t>(n_max) > cfg.grid_n / 4) {
    throw PreconditionError("fd_spectrum: n_max must not exceed grid_n/4");
  }
  const std::vector<double> fine = detail::fd_eigenvalues(p, cfg.grid_n, n_max);
  std::vector<FdEigenvalue> out;
  out.reserve(fine.size());
  if (!cfg.richardson) {
    for (int n = 1; n <= n_max; ++n) out.push_back({n, fine[static_cast<std::size_t>(n - 1)]});
    return out;
  }
  const std::size_t coarse_n = cfg.grid_n / 2;
  const std::vector<double> coarse = detail::fd_eigenvalues(p, coarse_n, n_max);
  const double h1 = 1.0 / static_cast<double>(coarse_n + 1);
  const double h2 = 1.0 / static_cast<double>(cfg.grid_n + 1);
  const double w1 = h1 * h1;
  const double w2 = h2 * h2;
  for (int n = 1; n <= n_max; ++n) {
    const std::size_t k = static_cast<std::size_t>(n - 1);
    out.push_back({n, (w1 * fine[k] - w2 * coarse[k]) / (w1 - w2)});
  }
  return out;
}

}  // namespace pruefer
