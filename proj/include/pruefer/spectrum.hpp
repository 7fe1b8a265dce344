#pragma once

// Dirichlet eigenvalues by oscillation counting: the number of eigenvalues
// below z^2 is floor(phi(1,z)/pi), and z_n solves phi(1,z) = n pi.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pruefer/errors.hpp"
#include "pruefer/potential.hpp"
#include "pruefer/prufer.hpp"

namespace pruefer {

struct Eigenvalue {
  int n = 0;
  double z = 0.0;
  double lambda = 0.0;    ///< z^2
  double residual = 0.0;  ///< |phi(1, z) - n pi|
};

struct SpectrumConfig {
  int n_max = 12;
  double root_tol = 1e-12;  ///< refinement stops at |dz| <= root_tol (1 + z)
  double bracket_growth = 1.1;
  IntegratorConfig integrator{};

  void validate() const {
    if (n_max < 1) throw InputError("n_max must be at least 1");
    if (!(root_tol > 0.0 && root_tol <= 1e-4)) throw InputError("root_tol must lie in (0, 1e-4]");
    if (!(bracket_growth > 1.0)) throw InputError("bracket_growth must exceed 1");
    integrator.validate();
  }
};

/// Angles within this distance of a multiple of pi count as "at an eigenvalue".
inline constexpr double kCountTieTolerance = 1e-9;

struct EigenCount {
  std::size_t count = 0;
  bool at_eigenvalue = false;
};

inline EigenCount count_from_angle(double phi_end) {
  EigenCount c;
  c.count = static_cast<std::size_t>(std::max(0.0, std::floor((phi_end + kCountTieTolerance) / kPi)));
  c.at_eigenvalue = std::abs(phi_end - kPi * std::round(phi_end / kPi)) <= kCountTieTolerance;
  return c;
}

/// Number of Dirichlet eigenvalues strictly below z^2 (ties resolved upward and flagged).
inline EigenCount count_eigenvalues_below(const Potential& p, double z,
                                          const IntegratorConfig& cfg = {}) {
  return count_from_angle(shoot(p, z, 1.0, cfg).phi);
}

namespace detail {

struct ValueRange {
  double lo = 0.0;
  double hi = 0.0;
};

inline ValueRange value_range(const Potential& p) {
  ValueRange r{p.q(0.0), p.q(0.0)};
  for (std::size_t i = 0; i < p.eval_grid_n(); ++i) {
    const double v = p.q(p.grid_point(i));
    r.lo = std::min(r.lo, v);
    r.hi = std::max(r.hi, v);
  }
  return r;
}

inline Eigenvalue solve_eigenvalue(const Potential& p, int n, const SpectrumConfig& cfg,
                                   const ValueRange& range) {
  const double target = n * kPi;
  const double z_cap = (cfg.n_max + 2 + n) * kPi + std::sqrt(std::max(range.hi, 0.0)) + 10.0;
  const auto mismatch = [&](double z) { return shoot(p, z, 1.0, cfg.integrator).phi - target; };

  // Bracket [lo, hi] with f(lo) < 0 <= f(hi); f changes sign exactly once, at z_n.
  double lo = std::max(0.9 * std::sqrt(std::max(range.lo, 0.0) + target * target), 1e-3);
  double f_lo = mismatch(lo);
  while (f_lo >= 0.0) {
    lo /= cfg.bracket_growth;
    if (lo < 1e-8) throw SolverError("eigenvalue " + std::to_string(n) + ": no lower bracket");
    f_lo = mismatch(lo);
  }
  double hi = lo * cfg.bracket_growth;
  double f_hi = mismatch(hi);
  while (f_hi < 0.0) {
    lo = hi;
    f_lo = f_hi;
    hi *= cfg.bracket_growth;
    if (hi > z_cap) {
      throw SolverError("eigenvalue " + std::to_string(n) + ": no bracket below z = " +
                        std::to_string(z_cap));
    }
    f_hi = mismatch(hi);
  }

  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = mismatch(mid);
    if (f_mid < 0.0) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }

  // Sign-preserving secant (Illinois variant of regula falsi).
  double z = f_hi == 0.0 ? hi : lo;
  double f_z = f_hi == 0.0 ? 0.0 : f_lo;
  int stale_side = 0;
  for (int it = 0; it < 100 && f_z != 0.0; ++it) {
    double next = hi - f_hi * (hi - lo) / (f_hi - f_lo);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double f_next = mismatch(next);
    const double step = std::abs(next - z);
    z = next;
    f_z = f_next;
    if (f_next < 0.0) {
      lo = next;
      f_lo = f_next;
      if (stale_side == -1) f_hi *= 0.5;
      stale_side = -1;
    } else {
      hi = next;
      f_hi = f_next;
      if (stale_side == 1) f_lo *= 0.5;
      stale_side = 1;
    }
    if (step <= cfg.root_tol * (1.0 + z) || hi - lo <= cfg.root_tol * (1.0 + z)) break;
  }

  // Interlacing: n-1 eigenvalues below the lower end of the final bracket.
  if (std::floor((f_lo + target) / kPi) != static_cast<double>(n - 1)) {
    throw SolverError("eigenvalue " + std::to_string(n) + ": counting check failed");
  }
  return {n, z, z * z, std::abs(f_z)};
}

}  // namespace detail

inline Eigenvalue eigenvalue(const Potential& p, int n, const SpectrumConfig& cfg = {}) {
  if (n < 1) throw InputError("eigenvalue index must be at least 1");
  cfg.validate();
  return detail::solve_eigenvalue(p, n, cfg, detail::value_range(p));
}

/// lambda_1 < ... < lambda_{n_max}.
inline std::vector<Eigenvalue> spectrum(const Potential& p, const SpectrumConfig& cfg = {}) {
  cfg.validate();
  const detail::ValueRange range = detail::value_range(p);
  std::vector<Eigenvalue> out;
  out.reserve(static_cast<std::size_t>(cfg.n_max));
  for (int n = 1; n <= cfg.n_max; ++n) {
    out.push_back(detail::solve_eigenvalue(p, n, cfg, range));
    if (n > 1 && !(out[n - 1].lambda > out[n - 2].lambda)) {
      throw SolverError("spectrum is not strictly increasing at n = " + std::to_string(n));
    }
  }
  return out;
}

/// Checks that `eigs` is indexed 1..N and strictly increasing.
inline void require_ordered(const std::vector<Eigenvalue>& eigs) {
  for (std::size_t k = 0; k < eigs.size(); ++k) {
    if (eigs[k].n != static_cast<int>(k + 1)) {
      throw InputError("eigenvalue list must be indexed 1..N without gaps");
    }
    if (k > 0 && !(eigs[k].lambda > eigs[k - 1].lambda)) {
      throw InputError("eigenvalue list must be strictly increasing");
    }
  }
}

}  // namespace pruefer
