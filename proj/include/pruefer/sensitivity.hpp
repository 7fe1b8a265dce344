#pragma once

// z-derivative of the scaled angle theta(x0, z) = phi(x0, z) / z, by the
// integral representation
//
//   d theta/dz (x0) = 2 / (z^2 r^2(x0)) * int_0^x0 r^2 (q/z) (sin^2 phi - phi sin phi cos phi) dt
//
// and by central differences, plus the reversal function
// Psi(z) = theta(x0, z) + theta~(1 - x0, z) with z_n Psi(z_n) = n pi.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string_view>
#include <utility>
#include <vector>

#include "pruefer/errors.hpp"
#include "pruefer/potential.hpp"
#include "pruefer/prufer.hpp"
#include "pruefer/quadrature.hpp"
#include "pruefer/spectrum.hpp"

namespace pruefer {

struct ThetaDotResult {
  double z = 0.0;
  double x0 = 0.0;
  double value_integral = 0.0;
  double value_fd = 0.0;
  double discrepancy = 0.0;  ///< |value_integral - value_fd|
};

/// The integral formula evaluated on an existing trajectory at x0 <= x_end.
inline double theta_dot_integral(const PruferTrajectory& t, double x0) {
  if (!(x0 > 0.0)) return 0.0;
  const double z = t.z();
  const double log_r_x0 = t.log_r(x0);
  const Potential& p = t.potential();
  const auto integrand = [&](double x) {
    const PruferState s = t.at(x);
    const double sp = std::sin(s.phi);
    const double cp = std::cos(s.phi);
    const double ratio = std::exp(2.0 * (s.log_r - log_r_x0));  // r^2(x) / r^2(x0)
    return ratio * p.q(x) / z * (sp * sp - s.phi * sp * cp);
  };
  const std::vector<double> pts = breakpoints(t, 0.0, x0);
  return 2.0 / (z * z) * quad::integrate_pieces(integrand, pts);
}

inline double theta_dot_integral(const Potential& p, double z, double x0,
                                 const IntegratorConfig& cfg = {}) {
  if (!(x0 >= 0.0 && x0 <= 1.0)) throw DomainError("theta_dot_integral: x0 must lie in [0,1]");
  if (!(z > 0.0)) throw DomainError("theta_dot_integral: z must be positive");
  if (x0 == 0.0) return 0.0;
  return theta_dot_integral(integrate(p, z, x0, cfg), x0);
}

/// theta(x0, z) by shooting.
inline double theta_at(const Potential& p, double z, double x0, const IntegratorConfig& cfg = {}) {
  if (x0 == 0.0) return 0.0;
  return shoot(p, z, x0, cfg).phi / z;
}

/// Default central-difference step.
inline double default_fd_step(double z) { return 1e-4 * std::max(1.0, z); }

/// (theta(x0, z+h) - theta(x0, z-h)) / (2h).
inline double theta_dot_fd(const Potential& p, double z, double x0, double h,
                           const IntegratorConfig& cfg = tight_integrator()) {
  if (!(h > 0.0) || !(z - h > 0.0)) throw DomainError("theta_dot_fd: need 0 < h < z");
  if (!(x0 >= 0.0 && x0 <= 1.0)) throw DomainError("theta_dot_fd: x0 must lie in [0,1]");
  return (theta_at(p, z + h, x0, cfg) - theta_at(p, z - h, x0, cfg)) / (2.0 * h);
}

inline ThetaDotResult theta_dot(const Potential& p, double z, double x0,
                                const IntegratorConfig& cfg = {}) {
  ThetaDotResult r;
  r.z = z;
  r.x0 = x0;
  r.value_integral = theta_dot_integral(p, z, x0, cfg);
  r.value_fd = theta_dot_fd(p, z, x0, default_fd_step(z));
  r.discrepancy = std::abs(r.value_integral - r.value_fd);
  return r;
}

// ---------------------------------------------------------------------------
// Monotonicity scan
// ---------------------------------------------------------------------------

/// Which admissibility conditions a scan is judged against.
enum class HypothesisSet {
  two_sided,      ///< |q'| <= (2/15) min{q(0), q(1)} on [0,1], single barrier
  increasing_side ///< q nondecreasing with q' <= (2/15) q(0) on [0, x0]
};

inline std::string_view hypothesis_set_name(HypothesisSet h) {
  return h == HypothesisSet::two_sided ? "two_sided" : "increasing_side";
}

struct MonotonicityScan {
  double x0 = 0.0;
  double threshold_z = 0.0;  ///< sqrt(11 q(x0))
  std::vector<double> z_grid;
  std::vector<double> theta_dot_values;
  std::vector<double> theta_dot_fd;
  std::vector<double> discrepancy;
  double min_value = 0.0;
  double argmin_z = 0.0;
  std::vector<std::pair<double, double>> violations;  ///< (z, value) with value < -tolerance
  HypothesisSet hypothesis_set = HypothesisSet::two_sided;
  bool hypotheses_hold = false;
};

struct ScanOptions {
  double tolerance = 1e-9;
  bool with_fd = true;
  HypothesisSet hypothesis_set = HypothesisSet::two_sided;
  IntegratorConfig integrator{};
};

/// theta_dot(x0, .) on a uniform grid over [sqrt(11 q(x0)), z_max]. For q(x0) = 0
/// the grid starts at z_max / grid_n instead of 0.
inline MonotonicityScan monotonicity_scan(const Potential& p, double x0, double z_max,
                                          std::size_t grid_n, const ScanOptions& opts = {}) {
  if (grid_n < 2) throw InputError("monotonicity_scan: grid_n must be at least 2");
  MonotonicityScan s;
  s.x0 = x0;
  s.hypothesis_set = opts.hypothesis_set;
  s.threshold_z = std::sqrt(11.0 * std::max(p.q(x0), 0.0));
  if (!(z_max > s.threshold_z)) {
    throw PreconditionError("monotonicity_scan: z_max must exceed sqrt(11 q(x0))");
  }
  s.hypotheses_hold = opts.hypothesis_set == HypothesisSet::two_sided
                          ? check_hypotheses(p).all_hold()
                          : check_increasing_side(p, x0).all_hold();

  const double z_start = s.threshold_z > 0.0 ? s.threshold_z : z_max / static_cast<double>(grid_n);
  s.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid_n; ++k) {
    const double z = z_start + (z_max - z_start) * static_cast<double>(k) /
                                   static_cast<double>(grid_n - 1);
    const double v = theta_dot_integral(p, z, x0, opts.integrator);
    s.z_grid.push_back(z);
    s.theta_dot_values.push_back(v);
    if (opts.with_fd) {
      const double fd = theta_dot_fd(p, z, x0, default_fd_step(z));
      s.theta_dot_fd.push_back(fd);
      s.discrepancy.push_back(std::abs(v - fd));
    }
    if (v < s.min_value) {
      s.min_value = v;
      s.argmin_z = z;
    }
    if (v < -opts.tolerance) s.violations.emplace_back(z, v);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Reversal function
// ---------------------------------------------------------------------------

/// Psi(z) = theta(x0, z) on q plus theta~(1 - x0, z) on the reversed potential.
inline double psi(const Potential& p, const Potential& reversed, double z, double x0,
                  const IntegratorConfig& cfg = {}) {
  if (!(z > 0.0)) throw DomainError("psi: z must be positive");
  if (!(x0 >= 0.0 && x0 <= 1.0)) throw DomainError("psi: x0 must lie in [0,1]");
  return theta_at(p, z, x0, cfg) + theta_at(reversed, z, 1.0 - x0, cfg);
}

inline double psi(const Potential& p, double z, double x0, const IntegratorConfig& cfg = {}) {
  return psi(p, reverse(p), z, x0, cfg);
}

/// psi at the classified transition point.
inline double psi(const Potential& p, double z, const IntegratorConfig& cfg = {}) {
  return psi(p, z, classify(p).x0, cfg);
}

struct PsiResidual {
  int n = 0;
  double z = 0.0;
  double residual = 0.0;  ///< |z_n Psi(z_n) - n pi|
};

inline std::vector<PsiResidual> psi_identity_check(const Potential& p,
                                                   const std::vector<Eigenvalue>& eigs,
                                                   double x0, const IntegratorConfig& cfg = {}) {
  const Potential rev = reverse(p);
  std::vector<PsiResidual> out;
  out.reserve(eigs.size());
  for (const Eigenvalue& e : eigs) {
    const double value = e.z * psi(p, rev, e.z, x0, cfg);
    out.push_back({e.n, e.z, std::abs(value - e.n * kPi)});
  }
  return out;
}

inline std::vector<PsiResidual> psi_identity_check(const Potential& p, int n_max,
                                                   const SpectrumConfig& base = {}) {
  SpectrumConfig cfg = base;
  cfg.n_max = n_max;
  return psi_identity_check(p, spectrum(p, cfg), classify(p).x0, cfg.integrator);
}

}  // namespace pruefer
