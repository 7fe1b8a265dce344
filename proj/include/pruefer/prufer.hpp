#pragma once

// Modified Pruefer transformation for -y'' + q y = z^2 y, y(0) = 0, y'(0) = 1:
//
//   y  = r sin(phi),   y' = z r cos(phi),
//   phi'       = z - (q/z) sin^2(phi),
//   (log r)'   = (q/z) sin(phi) cos(phi).
//
// Both equations are integrated together with an adaptive Dormand-Prince
// 5(4) pair. log r is stored relative to r(0) = 1/z, so log_r(0) = 0.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pruefer/errors.hpp"
#include "pruefer/potential.hpp"

namespace pruefer {

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 1e-2;
  std::size_t dense_output_n = 1025;

  void validate() const {
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw InputError("rel_tol must lie in (0,1)");
    if (!(abs_tol > 0.0 && abs_tol < 1.0)) throw InputError("abs_tol must lie in (0,1)");
    if (!(max_step > 0.0 && max_step <= 1.0)) throw InputError("max_step must lie in (0,1]");
  }

  /// Same step limits with both tolerances scaled by `factor`.
  IntegratorConfig scaled(double factor) const {
    IntegratorConfig c = *this;
    c.rel_tol *= factor;
    c.abs_tol *= factor;
    return c;
  }
};

/// Tight tolerances for oracles that difference trajectories.
inline IntegratorConfig tight_integrator() { return {1e-13, 1e-14, 1e-2, 1025}; }

struct PruferState {
  double x = 0.0;
  double phi = 0.0;
  double log_r = 0.0;
};

namespace detail {

using Vec2 = std::array<double, 2>;

// One accepted step with its continuous extension:
// y(x + s h) = c0 + s (c1 + (1-s) (c2 + s (c3 + (1-s) c4))).
struct DenseStep {
  double x = 0.0;
  double h = 0.0;
  std::array<Vec2, 5> c{};

  Vec2 eval(double xq) const noexcept {
    const double s = h > 0.0 ? (xq - x) / h : 0.0;
    const double s1 = 1.0 - s;
    Vec2 out;
    for (std::size_t i = 0; i < 2; ++i) {
      out[i] = c[0][i] + s * (c[1][i] + s1 * (c[2][i] + s * (c[3][i] + s1 * c[4][i])));
    }
    return out;
  }
  Vec2 end() const noexcept { return {c[0][0] + c[1][0], c[0][1] + c[1][1]}; }
};

struct PruferRhs {
  const Potential& p;
  double z;

  Vec2 operator()(double x, const Vec2& y) const noexcept {
    const double qz = p.q(x) / z;
    const double s = std::sin(y[0]);
    const double c = std::cos(y[0]);
    return {z - qz * s * s, qz * s * c};
  }
};

struct RunStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  double max_error_norm = 0.0;
};

// Dormand-Prince 5(4) with dense output (Hairer, Norsett & Wanner).
// `on_step(const DenseStep&)` is called for every accepted step.
template <class OnStep>
RunStats dopri5(const PruferRhs& f, double x_end, const IntegratorConfig& cfg, OnStep&& on_step) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                   a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                   d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                   d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

  RunStats stats;
  double x = 0.0;
  Vec2 y{0.0, 0.0};
  Vec2 k1 = f(x, y);
  double h = std::min(cfg.max_step, 0.05 / (1.0 + f.z));
  const double h_min = 1e-14;

  const auto comb = [&y](double hh, std::initializer_list<std::pair<double, const Vec2*>> terms) {
    Vec2 out = y;
    for (const auto& [w, k] : terms) {
      out[0] += hh * w * (*k)[0];
      out[1] += hh * w * (*k)[1];
    }
    return out;
  };

  while (x < x_end) {
    bool last = false;
    if (x + h >= x_end || x_end - (x + h) < 1e-12 * h) {
      h = x_end - x;
      last = true;
    }
    const Vec2 k2 = f(x + c2 * h, comb(h, {{a21, &k1}}));
    const Vec2 k3 = f(x + c3 * h, comb(h, {{a31, &k1}, {a32, &k2}}));
    const Vec2 k4 = f(x + c4 * h, comb(h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const Vec2 k5 = f(x + c5 * h, comb(h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const Vec2 k6 =
        f(x + h, comb(h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const Vec2 y_new =
        comb(h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
    const double x_new = last ? x_end : x + h;
    const Vec2 k7 = f(x_new, y_new);

    double err = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
      const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / 2.0);
    if (!std::isfinite(err)) throw IntegrationError("non-finite Pruefer state", x);

    if (err <= 1.0) {
      DenseStep step;
      step.x = x;
      step.h = x_new - x;
      for (std::size_t i = 0; i < 2; ++i) {
        const double ydiff = y_new[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        step.c[0][i] = y[i];
        step.c[1][i] = ydiff;
        step.c[2][i] = bspl;
        step.c[3][i] = ydiff - h * k7[i] - bspl;
        step.c[4][i] =
            h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      on_step(static_cast<const DenseStep&>(step));
      ++stats.steps;
      stats.max_error_norm = std::max(stats.max_error_norm, err);
      x = x_new;
      y = y_new;
      k1 = k7;
      if (last) break;
    } else {
      ++stats.rejected;
    }
    const double fac = err == 0.0 ? 10.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 10.0);
    h = std::min(cfg.max_step, h * (err <= 1.0 ? fac : std::min(fac, 1.0)));
    if (h < h_min) throw IntegrationError("step size underflow", x);
  }
  return stats;
}

inline void check_shooting_args(double z, double x_end) {
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("spectral parameter z must be positive");
  if (!(x_end > 0.0 && x_end <= 1.0)) throw DomainError("x_end must lie in (0,1]");
}

}  // namespace detail

/// Angle and log-radius at x_end without storing the path.
inline PruferState shoot(const Potential& p, double z, double x_end, const IntegratorConfig& cfg = {}) {
  detail::check_shooting_args(z, x_end);
  cfg.validate();
  detail::Vec2 last{0.0, 0.0};
  detail::dopri5(detail::PruferRhs{p, z}, x_end, cfg,
                 [&last](const detail::DenseStep& s) { last = s.end(); });
  return {x_end, last[0], last[1]};
}

/// A sampled Pruefer path for fixed z with dense interpolation.
class PruferTrajectory {
 public:
  struct Stats {
    std::size_t steps = 0;
    std::size_t rejected = 0;
    double max_residual = 0.0;  ///< largest accepted normalized local error estimate
  };

  double z() const noexcept { return z_; }
  double x_end() const noexcept { return x_end_; }
  const Potential& potential() const noexcept { return potential_; }
  const Stats& integrator_stats() const noexcept { return stats_; }
  const IntegratorConfig& config() const noexcept { return cfg_; }

  /// Uniform dense-output points merged with every accepted step end.
  const std::vector<PruferState>& samples() const noexcept { return samples_; }
  std::span<const detail::DenseStep> steps() const noexcept { return steps_; }

  PruferState at(double x) const {
    const detail::Vec2 v = step_for(x).eval(std::clamp(x, 0.0, x_end_));
    return {x, v[0], v[1]};
  }
  double phi(double x) const { return at(x).phi; }
  double log_r(double x) const { return at(x).log_r; }

  /// theta = phi / z.
  double theta(double x) const { return phi(x) / z_; }

  /// phi' from the ODE at the interpolated state.
  double phi_prime(double x) const {
    const double s = std::sin(phi(x));
    return z_ - potential_.q(x) / z_ * s * s;
  }

  /// y(x) for the initial data y(0) = 0, y'(0) = 1.
  double y(double x) const {
    const PruferState s = at(x);
    return std::exp(s.log_r) * std::sin(s.phi) / z_;
  }
  double dy(double x) const {
    const PruferState s = at(x);
    return std::exp(s.log_r) * std::cos(s.phi);
  }

  /// Smallest x with phi(x) = target, for a path whose angle increases
  /// strictly up to that point.
  double phi_inverse(double target) const {
    if (!(target >= 0.0)) throw DomainError("phi_inverse: target must be nonnegative");
    if (target == 0.0) return 0.0;
    double prev = 0.0;
    for (const detail::DenseStep& s : steps_) {
      const double end = s.end()[0];
      if (!(end > prev)) {
        throw PreconditionError("phi_inverse: angle is not increasing near x = " +
                                std::to_string(s.x));
      }
      if (end >= target) return solve_in_step(s, target);
      prev = end;
    }
    throw DomainError("phi_inverse: target " + std::to_string(target) +
                      " exceeds phi(x_end) = " + std::to_string(prev));
  }

  /// phi_inverse by binary search over the steps starting before `x_limit`. The
  /// caller must already know the angle increases on [0, x_limit] (e.g. from a
  /// phi_inverse call that returned x_limit).
  double phi_inverse_increasing(double target, double x_limit) const {
    if (target <= 0.0) return 0.0;
    auto last = std::upper_bound(steps_.begin(), steps_.end(), x_limit,
                                 [](double v, const detail::DenseStep& s) { return v <= s.x; });
    auto it = std::lower_bound(steps_.begin(), last, target,
                               [](const detail::DenseStep& s, double v) { return s.end()[0] < v; });
    if (it == last) {
      if (it == steps_.begin()) throw DomainError("phi_inverse: empty search range");
      --it;
    }
    return solve_in_step(*it, target);
  }

 private:
  friend PruferTrajectory integrate(const Potential&, double, double, const IntegratorConfig&);

  PruferTrajectory(Potential p, double z, double x_end, IntegratorConfig cfg)
      : potential_(std::move(p)), z_(z), x_end_(x_end), cfg_(cfg) {}

  const detail::DenseStep& step_for(double x) const {
    const double slack = 1e-12;
    if (!(x >= -slack && x <= x_end_ + slack)) {
      throw DomainError("trajectory evaluated outside [0, " + std::to_string(x_end_) +
                        "] at x = " + std::to_string(x));
    }
    auto it = std::upper_bound(steps_.begin(), steps_.end(), x,
                               [](double v, const detail::DenseStep& s) { return v < s.x; });
    if (it != steps_.begin()) --it;
    return *it;
  }

  double solve_in_step(const detail::DenseStep& s, double target) const {
    double lo = s.x;
    double hi = s.x + s.h;
    double x = lo + (hi - lo) * std::clamp((target - s.c[0][0]) / (s.end()[0] - s.c[0][0]), 0.0, 1.0);
    for (int it = 0; it < 100; ++it) {
      const double f = s.eval(x)[0] - target;
      if (f == 0.0) return x;
      if (f > 0.0) {
        hi = x;
      } else {
        lo = x;
      }
      const double sp = std::sin(s.eval(x)[0]);
      const double slope = z_ - potential_.q(x) / z_ * sp * sp;
      double next = x - f / slope;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - x) <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, x) ||
          hi - lo <= 4 * std::numeric_limits<double>::epsilon()) {
        return next;
      }
      x = next;
    }
    return x;
  }

  Potential potential_;
  double z_;
  double x_end_;
  IntegratorConfig cfg_;
  std::vector<detail::DenseStep> steps_;
  std::vector<PruferState> samples_;
  Stats stats_;
};

/// Integrates the angle/radius system on [0, x_end] and keeps dense output.
inline PruferTrajectory integrate(const Potential& p, double z, double x_end,
                                  const IntegratorConfig& cfg = {}) {
  detail::check_shooting_args(z, x_end);
  cfg.validate();
  PruferTrajectory traj(p, z, x_end, cfg);
  const detail::RunStats rs =
      detail::dopri5(detail::PruferRhs{traj.potential_, z}, x_end, cfg,
                     [&traj](const detail::DenseStep& s) { traj.steps_.push_back(s); });
  traj.stats_ = {rs.steps, rs.rejected, rs.max_error_norm};

  // Uniform points plus step boundaries, merged in increasing x.
  std::vector<double> xs;
  const std::size_t n = std::max<std::size_t>(cfg.dense_output_n, 2);
  xs.reserve(n + traj.steps_.size() + 1);
  for (std::size_t i = 0; i < n; ++i) {
    xs.push_back(x_end * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  for (const auto& s : traj.steps_) xs.push_back(s.x + s.h);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  traj.samples_.reserve(xs.size());
  traj.samples_.push_back({0.0, 0.0, 0.0});
  for (double x : xs) {
    if (x <= 0.0) continue;
    traj.samples_.push_back(traj.at(x));
  }
  return traj;
}

/// Dense-output abscissae the quadratures split at (step boundaries within [a, b]).
inline std::vector<double> breakpoints(const PruferTrajectory& t, double a, double b) {
  std::vector<double> pts{a};
  for (const auto& s : t.steps()) {
    const double e = s.x + s.h;
    if (e > a && e < b) pts.push_back(e);
  }
  pts.push_back(b);
  return pts;
}

}  // namespace pruefer
