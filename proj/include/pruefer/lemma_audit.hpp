#pragma once

// Numerical audits of the inequality chain behind the angle-monotonicity
// result. Every audit works on one angle block [a, b] = [phi^-1(i pi + pi/2),
// phi^-1(i pi + pi/2 + D)] inside [0, x0], at a fixed z with z^2 > q(x0).
//
// Integrals weighted by r^2 are reported divided by r^2(b); the audited
// inequalities are homogeneous in r^2, so margins keep their sign.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pruefer/errors.hpp"
#include "pruefer/potential.hpp"
#include "pruefer/prufer.hpp"
#include "pruefer/quadrature.hpp"
#include "pruefer/spectrum.hpp"

namespace pruefer {

inline constexpr double kAuditTol = 1e-10;

enum class LemmaId {
  L32,           ///< block integral with r^2 weight vs. its r^2(b)-scaled lower bound
  L33,           ///< change of variables t = phi - (i+1) pi (equality)
  L34i,          ///< two-sided bound on int (q/z) sin^2 phi
  L34ii,         ///< lower bound on the first t-integral
  L34iii,        ///< mean-value lower bound on the second t-integral (interval minimum)
  L35,           ///< lower bound on the nested integral (interval minimum)
  combined,      ///< full-block sum I1 - 2 I2 >= 0 (D = pi, z^2 >= 11 q(x0))
  oscillation,   ///< (i+1) pi / z_{i+1} <= 1
  scalarG,       ///< G(s) >= s/10 on [0, 1/11]
  scalarQuarter  ///< (log(1-s) - s)/(1-s)^2 >= -1/4 on [0, 1/11]
};

inline std::string_view lemma_name(LemmaId id) {
  switch (id) {
    case LemmaId::L32: return "L32";
    case LemmaId::L33: return "L33";
    case LemmaId::L34i: return "L34i";
    case LemmaId::L34ii: return "L34ii";
    case LemmaId::L34iii: return "L34iii";
    case LemmaId::L35: return "L35";
    case LemmaId::combined: return "combined";
    case LemmaId::oscillation: return "oscillation";
    case LemmaId::scalarG: return "scalarG";
    case LemmaId::scalarQuarter: return "scalarQuarter";
  }
  return "unknown";
}

enum class AuditStatus { pass, fail, inconclusive, skipped };

inline std::string_view status_name(AuditStatus s) {
  switch (s) {
    case AuditStatus::pass: return "pass";
    case AuditStatus::fail: return "fail";
    case AuditStatus::inconclusive: return "inconclusive";
    case AuditStatus::skipped: return "skipped";
  }
  return "unknown";
}

struct AuditCase {
  std::string potential_id;
  double z = 0.0;
  int i = 0;
  double D = 0.0;
  double a = 0.0;
  double b = 0.0;
  double x0 = 0.0;

  std::string label() const {
    std::ostringstream os;
    os.precision(10);
    os << potential_id << " z=" << z << " i=" << i << " D=" << D;
    return os.str();
  }
};

struct AuditResult {
  LemmaId lemma_id = LemmaId::L32;
  std::string case_label;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  ///< lhs - rhs; for the L33 equality, -|lhs - rhs|
  bool pass = false;    ///< margin >= -kAuditTol
  AuditStatus status = AuditStatus::fail;
  std::string note;
};

namespace detail {

inline AuditResult make_result(LemmaId id, std::string label, double lhs, double rhs,
                               double margin, bool conservative = false) {
  AuditResult r;
  r.lemma_id = id;
  r.case_label = std::move(label);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = margin;
  r.pass = margin >= -kAuditTol;
  r.status = r.pass ? AuditStatus::pass : (conservative ? AuditStatus::inconclusive : AuditStatus::fail);
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Scalar inequalities
// ---------------------------------------------------------------------------

inline double scalar_G(double s) {
  const double l34 = std::log(1.0 - 0.75 * s);
  return s / (4.0 * (1.0 - 0.75 * s)) * (1.0 - l34) +
         0.25 * ((1.0 + s) * std::log(1.0 - s)) / (4.0 * (1.0 - s)) - l34 / 6.0;
}

inline double scalar_quarter(double s) { return (std::log(1.0 - s) - s) / ((1.0 - s) * (1.0 - s)); }

/// Worst case over a uniform grid on [0, 1/11] of G(s) - s/10 and of
/// (log(1-s) - s)/(1-s)^2 + 1/4.
inline std::vector<AuditResult> audit_scalar_inequalities(std::size_t grid_n = 10000) {
  if (grid_n < 2) throw InputError("audit_scalar_inequalities: grid_n must be at least 2");
  AuditResult worst_g = detail::make_result(LemmaId::scalarG, "", 0, 0, std::numeric_limits<double>::infinity());
  AuditResult worst_q = detail::make_result(LemmaId::scalarQuarter, "", 0, 0, std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k < grid_n; ++k) {
    const double s = (1.0 / 11.0) * static_cast<double>(k) / static_cast<double>(grid_n - 1);
    const double g = scalar_G(s);
    const double q = scalar_quarter(s);
    std::ostringstream label;
    label.precision(17);
    label << "s=" << s;
    if (g - s / 10.0 < worst_g.margin) {
      worst_g = detail::make_result(LemmaId::scalarG, label.str(), g, s / 10.0, g - s / 10.0);
    }
    if (q + 0.25 < worst_q.margin) {
      worst_q = detail::make_result(LemmaId::scalarQuarter, label.str(), q, -0.25, q + 0.25);
    }
  }
  return {worst_g, worst_q};
}

// ---------------------------------------------------------------------------
// Oscillation bound
// ---------------------------------------------------------------------------

/// z_{i+1} >= (i+1) pi for every computed eigenvalue.
inline std::vector<AuditResult> audit_oscillation_bound(const std::vector<Eigenvalue>& eigs,
                                                        const std::string& potential_id = {}) {
  std::vector<AuditResult> out;
  for (const Eigenvalue& e : eigs) {
    const double ratio = e.n * kPi / e.z;
    out.push_back(detail::make_result(LemmaId::oscillation,
                                      potential_id + " n=" + std::to_string(e.n), 1.0, ratio,
                                      1.0 - ratio));
  }
  return out;
}

inline std::vector<AuditResult> audit_oscillation_bound(const Potential& p, int n_max,
                                                        const SpectrumConfig& base = {}) {
  SpectrumConfig cfg = base;
  cfg.n_max = n_max;
  return audit_oscillation_bound(spectrum(p, cfg), describe(p.spec()));
}

// ---------------------------------------------------------------------------
// Angle blocks
// ---------------------------------------------------------------------------

class AngleBlock;

inline std::optional<AngleBlock> make_block(std::shared_ptr<const PruferTrajectory> traj, int i, double D,
                                     double x0, std::string potential_id,
                                     std::string* skip_reason = nullptr);

/// One audit block on a trajectory integrated up to x0, with the integrals
/// every lemma audit draws on.
class AngleBlock {
 public:
  const AuditCase& audit_case() const noexcept { return case_; }
  const PruferTrajectory& trajectory() const noexcept { return *traj_; }

  double s_at(double x) const { return traj_->potential().q(x) / (z() * z()); }
  double s_a() const { return s_at(case_.a); }
  double s_b() const { return s_at(case_.b); }
  double z() const noexcept { return case_.z; }

  /// int_a^b (q/z) sin^2 phi dx
  double J() const { return j_; }
  /// int_a^b (q/z)(sin^2 phi - phi sin phi cos phi) dx
  double I1() const { return i1_; }
  /// int_a^b (r^2/r^2(b)) (q/z)(sin^2 phi - phi sin phi cos phi) dx
  double A1() const { return a1_; }
  /// int_a^b (q/z) sin phi cos phi (int_a^x (q/z) sin^2 phi ds) dx
  double I2() const { return i2_; }
  /// int_{-pi/2}^{-pi/2+D} s(t)(sin^2 t - t sin t cos t) / (1 - s(t) sin^2 t) dt
  double T1() const { return t1_; }
  /// int_{-pi/2}^{-pi/2+D} s(t) sin t cos t / (1 - s(t) sin^2 t) dt
  double T2() const { return t2_; }

  /// Minimum over x in [a, b] of f(x), from a dense sample refined by golden section.
  template <class F>
  double interval_min(const F& f) const {
    constexpr std::size_t n = 513;
    const double a = case_.a;
    const double b = case_.b;
    double best_x = a;
    double best = f(a);
    for (std::size_t k = 1; k < n; ++k) {
      const double x = a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
      const double v = f(x);
      if (v < best) {
        best = v;
        best_x = x;
      }
    }
    const double h = (b - a) / static_cast<double>(n - 1);
    double lo = std::max(a, best_x - h);
    double hi = std::min(b, best_x + h);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo);
    double x2 = lo + g * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 60; ++it) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = f(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = f(x2);
      }
    }
    return std::min({best, f1, f2});
  }

  /// phi' from the ODE at x.
  double phi_prime(double x) const { return traj_->phi_prime(x); }

 private:
  friend std::optional<AngleBlock> make_block(std::shared_ptr<const PruferTrajectory>, int, double,
                                              double, std::string, std::string*);

  AngleBlock(std::shared_ptr<const PruferTrajectory> t, AuditCase c)
      : traj_(std::move(t)), case_(std::move(c)) {
    compute();
  }

  void compute() {
    const PruferTrajectory& t = *traj_;
    const Potential& p = t.potential();
    const double z = case_.z;
    const double a = case_.a;
    const double b = case_.b;
    const double log_r_b = t.log_r(b);
    const std::vector<double> pts = breakpoints(t, a, b);

    const auto sin2 = [&](double x) {
      const double sp = std::sin(t.phi(x));
      return p.q(x) / z * sp * sp;
    };
    const auto tau = [&](double x) {
      const double ph = t.phi(x);
      const double sp = std::sin(ph);
      const double cp = std::cos(ph);
      return p.q(x) / z * (sp * sp - ph * sp * cp);
    };
    j_ = quad::integrate_pieces(sin2, pts);
    i1_ = quad::integrate_pieces(tau, pts);
    a1_ = quad::integrate_pieces(
        [&](double x) { return std::exp(2.0 * (t.log_r(x) - log_r_b)) * tau(x); }, pts);

    const quad::Cumulative inner(sin2, pts);
    i2_ = quad::integrate_pieces(
        [&](double x) {
          const double ph = t.phi(x);
          return p.q(x) / z * std::sin(ph) * std::cos(ph) * inner(x);
        },
        pts);

    // Substituted integrals in t = phi - (i+1) pi, split where the steps end.
    const double shift = (case_.i + 1) * kPi;
    std::vector<double> tpts;
    tpts.reserve(pts.size());
    tpts.push_back(-0.5 * kPi);
    for (std::size_t k = 1; k + 1 < pts.size(); ++k) tpts.push_back(t.phi(pts[k]) - shift);
    tpts.push_back(-0.5 * kPi + case_.D);
    std::sort(tpts.begin(), tpts.end());
    const auto s_of_t = [&](double tt) {
      const double x = t.phi_inverse_increasing(tt + shift, b);
      return p.q(x) / (z * z);
    };
    t1_ = quad::integrate_pieces(
        [&](double tt) {
          const double s = s_of_t(tt);
          const double st = std::sin(tt);
          const double ct = std::cos(tt);
          return s * (st * st - tt * st * ct) / (1.0 - s * st * st);
        },
        tpts);
    t2_ = quad::integrate_pieces(
        [&](double tt) {
          const double s = s_of_t(tt);
          const double st = std::sin(tt);
          return s * st * std::cos(tt) / (1.0 - s * st * st);
        },
        tpts);
  }

  std::shared_ptr<const PruferTrajectory> traj_;
  AuditCase case_;
  double j_ = 0, i1_ = 0, a1_ = 0, i2_ = 0, t1_ = 0, t2_ = 0;
};

/// Builds the block for (i, D) on a trajectory integrated to x0. Returns
/// nullopt (with a reason) when the block does not fit inside (0, x0] or the
/// angle is not increasing there.
inline std::optional<AngleBlock> make_block(std::shared_ptr<const PruferTrajectory> traj, int i,
                                            double D, double x0, std::string potential_id,
                                            std::string* skip_reason) {
  const auto skip = [&](std::string why) -> std::optional<AngleBlock> {
    if (skip_reason) *skip_reason = std::move(why);
    return std::nullopt;
  };
  if (i < 0) throw InputError("audit: block index i must be nonnegative");
  if (!(D >= 0.0 && D <= kPi)) throw InputError("audit: D must lie in [0, pi]");
  const double z = traj->z();
  const Potential& p = traj->potential();
  if (!(z * z > p.q(x0))) return skip("z^2 <= q(x0)");
  const double lo = i * kPi + 0.5 * kPi;
  const double hi = lo + D;
  if (traj->phi(x0) < hi) return skip("phi(x0) below the block end");
  AuditCase c;
  c.potential_id = std::move(potential_id);
  c.z = z;
  c.i = i;
  c.D = D;
  c.x0 = x0;
  try {
    c.b = traj->phi_inverse(hi);
    c.a = traj->phi_inverse_increasing(lo, c.b);
  } catch (const PreconditionError& e) {
    return skip(e.what());
  }
  if (!(c.b > 0.0 && c.b <= x0)) return skip("block end outside (0, x0]");
  return AngleBlock(std::move(traj), std::move(c));
}

// ---------------------------------------------------------------------------
// Lemma audits
// ---------------------------------------------------------------------------

/// lhs = int r^2 (q/z)(sin^2 phi - phi sin cos), rhs = r^2(b) [I1 - 2 I2]; both / r^2(b).
inline AuditResult audit_lemma32(const AngleBlock& blk) {
  const double lhs = blk.A1();
  const double rhs = blk.I1() - 2.0 * blk.I2();
  return detail::make_result(LemmaId::L32, blk.audit_case().label(), lhs, rhs, lhs - rhs);
}

/// x-integral I1 against T1 - (i+1) pi T2.
inline AuditResult audit_lemma33_substitution(const AngleBlock& blk) {
  const double lhs = blk.I1();
  const double rhs = blk.T1() - (blk.audit_case().i + 1) * kPi * blk.T2();
  return detail::make_result(LemmaId::L33, blk.audit_case().label(), lhs, rhs,
                             -std::abs(lhs - rhs));
}

/// Parts (i)-(iii); (iii) replaces the mean-value point by the worst point of the block.
inline std::vector<AuditResult> audit_lemma34(const AngleBlock& blk) {
  const AuditCase& c = blk.audit_case();
  if (!(c.D >= 0.5 * kPi && c.D <= kPi)) throw InputError("audit_lemma34: D must lie in [pi/2, pi]");
  const double sa = blk.s_a();
  const double sb = blk.s_b();
  const double z = blk.z();
  std::vector<AuditResult> out;

  // (i) lower <= J <= upper
  const double lower = 0.25 * kPi * sa / (1.0 - 0.75 * sa);
  const double upper = 0.5 * kPi * sb / (1.0 - sb);
  const double j = blk.J();
  if (j - lower <= upper - j) {
    out.push_back(detail::make_result(LemmaId::L34i, c.label(), j, lower, j - lower));
  } else {
    out.push_back(detail::make_result(LemmaId::L34i, c.label(), upper, j, upper - j));
  }

  // (ii)
  const double rhs2 = 0.25 * kPi * sa / (1.0 - 0.75 * sa) + 0.25 * kPi * std::log(1.0 - sa) -
                      kPi / 6.0 * std::log(1.0 - 0.75 * sa);
  out.push_back(detail::make_result(LemmaId::L34ii, c.label(), blk.T1(), rhs2, blk.T1() - rhs2));

  // (iii)
  const Potential& p = blk.trajectory().potential();
  const double scale = (c.i + 1) * kPi * kPi / (2.0 * z * z);
  const double rhs3 = blk.interval_min([&](double x) {
    const double s = p.q(x) / (z * z);
    return -scale / (1.0 - s) * p.dq(x) / blk.phi_prime(x);
  });
  const double lhs3 = -(c.i + 1) * kPi * blk.T2();
  AuditResult r3 = detail::make_result(LemmaId::L34iii, c.label(), lhs3, rhs3, lhs3 - rhs3, true);
  r3.note = "mean-value point replaced by the block minimum";
  out.push_back(std::move(r3));
  return out;
}

/// Nested integral -2 I2 against its lower bound, with the mean-value term at
/// the block minimum.
inline AuditResult audit_lemma35(const AngleBlock& blk) {
  const AuditCase& c = blk.audit_case();
  if (!(c.D >= 0.5 * kPi && c.D <= kPi)) throw InputError("audit_lemma35: D must lie in [pi/2, pi]");
  const double sa = blk.s_a();
  const double z = blk.z();
  const Potential& p = blk.trajectory().potential();
  const double first = -0.25 * kPi *
                       (sa / (1.0 - 0.75 * sa) * std::log(1.0 - 0.75 * sa) -
                        2.0 * sa / (1.0 - sa) * std::log(1.0 - sa));
  const double worst = blk.interval_min([&](double x) {
    const double s = p.q(x) / (z * z);
    return (std::log(1.0 - s) - s) / ((1.0 - s) * (1.0 - s)) * p.dq(x) / blk.phi_prime(x);
  });
  const double rhs = first + kPi * kPi / (2.0 * z * z) * worst;
  const double lhs = -2.0 * blk.I2();
  AuditResult r = detail::make_result(LemmaId::L35, c.label(), lhs, rhs, lhs - rhs, true);
  r.note = "mean-value point replaced by the block minimum";
  return r;
}

/// I1 - 2 I2 >= 0 over a full block (D = pi) for z^2 >= 11 q(x0).
inline AuditResult audit_combined(const AngleBlock& blk) {
  const double lhs = blk.I1() - 2.0 * blk.I2();
  return detail::make_result(LemmaId::combined, blk.audit_case().label(), lhs, 0.0, lhs);
}

// ---------------------------------------------------------------------------
// Case grid
// ---------------------------------------------------------------------------

struct SkippedCase {
  std::string case_label;
  std::string reason;
};

struct AuditReport {
  std::vector<AuditResult> results;
  std::vector<SkippedCase> skipped;
  std::size_t cases_run = 0;

  bool all_pass(bool include_inconclusive = false) const {
    return std::all_of(results.begin(), results.end(), [&](const AuditResult& r) {
      return r.pass || (!include_inconclusive && r.status == AuditStatus::inconclusive);
    });
  }

  /// Largest |lhs - rhs| of the L33 equality audits.
  double max_equality_residual() const {
    double m = 0.0;
    for (const auto& r : results) {
      if (r.lemma_id == LemmaId::L33) m = std::max(m, -r.margin);
    }
    return m;
  }

  void append(AuditReport other) {
    results.insert(results.end(), std::make_move_iterator(other.results.begin()),
                   std::make_move_iterator(other.results.end()));
    skipped.insert(skipped.end(), std::make_move_iterator(other.skipped.begin()),
                   std::make_move_iterator(other.skipped.end()));
    cases_run += other.cases_run;
  }
};

struct AuditGrid {
  std::vector<int> block_indices{0, 1, 2};
  std::vector<double> extensions{0.5 * kPi, 0.75 * kPi, kPi};
  int n_max = 10;  ///< eigenvalues used for the oscillation audit and the z_5, z_10 grid points
  IntegratorConfig integrator{};
};

/// All block audits of one potential at z in {sqrt(11 q(x0)), 1.5 sqrt(11 q(x0)), z_5, z_10}
/// (the eigenvalue points only when n_max reaches them), plus the oscillation bound.
inline AuditReport audit_potential(const Potential& p, const AuditGrid& grid = {}) {
  AuditReport report;
  const std::string id = describe(p.spec());
  const ShapeReport shape = classify(p);
  const double x0 = shape.x0;
  const double q_x0 = p.q(x0);

  SpectrumConfig sc;
  sc.n_max = grid.n_max;
  sc.integrator = grid.integrator;
  const std::vector<Eigenvalue> eigs = spectrum(p, sc);
  for (auto& r : audit_oscillation_bound(eigs, id)) report.results.push_back(std::move(r));

  std::vector<double> zs;
  const double threshold = std::sqrt(11.0 * q_x0);
  if (threshold > 0.0) {
    zs.push_back(threshold);
    zs.push_back(1.5 * threshold);
  }
  for (int n : {5, 10}) {
    if (n <= grid.n_max) zs.push_back(eigs[static_cast<std::size_t>(n - 1)].z);
  }

  for (double z : zs) {
    if (!(x0 > 0.0)) break;
    auto traj = std::make_shared<const PruferTrajectory>(integrate(p, z, x0, grid.integrator));
    for (int i : grid.block_indices) {
      for (double D : grid.extensions) {
        std::string reason;
        auto blk = make_block(traj, i, D, x0, id, &reason);
        if (!blk) {
          AuditCase c{id, z, i, D, 0.0, 0.0, x0};
          report.skipped.push_back({c.label(), reason});
          continue;
        }
        ++report.cases_run;
        report.results.push_back(audit_lemma32(*blk));
        report.results.push_back(audit_lemma33_substitution(*blk));
        if (D >= 0.5 * kPi) {
          for (auto& r : audit_lemma34(*blk)) report.results.push_back(std::move(r));
          report.results.push_back(audit_lemma35(*blk));
        }
        if (D == kPi && z * z >= 11.0 * q_x0 * (1.0 - 1e-12)) {
          report.results.push_back(audit_combined(*blk));
        }
      }
    }
  }
  return report;
}

}  // namespace pruefer
