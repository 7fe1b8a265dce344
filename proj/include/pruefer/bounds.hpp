#pragma once

// Eigenvalue-ratio bound suites. Every pair n > m >= 1 within the computed
// spectrum is checked and reported, eligible or not.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "pruefer/errors.hpp"
#include "pruefer/potential.hpp"
#include "pruefer/spectrum.hpp"

namespace pruefer {

/// Slack on every "<=" comparison of a ratio against its bound.
inline constexpr double kRatioSlack = 1e-12;

enum class BoundKind {
  theorem21,       ///< lambda_n / lambda_m <= n^2/m^2 above the 11 q(x0) threshold
  ab_square,       ///< lambda_n / lambda_1 <= n^2
  ab_ceil,         ///< lambda_n / lambda_m <= ceil(n/m)^2
  hk_single_well,  ///< lambda_n / lambda_m <= n^2/m^2 for single wells
  hl_lower         ///< lambda_n / lambda_m >= (n/m)^2 / (1 + xi)
};

inline std::string_view bound_kind_name(BoundKind k) {
  switch (k) {
    case BoundKind::theorem21: return "theorem21";
    case BoundKind::ab_square: return "ab_square";
    case BoundKind::ab_ceil: return "ab_ceil";
    case BoundKind::hk_single_well: return "hk_single_well";
    case BoundKind::hl_lower: return "hl_lower";
  }
  return "unknown";
}

struct PairCheck {
  int n = 0;
  int m = 0;
  double ratio = 0.0;  ///< lambda_n / lambda_m
  double bound = 0.0;
  bool eligible = false;
  /// bound - ratio for upper bounds, ratio - bound for the lower bound;
  /// nonnegative means the bound holds.
  double margin = 0.0;
  BoundKind bound_kind = BoundKind::theorem21;

  bool passes() const noexcept { return margin >= -kRatioSlack; }
};

struct BoundReport {
  std::string potential_id;
  int n_max = 0;
  BoundKind kind = BoundKind::theorem21;
  bool applicable = true;
  std::vector<PairCheck> checks;
  bool all_eligible_pass = true;
  double min_margin_eligible = std::numeric_limits<double>::infinity();

  void finalize() {
    all_eligible_pass = true;
    min_margin_eligible = std::numeric_limits<double>::infinity();
    for (const PairCheck& c : checks) {
      if (!c.eligible) continue;
      min_margin_eligible = std::min(min_margin_eligible, c.margin);
      if (!c.passes()) all_eligible_pass = false;
    }
  }

  std::size_t eligible_count() const {
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(), [](const PairCheck& c) { return c.eligible; }));
  }
};

namespace detail {

template <class Fn>
BoundReport upper_pairs(const std::vector<Eigenvalue>& eigs, BoundKind kind, Fn&& bound_and_eligible) {
  require_ordered(eigs);
  BoundReport r;
  r.kind = kind;
  r.n_max = static_cast<int>(eigs.size());
  for (const Eigenvalue& en : eigs) {
    for (const Eigenvalue& em : eigs) {
      if (em.n >= en.n) break;
      PairCheck c;
      c.n = en.n;
      c.m = em.n;
      c.ratio = en.lambda / em.lambda;
      c.bound_kind = kind;
      bound_and_eligible(en, em, c);
      c.margin = c.bound - c.ratio;
      r.checks.push_back(c);
    }
  }
  r.finalize();
  return r;
}

inline double square_ratio(int n, int m) {
  return static_cast<double>(n) * n / (static_cast<double>(m) * m);
}

}  // namespace detail

/// lambda_n / lambda_m <= n^2 / m^2; a pair is eligible when lambda_m >= 11 q(x0),
/// and every pair is eligible when q(x0) <= pi^2 / 11.
inline BoundReport check_theorem21(const std::vector<Eigenvalue>& eigs, const HypothesisReport& hyp) {
  return detail::upper_pairs(eigs, BoundKind::theorem21,
                             [&hyp](const Eigenvalue& en, const Eigenvalue& em, PairCheck& c) {
                               c.bound = detail::square_ratio(en.n, em.n);
                               c.eligible = hyp.all_pairs_condition ||
                                            em.lambda >= hyp.eligibility_threshold;
                             });
}

inline BoundReport check_theorem21(const Potential& p, const std::vector<Eigenvalue>& eigs,
                                   const HypothesisReport& hyp) {
  BoundReport r = check_theorem21(eigs, hyp);
  r.potential_id = describe(p.spec());
  return r;
}

/// Both nonnegative-potential bounds: lambda_n/lambda_1 <= n^2 (ab_square) and
/// lambda_n/lambda_m <= ceil(n/m)^2 (ab_ceil). Pairs are eligible when the
/// potential is nonnegative.
inline std::vector<BoundReport> check_ashbaugh_benguria(const std::vector<Eigenvalue>& eigs,
                                                        bool nonnegative = true) {
  require_ordered(eigs);
  BoundReport square;
  square.kind = BoundKind::ab_square;
  square.n_max = static_cast<int>(eigs.size());
  for (std::size_t k = 1; k < eigs.size(); ++k) {
    PairCheck c;
    c.n = eigs[k].n;
    c.m = 1;
    c.bound_kind = BoundKind::ab_square;
    c.ratio = eigs[k].lambda / eigs[0].lambda;
    c.bound = static_cast<double>(c.n) * c.n;
    c.eligible = nonnegative;
    c.margin = c.bound - c.ratio;
    square.checks.push_back(c);
  }
  square.finalize();

  BoundReport ceil = detail::upper_pairs(
      eigs, BoundKind::ab_ceil, [nonnegative](const Eigenvalue& en, const Eigenvalue& em, PairCheck& c) {
        const int q = (en.n + em.n - 1) / em.n;
        c.bound = static_cast<double>(q) * q;
        c.eligible = nonnegative;
      });
  return {square, ceil};
}

/// lambda_n / lambda_m <= n^2 / m^2 for nonnegative single-well (or constant)
/// potentials. Other shapes yield a report with applicable = false.
inline BoundReport check_horvath_kiss(const std::vector<Eigenvalue>& eigs, const ShapeReport& shape) {
  const bool applicable =
      (shape.shape == Shape::single_well || shape.shape == Shape::constant) && shape.qmin >= 0.0;
  BoundReport r = detail::upper_pairs(eigs, BoundKind::hk_single_well,
                                      [applicable](const Eigenvalue& en, const Eigenvalue& em, PairCheck& c) {
                                        c.bound = detail::square_ratio(en.n, em.n);
                                        c.eligible = applicable;
                                      });
  r.applicable = applicable;
  return r;
}

/// Lower bound lambda_n / lambda_m >= (n/m)^2 / (1 + xi) for p = rho = 1,
/// xi = q_sup / ((n-1)^2 pi^2). Indices are 1-based; the 0-based index k of
/// the classical statement is k = n - 1, which turns ((k+1)/(j+1))^2 into (n/m)^2.
inline BoundReport check_huang_law_lower(const std::vector<Eigenvalue>& eigs, double q_sup) {
  if (!(q_sup >= 0.0)) throw InputError("huang_law: q_sup must be nonnegative");
  require_ordered(eigs);
  BoundReport r;
  r.kind = BoundKind::hl_lower;
  r.n_max = static_cast<int>(eigs.size());
  for (const Eigenvalue& en : eigs) {
    for (const Eigenvalue& em : eigs) {
      if (em.n >= en.n) break;
      PairCheck c;
      c.n = en.n;
      c.m = em.n;
      c.bound_kind = BoundKind::hl_lower;
      c.ratio = en.lambda / em.lambda;
      const double k = static_cast<double>(en.n - 1);
      const double xi = q_sup / (k * k * kPi * kPi);
      c.bound = detail::square_ratio(en.n, em.n) / (1.0 + xi);
      c.eligible = true;
      c.margin = c.ratio - c.bound;
      r.checks.push_back(c);
    }
  }
  r.finalize();
  return r;
}

}  // namespace pruefer
