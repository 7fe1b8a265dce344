#pragma once

// Potentials q on [0,1]: closed-form evaluation, shape classification
// (single-barrier / single-well) and the admissibility checks for the
// eigenvalue-ratio bound.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "pruefer/errors.hpp"

namespace pruefer {

inline constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Specs
// ---------------------------------------------------------------------------

/// q(x) = c.
struct ConstantPotential {
  double c = 0.0;
  friend bool operator==(const ConstantPotential&, const ConstantPotential&) = default;
};

/// q(x) = base + amplitude * sin(pi x). Positive amplitude is a barrier at 1/2,
/// negative amplitude a well.
struct SineBump {
  double base = 0.0;
  double amplitude = 0.0;
  friend bool operator==(const SineBump&, const SineBump&) = default;
};

struct Node {
  double x = 0.0;
  double value = 0.0;
  friend bool operator==(const Node&, const Node&) = default;
};

/// Linear interpolation between nodes; abscissae strictly increase from 0 to 1.
struct PiecewiseLinear {
  std::vector<Node> nodes;
  friend bool operator==(const PiecewiseLinear&, const PiecewiseLinear&) = default;
};

/// q(x) = sum_k coefficients[k] * x^k.
struct Polynomial {
  std::vector<double> coefficients;
  friend bool operator==(const Polynomial&, const Polynomial&) = default;
};

using PotentialSpec = std::variant<ConstantPotential, SineBump, PiecewiseLinear, Polynomial>;

inline std::string_view kind_name(const PotentialSpec& spec) {
  constexpr std::string_view names[] = {"constant", "sine_bump", "piecewise_linear",
                                        "polynomial"};
  return names[spec.index()];
}

/// Short human-readable identifier, used as `potential_id` in reports.
inline std::string describe(const PotentialSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  std::visit(
      [&os](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConstantPotential>) {
          os << "constant(" << s.c << ")";
        } else if constexpr (std::is_same_v<T, SineBump>) {
          os << "sine_bump(" << s.base << "," << s.amplitude << ")";
        } else if constexpr (std::is_same_v<T, PiecewiseLinear>) {
          os << "piecewise_linear(";
          for (std::size_t k = 0; k < s.nodes.size(); ++k) {
            os << (k ? ";" : "") << s.nodes[k].x << ":" << s.nodes[k].value;
          }
          os << ")";
        } else {
          os << "polynomial(";
          for (std::size_t k = 0; k < s.coefficients.size(); ++k) {
            os << (k ? "," : "") << s.coefficients[k];
          }
          os << ")";
        }
      },
      spec);
  return os.str();
}

struct PotentialValue {
  double q = 0.0;
  double dq = 0.0;
};

// ---------------------------------------------------------------------------
// Potential
// ---------------------------------------------------------------------------

/// A validated potential on [0,1]. Immutable after construction.
class Potential {
 public:
  static constexpr std::size_t kDefaultGrid = 4097;
  static constexpr double kNegativityTolerance = 1e-14;

  explicit Potential(PotentialSpec spec, std::size_t eval_grid_n = kDefaultGrid)
      : spec_(std::move(spec)), grid_n_(eval_grid_n) {
    if (grid_n_ < 3) throw InputError("eval_grid_n must be at least 3");
    std::visit([](const auto& s) { validate(s); }, spec_);
    for (std::size_t i = 0; i < grid_n_; ++i) {
      const double x = grid_point(i);
      const double v = q(x);
      if (!std::isfinite(v)) throw InputError("potential is not finite at x = " + std::to_string(x));
      if (v < -kNegativityTolerance) {
        throw InputError("potential is negative at x = " + std::to_string(x));
      }
    }
  }

  const PotentialSpec& spec() const noexcept { return spec_; }
  std::size_t eval_grid_n() const noexcept { return grid_n_; }
  double grid_point(std::size_t i) const noexcept {
    return static_cast<double>(i) / static_cast<double>(grid_n_ - 1);
  }

  /// Checked evaluation of (q(x), q'(x)).
  PotentialValue evaluate(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw DomainError("potential evaluated outside [0,1] at x = " + std::to_string(x));
    }
    return {q(x), dq(x)};
  }

  /// Unchecked q(x); x is clamped into [0,1] to absorb rounding at the ends.
  double q(double x) const noexcept {
    x = std::clamp(x, 0.0, 1.0);
    return std::visit([x](const auto& s) { return value_of(s, x); }, spec_);
  }

  /// Unchecked q'(x). Piecewise-linear potentials return the right-hand slope
  /// (left-hand at x = 1).
  double dq(double x) const noexcept {
    x = std::clamp(x, 0.0, 1.0);
    return std::visit([x](const auto& s) { return slope_of(s, x); }, spec_);
  }

  bool is_piecewise_linear() const noexcept {
    return std::holds_alternative<PiecewiseLinear>(spec_);
  }

 private:
  static void validate(const ConstantPotential& s) {
    if (!std::isfinite(s.c)) throw InputError("constant: c must be finite");
  }
  static void validate(const SineBump& s) {
    if (!std::isfinite(s.base)) throw InputError("sine_bump: base must be finite");
    if (!std::isfinite(s.amplitude)) throw InputError("sine_bump: amplitude must be finite");
  }
  static void validate(const PiecewiseLinear& s) {
    if (s.nodes.size() < 2) throw InputError("piecewise_linear: nodes needs at least two entries");
    if (s.nodes.front().x != 0.0) throw InputError("piecewise_linear: first node must have x = 0");
    if (s.nodes.back().x != 1.0) throw InputError("piecewise_linear: last node must have x = 1");
    for (std::size_t k = 0; k < s.nodes.size(); ++k) {
      if (!std::isfinite(s.nodes[k].x) || !std::isfinite(s.nodes[k].value)) {
        throw InputError("piecewise_linear: nodes[" + std::to_string(k) + "] is not finite");
      }
      if (k > 0 && !(s.nodes[k].x > s.nodes[k - 1].x)) {
        throw InputError("piecewise_linear: nodes[" + std::to_string(k) +
                         "].x must be strictly increasing");
      }
    }
  }
  static void validate(const Polynomial& s) {
    if (s.coefficients.empty()) throw InputError("polynomial: coefficients must be non-empty");
    for (double c : s.coefficients) {
      if (!std::isfinite(c)) throw InputError("polynomial: coefficients must be finite");
    }
  }

  static double value_of(const ConstantPotential& s, double) noexcept { return s.c; }
  static double slope_of(const ConstantPotential&, double) noexcept { return 0.0; }

  static double value_of(const SineBump& s, double x) noexcept {
    return s.base + s.amplitude * std::sin(kPi * x);
  }
  static double slope_of(const SineBump& s, double x) noexcept {
    return s.amplitude * kPi * std::cos(kPi * x);
  }

  static std::size_t piece_of(const PiecewiseLinear& s, double x) noexcept {
    // Last k with nodes[k].x <= x, capped so that k+1 is valid.
    auto it = std::upper_bound(s.nodes.begin(), s.nodes.end(), x,
                               [](double v, const Node& n) { return v < n.x; });
    auto k = static_cast<std::size_t>(std::distance(s.nodes.begin(), it));
    k = k == 0 ? 0 : k - 1;
    return std::min(k, s.nodes.size() - 2);
  }
  static double value_of(const PiecewiseLinear& s, double x) noexcept {
    const std::size_t k = piece_of(s, x);
    const Node& a = s.nodes[k];
    const Node& b = s.nodes[k + 1];
    const double t = (x - a.x) / (b.x - a.x);
    return a.value + t * (b.value - a.value);
  }
  static double slope_of(const PiecewiseLinear& s, double x) noexcept {
    const std::size_t k = piece_of(s, x);
    return (s.nodes[k + 1].value - s.nodes[k].value) / (s.nodes[k + 1].x - s.nodes[k].x);
  }

  static double value_of(const Polynomial& s, double x) noexcept {
    double acc = 0.0;
    for (auto it = s.coefficients.rbegin(); it != s.coefficients.rend(); ++it) acc = acc * x + *it;
    return acc;
  }
  static double slope_of(const Polynomial& s, double x) noexcept {
    double acc = 0.0;
    for (std::size_t k = s.coefficients.size(); k-- > 1;) {
      acc = acc * x + static_cast<double>(k) * s.coefficients[k];
    }
    return acc;
  }

  PotentialSpec spec_;
  std::size_t grid_n_;
};

// ---------------------------------------------------------------------------
// Shape classification
// ---------------------------------------------------------------------------

enum class Shape { single_barrier, single_well, constant, other };

inline std::string_view shape_name(Shape s) {
  switch (s) {
    case Shape::single_barrier: return "single_barrier";
    case Shape::single_well: return "single_well";
    case Shape::constant: return "constant";
    case Shape::other: return "other";
  }
  return "other";
}

struct ShapeReport {
  Shape shape = Shape::other;
  double x0 = 0.5;     ///< transition point
  double q_sup = 0.0;  ///< = q(x0) for single_barrier
  double q0 = 0.0;
  double q1 = 0.0;
  double qmin = 0.0;
};

namespace detail {

inline constexpr double kMonotoneTolerance = 1e-12;

// Bisection for a sign change of q' on [lo, hi]; `rising_left` is the sign of
// q' at lo (true: positive).
inline double refine_turning_point(const Potential& p, double lo, double hi, bool rising_left) {
  const auto left_side = [&](double x) { return rising_left ? p.dq(x) > 0.0 : p.dq(x) < 0.0; };
  for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon(); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (left_side(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Location of the extremum (max if `barrier`, else min), as the midpoint of a
// flat extremal plateau or the refined turning point of a smooth potential.
inline double locate_extremum(const Potential& p, const std::vector<double>& values, bool barrier) {
  const auto better = [barrier](double a, double b) { return barrier ? a > b : a < b; };
  const std::size_t n = values.size();

  if (const auto* pl = std::get_if<PiecewiseLinear>(&p.spec())) {
    // Extremum of a piecewise-linear function sits at a node.
    std::size_t best = 0;
    for (std::size_t k = 1; k < pl->nodes.size(); ++k) {
      if (better(pl->nodes[k].value, pl->nodes[best].value)) best = k;
    }
    std::size_t lo = best;
    std::size_t hi = best;
    const double v = pl->nodes[best].value;
    while (lo > 0 && std::abs(pl->nodes[lo - 1].value - v) <= kMonotoneTolerance) --lo;
    while (hi + 1 < pl->nodes.size() && std::abs(pl->nodes[hi + 1].value - v) <= kMonotoneTolerance) {
      ++hi;
    }
    return 0.5 * (pl->nodes[lo].x + pl->nodes[hi].x);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (better(values[i], values[best])) best = i;
  }
  std::size_t lo = best;
  std::size_t hi = best;
  while (lo > 0 && std::abs(values[lo - 1] - values[best]) <= kMonotoneTolerance) --lo;
  while (hi + 1 < n && std::abs(values[hi + 1] - values[best]) <= kMonotoneTolerance) ++hi;

  if (lo == 0 && hi == n - 1) return 0.5;
  if (lo == 0 && hi == 0) return 0.0;
  if (lo == n - 1) return 1.0;

  // Smooth potentials: refine to the zero of q' bracketed by the plateau neighbours.
  const double a = p.grid_point(lo == 0 ? 0 : lo - 1);
  const double b = p.grid_point(std::min(hi + 1, n - 1));
  const bool left_rising = p.dq(a) > 0.0;
  const bool right_rising = p.dq(b) > 0.0;
  if (barrier && left_rising && !right_rising && p.dq(b) < 0.0) {
    return refine_turning_point(p, a, b, true);
  }
  if (!barrier && p.dq(a) < 0.0 && right_rising) {
    return refine_turning_point(p, a, b, false);
  }
  return 0.5 * (p.grid_point(lo) + p.grid_point(hi));
}

}  // namespace detail

/// Classifies q from the sign pattern of its grid differences. Monotone
/// potentials satisfy both definitions and are reported as single_barrier with
/// x0 at the maximum.
inline ShapeReport classify(const Potential& p) {
  const std::size_t n = p.eval_grid_n();
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = p.q(p.grid_point(i));

  bool seen_up = false;
  bool seen_down = false;
  bool up_after_down = false;
  bool down_after_up = false;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = values[i + 1] - values[i];
    if (d > detail::kMonotoneTolerance) {
      if (seen_down) up_after_down = true;
      seen_up = true;
    } else if (d < -detail::kMonotoneTolerance) {
      if (seen_up) down_after_up = true;
      seen_down = true;
    }
  }

  ShapeReport r;
  r.q0 = values.front();
  r.q1 = values.back();
  r.q_sup = *std::max_element(values.begin(), values.end());
  r.qmin = *std::min_element(values.begin(), values.end());

  if (!seen_up && !seen_down) {
    r.shape = Shape::constant;
    r.x0 = 0.5;
  } else if (!up_after_down) {
    r.shape = Shape::single_barrier;
    r.x0 = detail::locate_extremum(p, values, true);
    r.q_sup = std::max(r.q_sup, p.q(r.x0));
  } else if (!down_after_up) {
    r.shape = Shape::single_well;
    r.x0 = detail::locate_extremum(p, values, false);
    r.qmin = std::min(r.qmin, p.q(r.x0));
  } else {
    r.shape = Shape::other;
    r.x0 = p.grid_point(static_cast<std::size_t>(
        std::distance(values.begin(), std::max_element(values.begin(), values.end()))));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Admissibility
// ---------------------------------------------------------------------------

/// sup |q'| over [0,1]: exact for the closed-form kinds, grid maximum for polynomials.
inline double sup_abs_derivative(const Potential& p) {
  return std::visit(
      [&p](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConstantPotential>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, SineBump>) {
          return std::abs(s.amplitude) * kPi;
        } else if constexpr (std::is_same_v<T, PiecewiseLinear>) {
          double m = 0.0;
          for (std::size_t k = 0; k + 1 < s.nodes.size(); ++k) {
            m = std::max(m, std::abs((s.nodes[k + 1].value - s.nodes[k].value) /
                                     (s.nodes[k + 1].x - s.nodes[k].x)));
          }
          return m;
        } else {
          double m = 0.0;
          for (std::size_t i = 0; i < p.eval_grid_n(); ++i) {
            m = std::max(m, std::abs(p.dq(p.grid_point(i))));
          }
          return m;
        }
      },
      p.spec());
}

struct HypothesisReport {
  bool nonnegative = true;
  double nonnegative_margin = 0.0;  ///< qmin
  bool single_barrier = true;       ///< shape is single_barrier or constant
  Shape shape = Shape::constant;
  double x0 = 0.5;
  double q_x0 = 0.0;
  double qstar = 0.0;  ///< (2/15) min{q(0), q(1)}
  double sup_abs_dq = 0.0;
  bool deriv_bound_ok = true;
  double deriv_margin = 0.0;           ///< qstar - sup|q'|
  double eligibility_threshold = 0.0;  ///< 11 q(x0)
  bool all_pairs_condition = true;     ///< q(x0) <= pi^2/11
  double all_pairs_margin = 0.0;       ///< pi^2/11 - q(x0)

  bool all_hold() const noexcept { return nonnegative && single_barrier && deriv_bound_ok; }
};

inline constexpr double kAllPairsLimit = kPi * kPi / 11.0;

inline HypothesisReport check_hypotheses(const Potential& p, const ShapeReport& shape) {
  HypothesisReport h;
  h.nonnegative_margin = shape.qmin;
  h.nonnegative = shape.qmin >= 0.0;
  h.shape = shape.shape;
  h.single_barrier = shape.shape == Shape::single_barrier || shape.shape == Shape::constant;
  h.x0 = shape.x0;
  h.q_x0 = shape.q_sup;
  h.qstar = (2.0 / 15.0) * std::min(shape.q0, shape.q1);
  h.sup_abs_dq = sup_abs_derivative(p);
  h.deriv_margin = h.qstar - h.sup_abs_dq;
  h.deriv_bound_ok = h.sup_abs_dq <= h.qstar;
  h.eligibility_threshold = 11.0 * h.q_x0;
  h.all_pairs_margin = kAllPairsLimit - h.q_x0;
  h.all_pairs_condition = h.q_x0 <= kAllPairsLimit;
  return h;
}

inline HypothesisReport check_hypotheses(const Potential& p) {
  return check_hypotheses(p, classify(p));
}

/// The weaker one-sided hypothesis set of the angle-monotonicity result: q
/// nondecreasing on [0, x0] with q' <= (2/15) q(0) there.
struct IncreasingSideReport {
  bool monotone = true;
  double bound = 0.0;   ///< (2/15) q(0)
  double sup_dq = 0.0;  ///< sup of q' over [0, x0]
  bool deriv_bound_ok = true;
  double margin = 0.0;

  bool all_hold() const noexcept { return monotone && deriv_bound_ok; }
};

inline IncreasingSideReport check_increasing_side(const Potential& p, double x0) {
  IncreasingSideReport r;
  r.bound = (2.0 / 15.0) * p.q(0.0);
  const std::size_t n = p.eval_grid_n();
  double prev = p.q(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::min(p.grid_point(i), x0);
    const double v = p.q(x);
    if (v < prev - detail::kMonotoneTolerance) r.monotone = false;
    prev = v;
    r.sup_dq = std::max(r.sup_dq, p.dq(x));
    if (p.grid_point(i) >= x0) break;
  }
  r.margin = r.bound - r.sup_dq;
  r.deriv_bound_ok = r.sup_dq <= r.bound;
  return r;
}

// ---------------------------------------------------------------------------
// Reversal
// ---------------------------------------------------------------------------

/// The reflected potential q~(x) = q(1 - x).
inline Potential reverse(const Potential& p) {
  PotentialSpec out = std::visit(
      [](const auto& s) -> PotentialSpec {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConstantPotential> || std::is_same_v<T, SineBump>) {
          return s;  // sin(pi(1-x)) = sin(pi x)
        } else if constexpr (std::is_same_v<T, PiecewiseLinear>) {
          PiecewiseLinear r;
          r.nodes.reserve(s.nodes.size());
          for (auto it = s.nodes.rbegin(); it != s.nodes.rend(); ++it) {
            r.nodes.push_back({1.0 - it->x, it->value});
          }
          r.nodes.front().x = 0.0;
          r.nodes.back().x = 1.0;
          return r;
        } else {
          // sum_k c_k (1-x)^k = sum_j x^j (-1)^j sum_{k>=j} C(k,j) c_k
          const std::size_t deg = s.coefficients.size();
          Polynomial r;
          r.coefficients.assign(deg, 0.0);
          for (std::size_t k = 0; k < deg; ++k) {
            double binom = 1.0;  // C(k, j)
            for (std::size_t j = 0; j <= k; ++j) {
              const double sign = (j % 2 == 0) ? 1.0 : -1.0;
              r.coefficients[j] += sign * binom * s.coefficients[k];
              binom = binom * static_cast<double>(k - j) / static_cast<double>(j + 1);
            }
          }
          return r;
        }
      },
      p.spec());
  return Potential(std::move(out), p.eval_grid_n());
}

// ---------------------------------------------------------------------------
// Seeded generators
// ---------------------------------------------------------------------------

struct FamilyParams {
  std::pair<double, double> transition_range{0.2, 0.8};
  std::pair<double, double> base_range{0.05, 3.0};
  /// Fraction in [0,1] of the largest curvature compatible with the
  /// derivative bound; 0 yields constant potentials.
  double amplitude_cap = 1.0;
};

namespace detail {

class UnitStream {
 public:
  explicit UnitStream(std::uint64_t seed) : rng_(seed) {}
  // 53 random bits mapped to [0,1); identical on every standard library.
  double next() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double in(std::pair<double, double> r) { return r.first + (r.second - r.first) * next(); }

 private:
  std::mt19937_64 rng_;
};

inline void check_range(std::pair<double, double> r, double lo, double hi, const char* name) {
  if (!(r.first <= r.second) || r.first < lo || r.second > hi) {
    throw InputError(std::string("infeasible ") + name);
  }
}

}  // namespace detail

/// Deterministic generator of admissible single-barrier potentials
///   q(x) = q_top - a (x - x0)^2,
/// with the smaller endpoint value b drawn from base_range and the curvature
/// a <= b / (15 max{x0, 1-x0}) so that sup|q'| <= (2/15) min{q(0), q(1)}.
inline PotentialSpec sample_admissible(std::uint64_t seed, const FamilyParams& fp = {}) {
  detail::check_range(fp.transition_range, 0.0, 1.0, "transition_range");
  detail::check_range(fp.base_range, 0.0, std::numeric_limits<double>::max(), "base_range");
  if (!(fp.amplitude_cap >= 0.0 && fp.amplitude_cap <= 1.0)) {
    throw InputError("infeasible amplitude_cap (must lie in [0,1])");
  }
  detail::UnitStream u(seed);
  const double x0 = u.in(fp.transition_range);
  const double b = u.in(fp.base_range);
  const double fraction = 0.05 + 0.9 * u.next();
  if (fp.amplitude_cap == 0.0 || b == 0.0) return ConstantPotential{b};

  const double d = std::max(x0, 1.0 - x0);
  const double a = fp.amplitude_cap * fraction * b / (15.0 * d);
  const double top = b + a * d * d;
  // top - a (x^2 - 2 x0 x + x0^2)
  return Polynomial{{top - a * x0 * x0, 2.0 * a * x0, -a}};
}

struct WellParams {
  std::pair<double, double> transition_range{0.1, 0.9};
  std::pair<double, double> base_range{0.0, 3.0};
  std::pair<double, double> curvature_range{0.5, 20.0};
};

/// Deterministic generator of nonnegative single-well potentials
/// q(x) = b + a (x - x0)^2. No derivative restriction applies to wells.
inline PotentialSpec sample_single_well(std::uint64_t seed, const WellParams& wp = {}) {
  detail::check_range(wp.transition_range, 0.0, 1.0, "transition_range");
  detail::check_range(wp.base_range, 0.0, std::numeric_limits<double>::max(), "base_range");
  detail::check_range(wp.curvature_range, 0.0, std::numeric_limits<double>::max(),
                      "curvature_range");
  detail::UnitStream u(seed);
  const double x0 = u.in(wp.transition_range);
  const double b = u.in(wp.base_range);
  const double a = u.in(wp.curvature_range);
  return Polynomial{{b + a * x0 * x0, -2.0 * a * x0, a}};
}

}  // namespace pruefer
