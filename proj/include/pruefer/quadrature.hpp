#pragma once

// Piecewise quadrature over the breakpoints of a dense-output trajectory. The
// interpolant is a polynomial on each step, so integrands assembled from it
// are smooth on every piece.

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace pruefer::quad {

inline constexpr double kRelTol = 1e-13;

/// Adaptive Gauss-Kronrod 15 on each piece [pts[k], pts[k+1]].
template <class F>
double integrate_pieces(const F& f, std::span<const double> pts, double rel_tol = kRelTol) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    if (pts[k + 1] <= pts[k]) continue;
    total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, pts[k], pts[k + 1],
                                                                           8, rel_tol);
  }
  return total;
}

/// Fixed 20-point Gauss-Legendre on [a, b].
template <class F>
double gauss20(const F& f, double a, double b) {
  if (b <= a) return 0.0;
  return boost::math::quadrature::gauss<double, 20>::integrate(f, a, b);
}

/// x -> integral of f from pts.front() to x, with the integral up to every
/// breakpoint precomputed. Used for the inner integral of nested quadratures.
template <class F>
class Cumulative {
 public:
  Cumulative(F f, std::vector<double> pts) : f_(std::move(f)), pts_(std::move(pts)) {
    acc_.assign(pts_.size(), 0.0);
    for (std::size_t k = 0; k + 1 < pts_.size(); ++k) {
      acc_[k + 1] = acc_[k] + integrate_pieces(f_, std::span<const double>(&pts_[k], 2));
    }
  }

  double operator()(double x) const {
    std::size_t k = 0;
    std::size_t hi = pts_.size() - 1;
    while (hi - k > 1) {  // last k with pts_[k] <= x
      const std::size_t mid = (k + hi) / 2;
      if (pts_[mid] <= x) {
        k = mid;
      } else {
        hi = mid;
      }
    }
    return acc_[k] + gauss20(f_, pts_[k], x);
  }

  double total() const { return acc_.back(); }

 private:
  F f_;
  std::vector<double> pts_;
  std::vector<double> acc_;
};

}  // namespace pruefer::quad
