#pragma once

// Small numerical toolbox: grids, bracketed root finding, bracketed
// minimization and adaptive quadrature. Root finding and quadrature delegate
// to Boost.Math; the golden-section search is local because callers need an
// absolute tolerance in the abscissa rather than a bit count.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "homodyne/errors.hpp"

namespace homodyne::num {

inline constexpr double kPi = 3.14159265358979323846;

/// count equally spaced points on [lo, hi], endpoints included.
inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count == 0) throw ValidationError("grid must contain at least one point");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  // Weighted form: symmetric grids hit 0 exactly at the midpoint.
  const double n = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double w = static_cast<double>(i) / n;
    out[i] = lo * (1.0 - w) + hi * w;
  }
  out.back() = hi;
  return out;
}

/// count log-spaced points on [lo, hi], both > 0.
inline std::vector<double> logspace(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > 0.0)) throw ValidationError("log grid bounds must be positive");
  auto exps = linspace(std::log(lo), std::log(hi), count);
  for (auto& e : exps) e = std::exp(e);
  if (count > 1) {
    exps.front() = lo;
    exps.back() = hi;
  }
  return exps;
}

/// Root of f on [lo, hi] where f(lo) and f(hi) differ in sign (or one is
/// zero). Terminates when the bracket is narrower than abs_tol.
template <class F>
double find_root(F&& f, double lo, double hi, double abs_tol = 1e-12) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) throw NumericalError("find_root: interval does not bracket a root");
  std::uintmax_t max_iter = 200;
  auto tol = [abs_tol](double a, double b) { return std::abs(b - a) <= abs_tol; };
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, max_iter);
  return 0.5 * (a + b);
}

struct Minimum {
  double x;
  double value;
};

/// Golden-section search for a minimum of f on [lo, hi], to an absolute
/// bracket width abs_tol. f is assumed unimodal on the bracket.
template <class F>
Minimum golden_section_minimize(F&& f, double lo, double hi, double abs_tol = 1e-10) {
  constexpr double kInvPhi = 0.61803398874989484820;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200 && (b - a) > abs_tol; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  const double fx = f(x);
  // Keep whichever probe is best; flat minima can make the midpoint worse.
  if (fc < fx && fc <= fd) return {c, fc};
  if (fd < fx) return {d, fd};
  return {x, fx};
}

/// Grid scan over `grid` followed by golden-section refinement around the
/// best grid point. Non-finite values are treated as +inf.
template <class F>
Minimum scan_and_refine(F&& f, const std::vector<double>& grid, double abs_tol = 1e-10) {
  if (grid.empty()) throw ValidationError("scan_and_refine: empty grid");
  std::size_t best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = f(grid[i]);
    if (std::isfinite(v) && v < best_val) {
      best_val = v;
      best = i;
    }
  }
  if (!std::isfinite(best_val)) return {grid[best], best_val};
  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[best + 1 < grid.size() ? best + 1 : best];
  if (hi <= lo) return {grid[best], best_val};
  auto guarded = [&f](double x) {
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  Minimum m = golden_section_minimize(guarded, lo, hi, abs_tol);
  if (m.value <= best_val) return m;
  return {grid[best], best_val};
}

struct Integral {
  double value;
  double error;
};

/// Adaptive 15-point Gauss-Kronrod quadrature on a finite interval.
template <class F>
Integral integrate(F&& f, double lo, double hi, double rel_tol = 1e-10, unsigned max_depth = 15) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, lo, hi, max_depth, rel_tol, &err);
  return {v, err};
}

}  // namespace homodyne::num
