#pragma once

// Shared helpers for the test binaries: seeded parameter draws and slow
// quadrature-based reference values that do not go through the closed-form
// bin probabilities.

#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "homodyne/binning.hpp"
#include "homodyne/gaussian_model.hpp"

namespace support {

using namespace homodyne;

inline constexpr double kPi = 3.14159265358979323846;

struct Draw {
  InputState state;
  ModelParams params;
  double a;
  double theta;
};

/// Reproducible random model configurations.
class ParamGen {
 public:
  explicit ParamGen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  Draw draw(double alpha_max = 20.0, double r_max = 2.0) {
    Draw d;
    d.state = make_state(uniform(0.0, alpha_max), Squeeze::from_r(uniform(0.0, r_max)), uniform(0.2, 1.0));
    d.params = derive_params(d.state);
    d.a = uniform(0.01, 2.0);
    d.theta = uniform(-kPi, kPi);
    return d;
  }

 private:
  std::mt19937_64 rng_;
};

template <class F>
double quad(F f, double lo, double hi) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 20, 1e-13);
}

/// Bin probability by integrating the quadrature density.
inline double numeric_bin_prob(const ModelParams& params, double a, double theta, Outcome k) {
  const double m = mean_signal(params, theta);
  const double sd = std::sqrt(quadrature_variance(params, theta));
  const double lo = m - 14.0 * sd;
  const double hi = m + 14.0 * sd;
  auto pdf = [&](double p) { return quadrature_pdf(params, theta, p); };
  auto clip = [&](double x) { return std::min(hi, std::max(lo, x)); };
  switch (k) {
    case Outcome::minus:
      return quad(pdf, lo, clip(-a));
    case Outcome::zero:
      return quad(pdf, clip(-a), clip(a));
    case Outcome::plus:
      return quad(pdf, clip(a), hi);
  }
  return 0.0;
}

/// d/dtheta of numeric_bin_prob by a central difference.
inline double numeric_bin_deriv(const ModelParams& params, double a, double theta, Outcome k, double h = 1e-5) {
  return (numeric_bin_prob(params, a, theta + h, k) - numeric_bin_prob(params, a, theta - h, k)) / (2.0 * h);
}

/// Fisher information of the unbinned record, int (dP/dtheta)^2 / P dp, with
/// the phase derivative taken by finite differences.
inline double numeric_continuous_cfi(const ModelParams& params, double theta, double h = 1e-5) {
  const double m = mean_signal(params, theta);
  const double sd = std::sqrt(quadrature_variance(params, theta));
  auto integrand = [&](double p) {
    const double p0 = quadrature_pdf(params, theta, p);
    if (p0 <= 0.0) return 0.0;
    const double d = (quadrature_pdf(params, theta + h, p) - quadrature_pdf(params, theta - h, p)) / (2.0 * h);
    return d * d / p0;
  };
  // The difference quotient carries ~1e-11 noise; a tighter tolerance only
  // drives the adaptive rule to its depth limit.
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, m - 12.0 * sd, m + 12.0 * sd, 8,
                                                                         1e-9);
}

}  // namespace support
