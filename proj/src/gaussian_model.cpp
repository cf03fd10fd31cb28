#include "homodyne/gaussian_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "homodyne/errors.hpp"

namespace homodyne {

namespace {
constexpr double kPi = 3.14159265358979323846;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ValidationError(std::string(what) + " must be finite");
}
}  // namespace

Squeeze Squeeze::from_r(double r) {
  require_finite(r, "squeeze r");
  if (r < 0.0) throw ValidationError("squeeze r must be >= 0");
  return Squeeze(r);
}

Squeeze Squeeze::from_e_minus_r(double e_minus_r) {
  require_finite(e_minus_r, "e^-r");
  if (!(e_minus_r > 0.0) || e_minus_r > 1.0) throw ValidationError("e^-r must lie in (0, 1]");
  return Squeeze(-std::log(e_minus_r));
}

Squeeze Squeeze::from_sinh2r(double sinh2r) {
  require_finite(sinh2r, "sinh^2 r");
  if (sinh2r < 0.0) throw ValidationError("sinh^2 r must be >= 0");
  return Squeeze(std::asinh(std::sqrt(sinh2r)));
}

double Squeeze::e_minus_r() const { return std::exp(-r_); }

double Squeeze::sinh2r() const {
  const double s = std::sinh(r_);
  return s * s;
}

void validate(const InputState& state) {
  require_finite(state.alpha0, "alpha0");
  require_finite(state.r, "squeeze r");
  require_finite(state.purity, "purity");
  if (state.alpha0 < 0.0) throw ValidationError("alpha0 must be >= 0");
  if (state.r < 0.0) throw ValidationError("squeeze r must be >= 0");
  if (!(state.purity > 0.0) || state.purity > 1.0) throw ValidationError("purity must lie in (0, 1]");
}

InputState make_state(double alpha0, Squeeze squeeze, double purity) {
  InputState s{alpha0, squeeze.r(), purity};
  validate(s);
  return s;
}

InputState make_state_with_n_bar(double n_bar, Squeeze squeeze, double purity) {
  require_finite(n_bar, "n_bar");
  const double alpha_sq = n_bar - squeeze.sinh2r();
  // Tolerate round-off when the whole photon budget sits in the squeezed port.
  if (alpha_sq < -1e-12 * std::max(1.0, n_bar)) {
    throw ValidationError("n_bar must be >= sinh^2 r (alpha0^2 = n_bar - sinh^2 r would be negative)");
  }
  return make_state(std::sqrt(std::max(alpha_sq, 0.0)), squeeze, purity);
}

ModelParams derive_params(const InputState& state) {
  validate(state);
  ModelParams p;
  p.alpha0 = state.alpha0;
  p.r = state.r;
  p.purity = state.purity;
  p.nu_tilde = std::exp(2.0 * state.r);
  p.mu_tilde = state.purity * state.purity * std::exp(-2.0 * state.r);
  const double s = std::sinh(state.r);
  p.n_bar = state.alpha0 * state.alpha0 + s * s;
  return p;
}

double eta(const ModelParams& params, double theta) {
  const double mu = params.mu_tilde;
  const double nu = params.nu_tilde;
  // Expanded in u = 1 - cos(theta) so every term is non-negative on [0, 2]:
  //   4 mu nu eta = 4 mu + u [mu (2 nu + u - 4) + nu (2 - u)]
  // The textbook form cancels nu against 2 mu nu near theta = 0 and loses
  // ~log10(nu / mu) digits for strong squeezing.
  const double s = std::sin(0.5 * theta);
  const double u = 2.0 * s * s;
  const double t = mu * (2.0 * nu + u - 4.0) + nu * (2.0 - u);
  return 1.0 / nu + u * t / (4.0 * mu * nu);
}

double eta_derivative(const ModelParams& params, double theta) {
  const double mu = params.mu_tilde;
  const double nu = params.nu_tilde;
  return std::sin(theta) * (mu * (nu - 1.0) - (mu - nu) * std::cos(theta)) / (2.0 * mu * nu);
}

double mean_signal(const ModelParams& params, double theta) { return -0.5 * params.alpha0 * std::sin(theta); }

double quadrature_variance(const ModelParams& params, double theta) { return 0.25 * eta(params, theta); }

double quadrature_pdf(const ModelParams& params, double theta, double p) {
  const double e = eta(params, theta);
  const double d = p - mean_signal(params, theta);
  return std::sqrt(2.0 / (kPi * e)) * std::exp(-2.0 * d * d / e);
}

double continuous_cfi(const ModelParams& params, double theta) {
  const double e = eta(params, theta);
  const double de = eta_derivative(params, theta);
  const double ac = params.alpha0 * std::cos(theta);
  return ac * ac / e + de * de / (2.0 * e * e);
}

CrbMin crb_min(const ModelParams& params) {
  const double f0 = continuous_cfi(params, 0.0);
  CrbMin out;
  out.exact = f0 > 0.0 ? 1.0 / std::sqrt(f0) : std::numeric_limits<double>::infinity();
  out.approx = params.n_bar > 0.0 ? std::exp(-params.r) / std::sqrt(params.n_bar)
                                   : std::numeric_limits<double>::infinity();
  return out;
}

double shot_noise_limit(double n_bar) {
  if (!(n_bar > 0.0)) throw ValidationError("n_bar must be > 0 for the shot-noise limit");
  return 1.0 / std::sqrt(n_bar);
}

}  // namespace homodyne
