#include "homodyne/binning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "homodyne/errors.hpp"
#include "homodyne/numerics.hpp"
#include "homodyne/special.hpp"

namespace homodyne {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInvSqrtPi = 0.56418958354775628695;
constexpr double kSqrt2 = 1.41421356237309504880;

// Uniform grid on (0, hi] with a log-spaced prefix reaching down to 1e-7, so
// optima that sit at very small theta (tiny alpha0 or tiny a) are bracketed.
std::vector<double> optimum_grid(double hi, std::size_t uniform_points, bool include_zero) {
  std::vector<double> grid;
  const double step = hi / static_cast<double>(uniform_points);
  if (include_zero) grid.push_back(0.0);
  for (double t : num::logspace(1e-7, step, 64)) {
    if (t < step) grid.push_back(t);
  }
  for (std::size_t i = 1; i <= uniform_points; ++i) grid.push_back(step * static_cast<double>(i));
  grid.back() = hi;
  return grid;
}

struct GState {
  double g_minus;
  double g_plus;
  double dg_minus;
  double dg_plus;
};

GState g_state(const ModelParams& params, double a, double theta) {
  const double e = eta(params, theta);
  const double de = eta_derivative(params, theta);
  const double k = std::sqrt(2.0 / e);
  const double shift = 0.5 * params.alpha0 * std::sin(theta);
  const double dshift = 0.5 * params.alpha0 * std::cos(theta);
  GState s{};
  s.g_minus = k * (shift - a);
  s.g_plus = k * (shift + a);
  const double stretch = de / (2.0 * e);
  s.dg_minus = k * dshift - s.g_minus * stretch;
  s.dg_plus = k * dshift - s.g_plus * stretch;
  return s;
}

// (1/sqrt(pi)) exp(-g^2) g' : derivative of erf(g)/2. Exactly zero at an
// infinite edge (a -> infinity).
double edge_flux(double g, double dg) {
  if (!std::isfinite(g)) return 0.0;
  return kInvSqrtPi * std::exp(-g * g) * dg;
}

double fisher_term(double p, double dp) {
  if (dp == 0.0) return 0.0;
  if (p <= 0.0) {
    if (std::abs(dp) < std::numeric_limits<double>::min()) return 0.0;
    throw NumericalError("outcome probability underflowed to zero with non-zero slope");
  }
  return dp * (dp / p);
}

}  // namespace

std::string_view to_string(Outcome k) {
  switch (k) {
    case Outcome::minus:
      return "minus";
    case Outcome::zero:
      return "zero";
    case Outcome::plus:
      return "plus";
  }
  return "?";
}

std::string_view to_string(Divergence d) {
  switch (d) {
    case Divergence::none:
      return "none";
    case Divergence::zero_slope:
      return "zero_slope";
    case Divergence::zero_information:
      return "zero_information";
  }
  return "?";
}

Sensitivity Sensitivity::diverging(Divergence why) { return {kInf, why}; }

BinningScheme BinningScheme::binary(double a, double mu_zero, double mu_empty) {
  BinningScheme s{a, {mu_empty, mu_zero, mu_empty}};
  validate(s);
  return s;
}

BinningScheme BinningScheme::scaled_binary(double a, const ModelParams& params) {
  if (!(a > 0.0) || !std::isfinite(a)) throw ValidationError("bin half-width a must be finite and > 0");
  return binary(a, 1.0 / homodyne::erf(kSqrt2 * a * std::exp(params.r)), 0.0);
}

BinningScheme BinningScheme::three_outcome(double a, double mu_minus, double mu_zero, double mu_plus) {
  BinningScheme s{a, {mu_minus, mu_zero, mu_plus}};
  validate(s);
  return s;
}

void validate(const BinningScheme& scheme) {
  if (!(scheme.a > 0.0) || !std::isfinite(scheme.a)) throw ValidationError("bin half-width a must be finite and > 0");
  for (double mu : scheme.eigenvalues) {
    if (!std::isfinite(mu)) throw ValidationError("outcome eigenvalues must be finite");
  }
}

double OutcomeProbs::operator[](Outcome k) const {
  switch (k) {
    case Outcome::minus:
      return p_minus;
    case Outcome::zero:
      return p_zero;
    case Outcome::plus:
      return p_plus;
  }
  return 0.0;
}

double OutcomeDerivs::operator[](Outcome k) const {
  switch (k) {
    case Outcome::minus:
      return dp_minus;
    case Outcome::zero:
      return dp_zero;
    case Outcome::plus:
      return dp_plus;
  }
  return 0.0;
}

GPair g_pm(const ModelParams& params, const BinningScheme& scheme, double theta) {
  const GState s = g_state(params, scheme.a, theta);
  return {s.g_minus, s.g_plus};
}

OutcomeProbs outcome_probs(const ModelParams& params, const BinningScheme& scheme, double theta) {
  const GState s = g_state(params, scheme.a, theta);
  OutcomeProbs out;
  out.p_minus = 0.5 * homodyne::erfc(-s.g_minus);
  out.p_zero = 0.5 * erf_diff(s.g_minus, s.g_plus);
  out.p_plus = 0.5 * homodyne::erfc(s.g_plus);
  return out;
}

OutcomeDerivs outcome_derivs(const ModelParams& params, const BinningScheme& scheme, double theta) {
  const GState s = g_state(params, scheme.a, theta);
  const double lower = edge_flux(s.g_minus, s.dg_minus);
  const double upper = edge_flux(s.g_plus, s.dg_plus);
  OutcomeDerivs out;
  out.dp_minus = lower;
  out.dp_zero = upper - lower;
  out.dp_plus = -upper;
  return out;
}

double binary_cfi(const ModelParams& params, const BinningScheme& scheme, double theta) {
  const OutcomeProbs p = outcome_probs(params, scheme, theta);
  const OutcomeDerivs d = outcome_derivs(params, scheme, theta);
  // P_empty' = -P0', so both terms share the numerator.
  return fisher_term(p.p_zero, d.dp_zero) + fisher_term(p.p_empty(), d.dp_zero);
}

Sensitivity binary_sensitivity(const ModelParams& params, const BinningScheme& scheme, double theta) {
  const OutcomeProbs p = outcome_probs(params, scheme, theta);
  const OutcomeDerivs d = outcome_derivs(params, scheme, theta);
  if (d.dp_zero == 0.0) return Sensitivity::diverging(Divergence::zero_slope);
  // One of the two outcomes has underflowed: the record carries no usable
  // signal there, and the ratio below would collapse to 0.
  const double spread = std::sqrt(p.p_zero) * std::sqrt(p.p_empty());
  if (!(spread > 0.0)) return Sensitivity::diverging(Divergence::zero_information);
  return Sensitivity::finite(spread / std::abs(d.dp_zero));
}

double per_outcome_cfi(const ModelParams& params, const BinningScheme& scheme, double theta, Outcome k) {
  const OutcomeProbs p = outcome_probs(params, scheme, theta);
  const OutcomeDerivs d = outcome_derivs(params, scheme, theta);
  return fisher_term(p[k], d[k]);
}

std::array<double, 3> per_outcome_cfis(const ModelParams& params, const BinningScheme& scheme, double theta) {
  const OutcomeProbs p = outcome_probs(params, scheme, theta);
  const OutcomeDerivs d = outcome_derivs(params, scheme, theta);
  return {fisher_term(p.p_minus, d.dp_minus), fisher_term(p.p_zero, d.dp_zero), fisher_term(p.p_plus, d.dp_plus)};
}

double multi_cfi(const ModelParams& params, const BinningScheme& scheme, double theta) {
  const auto f = per_outcome_cfis(params, scheme, theta);
  return f[0] + f[1] + f[2];
}

Sensitivity crb_multi(double fisher, std::uint64_t shots) {
  if (shots < 1) throw ValidationError("number of shots must be >= 1");
  if (!(fisher >= 0.0)) throw ValidationError("Fisher information must be >= 0");
  if (fisher == 0.0) return Sensitivity::diverging(Divergence::zero_information);
  return Sensitivity::finite(1.0 / std::sqrt(static_cast<double>(shots) * fisher));
}

Sensitivity multi_sensitivity(const ModelParams& params, const BinningScheme& scheme, double theta) {
  return crb_multi(multi_cfi(params, scheme, theta), 1);
}

double scaled_signal(const ModelParams& params, const BinningScheme& scheme, double theta) {
  const OutcomeProbs p = outcome_probs(params, scheme, theta);
  return scheme.eigenvalues[0] * p.p_minus + scheme.eigenvalues[1] * p.p_zero + scheme.eigenvalues[2] * p.p_plus;
}

double fwhm_scaled_p0(const ModelParams& params, const BinningScheme& scheme) {
  validate(scheme);
  const BinningScheme scaled = BinningScheme::scaled_binary(scheme.a, params);
  auto excess = [&](double theta) { return scaled_signal(params, scaled, theta) - 0.5; };

  // First crossing of the half level walking away from the peak.
  const auto grid = optimum_grid(num::kPi, 4096, false);
  double lo = 0.0;
  for (double t : grid) {
    if (excess(t) <= 0.0) return 2.0 * num::find_root(excess, lo, t, 1e-12);
    lo = t;
  }
  throw NumericalError("fringe-resolution failure: scaled central-bin signal never falls to half maximum on (0, pi]");
}

BestSensitivity best_binary_sensitivity(const ModelParams& params, const BinningScheme& scheme) {
  validate(scheme);
  auto f = [&](double theta) {
    const Sensitivity s = binary_sensitivity(params, scheme, theta);
    return s.divergent() ? kInf : s.value;
  };
  const num::Minimum m = num::scan_and_refine(f, optimum_grid(num::kPi / 2.0, 2001, false), 1e-10);
  if (!std::isfinite(m.value)) return {m.x, Sensitivity::diverging(Divergence::zero_slope)};
  return {m.x, Sensitivity::finite(m.value)};
}

BestSensitivity best_multi_sensitivity(const ModelParams& params, const BinningScheme& scheme) {
  validate(scheme);
  auto f = [&](double theta) {
    const double fm = multi_cfi(params, scheme, theta);
    return fm > 0.0 ? 1.0 / std::sqrt(fm) : kInf;
  };
  const num::Minimum m = num::scan_and_refine(f, optimum_grid(num::kPi / 2.0, 2001, true), 1e-10);
  if (!std::isfinite(m.value)) return {m.x, Sensitivity::diverging(Divergence::zero_information)};
  return {m.x, Sensitivity::finite(m.value)};
}

double improvement_db(double delta_theta, double n_bar) {
  if (!(delta_theta > 0.0)) throw ValidationError("sensitivity must be > 0");
  return 10.0 * std::log10(shot_noise_limit(n_bar) / delta_theta);
}

double scaling_exponent(double delta_theta, double n_bar) {
  if (!(delta_theta > 0.0)) throw ValidationError("sensitivity must be > 0");
  if (!(n_bar > 1.0)) throw ValidationError("scaling exponent needs n_bar > 1");
  return -std::log(delta_theta) / std::log(n_bar);
}

}  // namespace homodyne
