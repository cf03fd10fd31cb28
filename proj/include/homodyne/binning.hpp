#pragma once

// Data processing of the homodyne record: the quadrature axis is cut at +-a
// into the outcomes "-" (p < -a), "0" (|p| <= a) and "+" (p > a). The two-bin
// scheme merges "-" and "+" into the single outcome "empty".

#include <array>
#include <cstdint>
#include <string_view>

#include "homodyne/gaussian_model.hpp"

namespace homodyne {

enum class Outcome : int { minus = 0, zero = 1, plus = 2 };

inline constexpr std::array<Outcome, 3> kOutcomes{Outcome::minus, Outcome::zero, Outcome::plus};

inline constexpr std::size_t index(Outcome k) { return static_cast<std::size_t>(k); }
std::string_view to_string(Outcome k);

/// Bin half-width and the eigenvalue attached to each outcome. For the
/// two-bin scheme the "-" and "+" eigenvalues are both mu_empty.
struct BinningScheme {
  double a = 0.1;
  std::array<double, 3> eigenvalues{0.0, 1.0, 0.0};

  static BinningScheme binary(double a, double mu_zero, double mu_empty = 0.0);
  /// mu_zero = 1 / erf(sqrt(2) a e^r), mu_empty = 0: the scaled central-bin
  /// signal equals 1 at theta = 0.
  static BinningScheme scaled_binary(double a, const ModelParams& params);
  static BinningScheme three_outcome(double a, double mu_minus, double mu_zero, double mu_plus);

  double eigenvalue(Outcome k) const { return eigenvalues[index(k)]; }
};

void validate(const BinningScheme& scheme);

struct OutcomeProbs {
  double p_minus = 0.0;
  double p_zero = 0.0;
  double p_plus = 0.0;

  double operator[](Outcome k) const;
  double p_empty() const { return p_minus + p_plus; }
};

/// d P_k / d theta.
struct OutcomeDerivs {
  double dp_minus = 0.0;
  double dp_zero = 0.0;
  double dp_plus = 0.0;

  double operator[](Outcome k) const;
};

struct GPair {
  double g_minus;
  double g_plus;
};

enum class Divergence {
  none,
  zero_slope,        ///< the signal slope vanishes (two-bin scheme at theta = 0)
  zero_information,  ///< total Fisher information is zero
};

std::string_view to_string(Divergence d);

/// A phase sensitivity that is either a positive finite number or an
/// explicit divergence with its cause. Divergent values hold +inf.
struct Sensitivity {
  double value = 0.0;
  Divergence reason = Divergence::none;

  bool divergent() const { return reason != Divergence::none; }
  static Sensitivity finite(double v) { return {v, Divergence::none}; }
  static Sensitivity diverging(Divergence why);
};

/// g_+-(theta) = sqrt(2 / eta) (alpha0 sin(theta) / 2 +- a).
GPair g_pm(const ModelParams& params, const BinningScheme& scheme, double theta);

OutcomeProbs outcome_probs(const ModelParams& params, const BinningScheme& scheme, double theta);
OutcomeDerivs outcome_derivs(const ModelParams& params, const BinningScheme& scheme, double theta);

/// Two-bin Fisher information P0'^2 / (P0 (1 - P0)).
double binary_cfi(const ModelParams& params, const BinningScheme& scheme, double theta);
/// Error-propagation sensitivity sqrt(P0 P_empty) / |P0'|; divergent where P0' = 0
/// or where P0 or P_empty underflows.
Sensitivity binary_sensitivity(const ModelParams& params, const BinningScheme& scheme, double theta);

/// f_k = P_k'^2 / P_k, zero when P_k' = 0. Throws NumericalError when P_k
/// underflows to zero while P_k' is still a normal number.
double per_outcome_cfi(const ModelParams& params, const BinningScheme& scheme, double theta, Outcome k);
std::array<double, 3> per_outcome_cfis(const ModelParams& params, const BinningScheme& scheme, double theta);
double multi_cfi(const ModelParams& params, const BinningScheme& scheme, double theta);

/// Cramer-Rao bound 1 / sqrt(N F) for N shots.
Sensitivity crb_multi(double fisher, std::uint64_t shots);
/// Per-shot sensitivity of the three-outcome measurement, 1 / sqrt(F_mul).
Sensitivity multi_sensitivity(const ModelParams& params, const BinningScheme& scheme, double theta);

/// Averaged signal sum_k mu_k P_k(theta).
double scaled_signal(const ModelParams& params, const BinningScheme& scheme, double theta);

/// Full width at half maximum of the central-bin probability scaled to 1 at
/// theta = 0. Uses only scheme.a. Throws NumericalError when the scaled
/// signal never drops to 1/2 on (0, pi].
double fwhm_scaled_p0(const ModelParams& params, const BinningScheme& scheme);

struct BestSensitivity {
  double theta;
  Sensitivity value;
};

/// Minimum of the two-bin sensitivity over theta in (0, pi/2].
BestSensitivity best_binary_sensitivity(const ModelParams& params, const BinningScheme& scheme);
/// Minimum of the three-outcome per-shot sensitivity over theta in [0, pi/2].
BestSensitivity best_multi_sensitivity(const ModelParams& params, const BinningScheme& scheme);

/// Improvement over the shot-noise limit in decibels, 10 log10(SNL / delta).
double improvement_db(double delta_theta, double n_bar);

/// Scaling exponent -log(delta) / log(n_bar) (0.5 at the shot-noise limit,
/// 1 at the Heisenberg limit).
double scaling_exponent(double delta_theta, double n_bar);

}  // namespace homodyne
