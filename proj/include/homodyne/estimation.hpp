#pragma once

// Phase estimation from outcome counts: per-outcome inversion, multinomial
// maximum likelihood, and the Fisher-weighted composite of the inversions.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "homodyne/binning.hpp"
#include "homodyne/gaussian_model.hpp"
#include "homodyne/sampler.hpp"

namespace homodyne {

enum class Method { inversion, mle, composite };

std::string_view to_string(Method m);

struct EstimateDiagnostics {
  /// Per-outcome inversion estimates (composite); empty where dropped.
  std::array<std::optional<double>, 3> inversions{};
  /// Composite weights c_k; zero for dropped outcomes.
  std::array<double, 3> weights{};
  /// f_k evaluated at the per-outcome inversion.
  std::array<double, 3> outcome_fisher{};
  /// d^2 ln L / d theta^2 at the MLE.
  std::optional<double> curvature;
  bool boundary_hit = false;
  bool sigma_unavailable = false;
  bool clamped = false;
  bool equal_weight_fallback = false;
};

struct EstimateResult {
  bool ok = false;
  double estimate = 0.0;
  std::optional<double> sigma;
  Method method = Method::mle;
  std::optional<Outcome> outcome;  ///< set for Method::inversion
  EstimateDiagnostics diagnostics;
};

/// Outcome probabilities as a function of phase: the analytic model, or an
/// interpolated calibration table.
using ProbabilityModel = std::function<OutcomeProbs(double theta)>;

ProbabilityModel analytic_model(const ModelParams& params, const BinningScheme& scheme);

/// Measured P_k(theta) on a phase grid, linearly interpolated. Outside the
/// grid the end rows are held.
class CalibrationTable {
 public:
  CalibrationTable(std::vector<double> theta, std::vector<OutcomeProbs> probs);

  OutcomeProbs operator()(double theta) const;
  double theta_min() const { return theta_.front(); }
  double theta_max() const { return theta_.back(); }

 private:
  std::vector<double> theta_;
  std::vector<OutcomeProbs> probs_;
};

/// sum_k N_k ln P_k(theta). The multinomial coefficient is dropped. Returns
/// -inf when an observed outcome has zero probability.
double log_likelihood(const CountRecord& counts, const ModelParams& params, const BinningScheme& scheme, double theta);
double log_likelihood(const CountRecord& counts, const ProbabilityModel& model, double theta);

struct MleOptions {
  double window_lo = -0.4;
  double window_hi = 0.4;
  std::size_t grid_points = 2001;
  double tolerance = 1e-9;
  double curvature_step = 1e-4;
};

/// Grid scan plus golden-section refinement of the likelihood; sigma from
/// the log-likelihood curvature, 1 / sqrt(|d^2 ln L / d theta^2|).
EstimateResult mle(const CountRecord& counts, const ModelParams& params, const BinningScheme& scheme,
                   const MleOptions& options = {});
EstimateResult mle(const CountRecord& counts, const ProbabilityModel& model, const MleOptions& options = {});

/// Grid argmax of the likelihood without refinement.
double coarse_mle(const CountRecord& counts, const ModelParams& params, const BinningScheme& scheme,
                  const MleOptions& options = {});

struct InversionOptions {
  double window_lo = -1.5707963267948966;
  double window_hi = 1.5707963267948966;
  std::size_t grid_points = 2001;
  double tolerance = 1e-10;
};

struct InversionResult {
  std::optional<double> theta;
  bool clamped = false;    ///< frequency outside the attained range; theta is the nearest extremum
  bool no_bracket = false;
};

/// Solves P_k(theta) = freq, returning the root nearest seed_theta. The
/// central-bin probability is even in theta, so for k = "0" the root is
/// searched on [0, window_hi] and multiplied by zero_sign (+1 or -1).
InversionResult invert_outcome(Outcome k, double freq, const ModelParams& params, const BinningScheme& scheme,
                               double seed_theta, int zero_sign = +1, const InversionOptions& options = {});

struct CompositeOptions {
  MleOptions seed{};
  InversionOptions inversion{};
};

/// theta_est = sum_k c_k theta_inv_k with c_k proportional to f_k(theta_inv_k).
/// Outcomes with N_k = 0 or a failed inversion are dropped. The seed defaults
/// to the coarse-grid MLE; the sign of the central-bin inversion follows
/// sign(N_minus - N_plus), ties following the seed.
EstimateResult composite_estimate(const CountRecord& counts, const ModelParams& params, const BinningScheme& scheme,
                                  std::optional<double> seed_theta = std::nullopt,
                                  const CompositeOptions& options = {});

struct EvaluationSummary {
  double theta_true = 0.0;
  double mean_estimate = 0.0;
  double bias = 0.0;
  double std_dev = 0.0;          ///< sample standard deviation (M - 1)
  double rmse = 0.0;             ///< sqrt(mean (theta_i - theta_true)^2)
  double per_measurement = 0.0;  ///< sqrt(N) * rmse
  std::size_t replicas = 0;
};

EvaluationSummary evaluate(std::span<const double> estimates, double theta_true, std::uint64_t n_shots);

}  // namespace homodyne
