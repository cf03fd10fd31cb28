#include "homodyne/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "homodyne/errors.hpp"
#include "homodyne/numerics.hpp"

namespace homodyne {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kHalfPi = 1.5707963267948966;

void validate_window(double lo, double hi, std::size_t points) {
  if (!(lo < hi)) throw ValidationError("search window must satisfy lo < hi");
  if (lo <= -kHalfPi - 1e-15 || hi >= kHalfPi + 1e-15) throw ValidationError("search window must lie within (-pi/2, pi/2)");
  if (points < 3) throw ValidationError("search grid needs at least 3 points");
}

struct GridArgmax {
  std::size_t index;
  double value;
  std::vector<double> grid;
};

GridArgmax scan_likelihood(const CountRecord& counts, const ProbabilityModel& model, const MleOptions& o) {
  validate_window(o.window_lo, o.window_hi, o.grid_points);
  GridArgmax g{0, kNegInf, num::linspace(o.window_lo, o.window_hi, o.grid_points)};
  for (std::size_t i = 0; i < g.grid.size(); ++i) {
    const double v = log_likelihood(counts, model, g.grid[i]);
    if (v > g.value) {
      g.value = v;
      g.index = i;
    }
  }
  return g;
}

int sign_of(double x) { return x < 0.0 ? -1 : 1; }

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::inversion:
      return "inversion";
    case Method::mle:
      return "mle";
    case Method::composite:
      return "composite";
  }
  return "?";
}

ProbabilityModel analytic_model(const ModelParams& params, const BinningScheme& scheme) {
  validate(scheme);
  return [params, scheme](double theta) { return outcome_probs(params, scheme, theta); };
}

CalibrationTable::CalibrationTable(std::vector<double> theta, std::vector<OutcomeProbs> probs)
    : theta_(std::move(theta)), probs_(std::move(probs)) {
  if (theta_.size() < 2 || theta_.size() != probs_.size()) {
    throw ValidationError("calibration table needs >= 2 rows with one probability triple per phase");
  }
  if (!std::is_sorted(theta_.begin(), theta_.end()) ||
      std::adjacent_find(theta_.begin(), theta_.end()) != theta_.end()) {
    throw ValidationError("calibration phases must be strictly increasing");
  }
  for (const OutcomeProbs& p : probs_) {
    for (Outcome k : kOutcomes) {
      if (!(p[k] >= 0.0 && p[k] <= 1.0)) throw ValidationError("calibration probabilities must lie in [0, 1]");
    }
  }
}

OutcomeProbs CalibrationTable::operator()(double theta) const {
  if (theta <= theta_.front()) return probs_.front();
  if (theta >= theta_.back()) return probs_.back();
  const auto it = std::upper_bound(theta_.begin(), theta_.end(), theta);
  const std::size_t hi = static_cast<std::size_t>(it - theta_.begin());
  const std::size_t lo = hi - 1;
  const double w = (theta - theta_[lo]) / (theta_[hi] - theta_[lo]);
  const OutcomeProbs& a = probs_[lo];
  const OutcomeProbs& b = probs_[hi];
  return {a.p_minus + w * (b.p_minus - a.p_minus), a.p_zero + w * (b.p_zero - a.p_zero),
          a.p_plus + w * (b.p_plus - a.p_plus)};
}

double log_likelihood(const CountRecord& counts, const ProbabilityModel& model, double theta) {
  const OutcomeProbs p = model(theta);
  double ll = 0.0;
  for (Outcome k : kOutcomes) {
    const std::uint64_t n = counts.count(k);
    if (n == 0) continue;
    if (!(p[k] > 0.0)) return kNegInf;
    ll += static_cast<double>(n) * std::log(p[k]);
  }
  return ll;
}

double log_likelihood(const CountRecord& counts, const ModelParams& params, const BinningScheme& scheme, double theta) {
  return log_likelihood(counts, analytic_model(params, scheme), theta);
}

EstimateResult mle(const CountRecord& counts, const ProbabilityModel& model, const MleOptions& options) {
  if (counts.n_total == 0) throw ValidationError("count record is empty");
  const GridArgmax g = scan_likelihood(counts, model, options);
  EstimateResult res;
  res.method = Method::mle;
  if (!std::isfinite(g.value)) {
    res.ok = false;
    res.estimate = std::numeric_limits<double>::quiet_NaN();
    return res;
  }
  const std::size_t last = g.grid.size() - 1;
  res.diagnostics.boundary_hit = (g.index == 0 || g.index == last);
  const double lo = g.grid[g.index == 0 ? 0 : g.index - 1];
  const double hi = g.grid[g.index == last ? last : g.index + 1];
  auto neg_ll = [&](double t) {
    const double v = log_likelihood(counts, model, t);
    return std::isfinite(v) ? -v : std::numeric_limits<double>::infinity();
  };
  num::Minimum m = num::golden_section_minimize(neg_ll, lo, hi, options.tolerance);
  if (!(-m.value >= g.value)) m = {g.grid[g.index], -g.value};
  res.ok = true;
  res.estimate = m.x;

  const double h = options.curvature_step;
  const double f0 = log_likelihood(counts, model, m.x);
  const double fp = log_likelihood(counts, model, m.x + h);
  const double fm = log_likelihood(counts, model, m.x - h);
  const double curvature = (fp - 2.0 * f0 + fm) / (h * h);
  if (std::isfinite(curvature)) res.diagnostics.curvature = curvature;
  if (std::isfinite(curvature) && curvature < 0.0) {
    res.sigma = 1.0 / std::sqrt(-curvature);
  } else {
    res.diagnostics.sigma_unavailable = true;
  }
  return res;
}

EstimateResult mle(const CountRecord& counts, const ModelParams& params, const BinningScheme& scheme,
                   const MleOptions& options) {
  return mle(counts, analytic_model(params, scheme), options);
}

double coarse_mle(const CountRecord& counts, const ModelParams& params, const BinningScheme& scheme,
                  const MleOptions& options) {
  const GridArgmax g = scan_likelihood(counts, analytic_model(params, scheme), options);
  return g.grid[g.index];
}

InversionResult invert_outcome(Outcome k, double freq, const ModelParams& params, const BinningScheme& scheme,
                               double seed_theta, int zero_sign, const InversionOptions& options) {
  if (!(freq >= 0.0 && freq <= 1.0)) throw ValidationError("frequency must lie in [0, 1]");
  if (zero_sign != 1 && zero_sign != -1) throw ValidationError("zero_sign must be +1 or -1");
  validate_window(options.window_lo, options.window_hi, options.grid_points);

  const bool central = (k == Outcome::zero);
  const double lo = central ? 0.0 : options.window_lo;
  const double hi = options.window_hi;
  const double target_seed = central ? std::abs(seed_theta) : seed_theta;
  const double sign = central ? static_cast<double>(zero_sign) : 1.0;

  auto residual = [&](double t) { return outcome_probs(params, scheme, t)[k] - freq; };
  const auto grid = num::linspace(lo, hi, options.grid_points);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = residual(grid[i]);

  InversionResult out;
  double best = 0.0;
  double best_dist = std::numeric_limits<double>::infinity();
  auto consider = [&](double root) {
    const double d = std::abs(root - target_seed);
    if (d < best_dist) {
      best_dist = d;
      best = root;
    }
  };
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (values[i] == 0.0) {
      consider(grid[i]);
    } else if (i + 1 < grid.size() && values[i + 1] != 0.0 && std::signbit(values[i]) != std::signbit(values[i + 1])) {
      consider(num::find_root(residual, grid[i], grid[i + 1], options.tolerance));
    }
  }
  if (std::isfinite(best_dist)) {
    out.theta = sign * best;
    return out;
  }

  // No crossing: clamp to the attained extremum if freq lies beyond it.
  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  if (*min_it > 0.0 || *max_it < 0.0) {
    const auto it = (*min_it > 0.0) ? min_it : max_it;
    out.theta = sign * grid[static_cast<std::size_t>(it - values.begin())];
    out.clamped = true;
    return out;
  }
  out.no_bracket = true;
  return out;
}

EstimateResult composite_estimate(const CountRecord& counts, const ModelParams& params, const BinningScheme& scheme,
                                  std::optional<double> seed_theta, const CompositeOptions& options) {
  if (counts.n_total == 0) throw ValidationError("count record is empty");
  if (counts.n_minus + counts.n_zero + counts.n_plus != counts.n_total) {
    throw ValidationError("count record is inconsistent: counts do not sum to n_total");
  }
  const double seed = seed_theta ? *seed_theta : coarse_mle(counts, params, scheme, options.seed);
  int zero_sign = sign_of(seed);
  if (counts.n_minus > counts.n_plus) zero_sign = 1;
  if (counts.n_minus < counts.n_plus) zero_sign = -1;

  EstimateResult res;
  res.method = Method::composite;
  std::array<double, 3> fisher{};
  double total = 0.0;
  std::size_t used = 0;
  for (Outcome k : kOutcomes) {
    const std::uint64_t n = counts.count(k);
    if (n == 0) continue;
    const InversionResult inv = invert_outcome(k, counts.frequency(k), params, scheme, seed, zero_sign, options.inversion);
    if (!inv.theta) continue;
    res.diagnostics.clamped = res.diagnostics.clamped || inv.clamped;
    res.diagnostics.inversions[index(k)] = *inv.theta;
    fisher[index(k)] = per_outcome_cfi(params, scheme, *inv.theta, k);
    total += fisher[index(k)];
    ++used;
  }
  res.diagnostics.outcome_fisher = fisher;
  if (used == 0) {
    res.ok = false;
    res.estimate = std::numeric_limits<double>::quiet_NaN();
    return res;
  }
  double estimate = 0.0;
  for (Outcome k : kOutcomes) {
    const auto& inv = res.diagnostics.inversions[index(k)];
    if (!inv) continue;
    double w;
    if (total > 0.0) {
      w = fisher[index(k)] / total;
    } else {
      w = 1.0 / static_cast<double>(used);
      res.diagnostics.equal_weight_fallback = true;
    }
    res.diagnostics.weights[index(k)] = w;
    estimate += w * *inv;
  }
  res.ok = true;
  res.estimate = estimate;
  return res;
}

EvaluationSummary evaluate(std::span<const double> estimates, double theta_true, std::uint64_t n_shots) {
  if (estimates.size() < 2) throw ValidationError("evaluation needs at least 2 replicas");
  if (n_shots < 1) throw ValidationError("n_shots must be >= 1");
  EvaluationSummary s;
  s.theta_true = theta_true;
  s.replicas = estimates.size();
  const double m = static_cast<double>(estimates.size());
  double sum = 0.0;
  double sq_err = 0.0;
  for (double e : estimates) {
    sum += e;
    sq_err += (e - theta_true) * (e - theta_true);
  }
  s.mean_estimate = sum / m;
  s.bias = s.mean_estimate - theta_true;
  double ss = 0.0;
  for (double e : estimates) ss += (e - s.mean_estimate) * (e - s.mean_estimate);
  s.std_dev = std::sqrt(ss / (m - 1.0));
  s.rmse = std::sqrt(sq_err / m);
  s.per_measurement = std::sqrt(static_cast<double>(n_shots)) * s.rmse;
  return s;
}

}  // namespace homodyne
