#pragma once

// Monte Carlo simulation of homodyne shots and their binning into outcome
// counts.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "homodyne/binning.hpp"
#include "homodyne/gaussian_model.hpp"
#include "homodyne/rng.hpp"

namespace homodyne {

/// Outcome counts of n_total shots taken at the (hidden) phase theta_true.
struct CountRecord {
  std::uint64_t n_minus = 0;
  std::uint64_t n_zero = 0;
  std::uint64_t n_plus = 0;
  std::uint64_t n_total = 0;
  double theta_true = 0.0;

  std::uint64_t count(Outcome k) const;
  double frequency(Outcome k) const;

  friend bool operator==(const CountRecord&, const CountRecord&) = default;
};

/// Build a record from counts; n_total is their sum. Throws ValidationError
/// on zero total.
CountRecord make_counts(std::uint64_t n_minus, std::uint64_t n_zero, std::uint64_t n_plus, double theta_true = 0.0);

struct ReplicaSet {
  std::vector<CountRecord> records;
  std::uint64_t master_seed = 0;
  std::uint64_t n_shots = 0;
  double theta_true = 0.0;
};

/// One homodyne draw from the quadrature distribution at phase theta
/// (inverse-CDF transform of one uniform).
double sample_quadrature(const ModelParams& params, double theta, CounterRng& rng);

/// p < -a -> "-", |p| <= a -> "0", p > a -> "+".
Outcome classify(double p, double a);

CountRecord run_counts(const ModelParams& params, const BinningScheme& scheme, double theta_true,
                       std::uint64_t n_shots, CounterRng& rng);

/// m_replicas independent records; replica i draws from
/// CounterRng(substream_key(master_seed, i)).
ReplicaSet run_replicas(const ModelParams& params, const BinningScheme& scheme, double theta_true,
                        std::uint64_t n_shots, std::uint64_t m_replicas, std::uint64_t master_seed);

struct OutcomeStats {
  std::array<double, 3> mean_frequency{};
  /// Sample standard deviation of N_k / N across replicas; empty for M < 2.
  std::optional<std::array<double, 3>> std_dev;
  std::uint64_t replicas = 0;
};

OutcomeStats empirical_stats(const ReplicaSet& set);

}  // namespace homodyne
