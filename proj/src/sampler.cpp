#include "homodyne/sampler.hpp"

#include <cmath>

#include "homodyne/errors.hpp"
#include "homodyne/parallel.hpp"
#include "homodyne/special.hpp"

namespace homodyne {

std::uint64_t CountRecord::count(Outcome k) const {
  switch (k) {
    case Outcome::minus:
      return n_minus;
    case Outcome::zero:
      return n_zero;
    case Outcome::plus:
      return n_plus;
  }
  return 0;
}

double CountRecord::frequency(Outcome k) const {
  return n_total == 0 ? 0.0 : static_cast<double>(count(k)) / static_cast<double>(n_total);
}

CountRecord make_counts(std::uint64_t n_minus, std::uint64_t n_zero, std::uint64_t n_plus, double theta_true) {
  CountRecord c{n_minus, n_zero, n_plus, n_minus + n_zero + n_plus, theta_true};
  if (c.n_total == 0) throw ValidationError("count record needs at least one shot");
  return c;
}

double sample_quadrature(const ModelParams& params, double theta, CounterRng& rng) {
  const double sd = std::sqrt(quadrature_variance(params, theta));
  return mean_signal(params, theta) + sd * normal_quantile(rng.uniform_open());
}

Outcome classify(double p, double a) {
  if (p < -a) return Outcome::minus;
  if (p > a) return Outcome::plus;
  return Outcome::zero;
}

CountRecord run_counts(const ModelParams& params, const BinningScheme& scheme, double theta_true,
                       std::uint64_t n_shots, CounterRng& rng) {
  if (n_shots < 1) throw ValidationError("n_shots must be >= 1");
  validate(scheme);
  // Mean and spread are fixed for the whole batch.
  const double mean = mean_signal(params, theta_true);
  const double sd = std::sqrt(quadrature_variance(params, theta_true));
  CountRecord rec;
  rec.n_total = n_shots;
  rec.theta_true = theta_true;
  for (std::uint64_t i = 0; i < n_shots; ++i) {
    const double p = mean + sd * normal_quantile(rng.uniform_open());
    switch (classify(p, scheme.a)) {
      case Outcome::minus:
        ++rec.n_minus;
        break;
      case Outcome::zero:
        ++rec.n_zero;
        break;
      case Outcome::plus:
        ++rec.n_plus;
        break;
    }
  }
  return rec;
}

ReplicaSet run_replicas(const ModelParams& params, const BinningScheme& scheme, double theta_true,
                        std::uint64_t n_shots, std::uint64_t m_replicas, std::uint64_t master_seed) {
  if (m_replicas < 1) throw ValidationError("m_replicas must be >= 1");
  if (n_shots < 1) throw ValidationError("n_shots must be >= 1");
  ReplicaSet set;
  set.master_seed = master_seed;
  set.n_shots = n_shots;
  set.theta_true = theta_true;
  set.records.resize(m_replicas);
  parallel_for(m_replicas, [&](std::size_t i) {
    CounterRng rng(substream_key(master_seed, i));
    set.records[i] = run_counts(params, scheme, theta_true, n_shots, rng);
  });
  return set;
}

OutcomeStats empirical_stats(const ReplicaSet& set) {
  if (set.records.empty()) throw ValidationError("replica set is empty");
  OutcomeStats st;
  st.replicas = set.records.size();
  const double m = static_cast<double>(st.replicas);
  for (const CountRecord& rec : set.records) {
    for (Outcome k : kOutcomes) st.mean_frequency[index(k)] += rec.frequency(k) / m;
  }
  if (st.replicas >= 2) {
    std::array<double, 3> ss{};
    for (const CountRecord& rec : set.records) {
      for (Outcome k : kOutcomes) {
        const double d = rec.frequency(k) - st.mean_frequency[index(k)];
        ss[index(k)] += d * d;
      }
    }
    std::array<double, 3> sd{};
    for (std::size_t k = 0; k < 3; ++k) sd[k] = std::sqrt(ss[k] / (m - 1.0));
    st.std_dev = sd;
  }
  return st;
}

}  // namespace homodyne
