#include <doctest.h>

#include <cmath>
#include <vector>

#include "homodyne/errors.hpp"
#include "homodyne/estimation.hpp"
#include "homodyne/numerics.hpp"
#include "test_support.hpp"

using namespace homodyne;

namespace {

ModelParams fig4_params() { return derive_params(make_state(std::sqrt(42.0), Squeeze::from_sinh2r(0.687), 0.58)); }

/// Counts whose frequencies equal P_k(theta) to ~1e-12.
CountRecord noiseless_counts(const ModelParams& p, const BinningScheme& s, double theta) {
  const double n = 1e12;
  const OutcomeProbs q = outcome_probs(p, s, theta);
  return make_counts(static_cast<std::uint64_t>(std::llround(n * q.p_minus)),
                     static_cast<std::uint64_t>(std::llround(n * q.p_zero)),
                     static_cast<std::uint64_t>(std::llround(n * q.p_plus)), theta);
}

double log_multinomial(const CountRecord& c, const OutcomeProbs& q) {
  double v = std::lgamma(double(c.n_total) + 1);
  for (Outcome k : kOutcomes) {
    const double n = double(c.count(k));
    v -= std::lgamma(n + 1);
    if (n > 0) v += n * std::log(q[k]);
  }
  return v;
}

}  // namespace

TEST_CASE("log-likelihood") {
  const ModelParams p = fig4_params();
  const BinningScheme s = BinningScheme::scaled_binary(0.1, p);
  SUBCASE("flat when everything lands in an infinitely wide bin") {
    const BinningScheme wide = BinningScheme::binary(1e3, 1.0);
    const CountRecord c = make_counts(0, 100, 0);
    for (double t : {-0.3, 0.0, 0.2}) CHECK(log_likelihood(c, p, wide, t) == 0.0);
  }
  SUBCASE("impossible outcome") {
    const BinningScheme wide = BinningScheme::binary(1e3, 1.0);
    CHECK(log_likelihood(make_counts(1, 10, 0), p, wide, 0.1) == -std::numeric_limits<double>::infinity());
  }
  SUBCASE("brute-force multinomial at N = 5") {
    for (double t1 : {-0.2, 0.05}) {
      for (double t2 : {-0.1, 0.15}) {
        const OutcomeProbs q1 = outcome_probs(p, s, t1);
        const OutcomeProbs q2 = outcome_probs(p, s, t2);
        double total = 0.0;
        for (std::uint64_t a = 0; a <= 5; ++a) {
          for (std::uint64_t b = 0; a + b <= 5; ++b) {
            const CountRecord c = make_counts(a, b, 5 - a - b);
            total += std::exp(log_multinomial(c, q1));
            const double ratio = std::exp(log_likelihood(c, p, s, t1) - log_likelihood(c, p, s, t2));
            CHECK(ratio == doctest::Approx(std::exp(log_multinomial(c, q1) - log_multinomial(c, q2))).epsilon(1e-10));
          }
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("maximum likelihood") {
  const ModelParams p = fig4_params();
  const BinningScheme s = BinningScheme::scaled_binary(0.1, p);
  SUBCASE("consistency with noiseless frequencies") {
    for (double t = -0.24; t <= 0.24; t += 0.03) {
      const EstimateResult r = mle(noiseless_counts(p, s, t), p, s);
      CAPTURE(t);
      REQUIRE(r.ok);
      CHECK(std::abs(r.estimate - t) < 1e-6);
      CHECK_FALSE(r.diagnostics.boundary_hit);
      REQUIRE(r.sigma.has_value());
      CHECK(*r.sigma > 0.0);
    }
  }
  SUBCASE("sigma approaches the Cramer-Rao bound for noiseless frequencies") {
    const CountRecord c = noiseless_counts(p, s, 0.1);
    MleOptions o;
    o.curvature_step = 1e-6;
    const EstimateResult r = mle(c, p, s, o);
    const double crb = 1.0 / std::sqrt(double(c.n_total) * multi_cfi(p, s, 0.1));
    CHECK(*r.sigma == doctest::Approx(crb).epsilon(1e-3));
  }
  SUBCASE("boundary hit") {
    const CountRecord c = noiseless_counts(p, s, 0.6);
    const EstimateResult r = mle(c, p, s);
    CHECK(r.diagnostics.boundary_hit);
  }
  SUBCASE("flat likelihood has no sigma") {
    const BinningScheme wide = BinningScheme::binary(1e3, 1.0);
    const EstimateResult r = mle(make_counts(0, 100, 0), p, wide);
    CHECK(r.ok);
    CHECK(r.diagnostics.sigma_unavailable);
    CHECK_FALSE(r.sigma.has_value());
  }
  SUBCASE("window validation") {
    MleOptions o;
    o.window_lo = -2.0;
    CHECK_THROWS_AS(mle(make_counts(1, 1, 1), p, s, o), ValidationError);
    o = {};
    o.grid_points = 2;
    CHECK_THROWS_AS(mle(make_counts(1, 1, 1), p, s, o), ValidationError);
  }
  SUBCASE("calibration table") {
    const auto grid = num::linspace(-0.45, 0.45, 4001);
    std::vector<OutcomeProbs> probs;
    for (double t : grid) probs.push_back(outcome_probs(p, s, t));
    const CalibrationTable table(grid, probs);
    const CountRecord c = noiseless_counts(p, s, -0.13);
    const EstimateResult r = mle(c, ProbabilityModel(table));
    CHECK(std::abs(r.estimate + 0.13) < 1e-5);
    CHECK_THROWS_AS(CalibrationTable({0.1, 0.0}, {probs[0], probs[1]}), ValidationError);
    CHECK_THROWS_AS(CalibrationTable({0.0}, {probs[0]}), ValidationError);
  }
}

TEST_CASE("per-outcome inversion") {
  const ModelParams p = fig4_params();
  const BinningScheme s = BinningScheme::scaled_binary(0.1, p);
  SUBCASE("outer outcomes invert exactly") {
    for (double t : {-0.2, -0.05, 0.1, 0.25}) {
      for (Outcome k : {Outcome::minus, Outcome::plus}) {
        const double f = outcome_probs(p, s, t)[k];
        const InversionResult r = invert_outcome(k, f, p, s, t + 0.01);
        REQUIRE(r.theta.has_value());
        CHECK(std::abs(*r.theta - t) < 1e-8);
        CHECK_FALSE(r.clamped);
      }
    }
  }
  SUBCASE("central outcome takes its sign from the caller") {
    const double f = outcome_probs(p, s, 0.12)[Outcome::zero];
    const InversionResult pos = invert_outcome(Outcome::zero, f, p, s, 0.1, +1);
    const InversionResult neg = invert_outcome(Outcome::zero, f, p, s, 0.1, -1);
    CHECK(*pos.theta == doctest::Approx(0.12).epsilon(1e-8));
    CHECK(*neg.theta == doctest::Approx(-0.12).epsilon(1e-8));
  }
  SUBCASE("unreachable frequency is clamped") {
    const InversionResult r = invert_outcome(Outcome::zero, 1.0, p, s, 0.1);
    CHECK(r.clamped);
    REQUIRE(r.theta.has_value());
    CHECK(*r.theta == 0.0);
  }
  CHECK_THROWS_AS(invert_outcome(Outcome::plus, 1.2, p, s, 0.0), ValidationError);
  CHECK_THROWS_AS(invert_outcome(Outcome::zero, 0.2, p, s, 0.0, 0), ValidationError);
}

TEST_CASE("composite estimator") {
  const ModelParams p = fig4_params();
  const BinningScheme s = BinningScheme::scaled_binary(0.1, p);
  SUBCASE("noiseless frequencies") {
    for (double t : {-0.2, -0.07, 0.03, 0.15}) {
      const EstimateResult r = composite_estimate(noiseless_counts(p, s, t), p, s);
      CAPTURE(t);
      REQUIRE(r.ok);
      CHECK(std::abs(r.estimate - t) < 1e-6);
      double sum = 0.0;
      for (double w : r.diagnostics.weights) {
        CHECK(w >= 0.0);
        sum += w;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
    }
  }
  SUBCASE("central-bin sign follows the outer imbalance") {
    const CountRecord c = noiseless_counts(p, s, 0.1);
    CHECK(c.n_minus > c.n_plus);
    const EstimateResult r = composite_estimate(c, p, s, -0.1);
    CHECK(*r.diagnostics.inversions[index(Outcome::zero)] > 0.0);
  }
  SUBCASE("empty outcomes are dropped") {
    const EstimateResult r = composite_estimate(make_counts(0, 300, 700), p, s);
    REQUIRE(r.ok);
    CHECK_FALSE(r.diagnostics.inversions[index(Outcome::minus)].has_value());
    CHECK(r.diagnostics.weights[index(Outcome::minus)] == 0.0);
  }
  SUBCASE("dominant central-bin information") {
    // Far out on the fringe with a moderate bin nearly all the information
    // sits in the central outcome.
    const ModelParams q = derive_params(make_state(6.5, Squeeze::from_r(0.8), 1.0));
    const BinningScheme bins = BinningScheme::binary(0.5, 1.0);
    const CountRecord c = noiseless_counts(q, bins, 0.9);
    const EstimateResult r = composite_estimate(c, q, bins, 0.9);
    REQUIRE(r.ok);
    CHECK(r.diagnostics.weights[index(Outcome::zero)] > 0.99);
    CHECK(std::abs(r.estimate - *r.diagnostics.inversions[index(Outcome::zero)]) < 1e-6);
  }
}

TEST_CASE("evaluation summary") {
  SUBCASE("perfect estimates") {
    const std::vector<double> e(10, 0.1);
    const EvaluationSummary s = evaluate(e, 0.1, 1000);
    CHECK(s.rmse < 1e-16);
    CHECK(std::abs(s.bias) < 1e-16);
  }
  SUBCASE("alternating errors") {
    std::vector<double> e;
    for (int i = 0; i < 10; ++i) e.push_back(0.2 + (i % 2 ? 0.01 : -0.01));
    const EvaluationSummary s = evaluate(e, 0.2, 100);
    CHECK(s.rmse == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(s.per_measurement == doctest::Approx(0.1).epsilon(1e-12));
  }
  SUBCASE("rmse decomposition") {
    support::ParamGen gen(3);
    std::vector<double> e;
    for (int i = 0; i < 37; ++i) e.push_back(gen.uniform(-0.1, 0.3));
    const EvaluationSummary s = evaluate(e, 0.05, 10);
    const double m = double(e.size());
    CHECK(s.rmse * s.rmse == doctest::Approx(s.bias * s.bias + s.std_dev * s.std_dev * (m - 1) / m).epsilon(1e-12));
  }
  CHECK_THROWS_AS(evaluate(std::vector<double>{0.1}, 0.1, 10), ValidationError);
}
