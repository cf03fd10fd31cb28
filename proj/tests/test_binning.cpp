#include <doctest.h>

#include <cmath>

#include "homodyne/binning.hpp"
#include "homodyne/errors.hpp"
#include "test_support.hpp"

using namespace homodyne;
using support::kPi;

namespace {

ModelParams fig3_params(double n_bar) {
  return derive_params(make_state_with_n_bar(n_bar, Squeeze::from_sinh2r(0.687), 0.58));
}

}  // namespace

TEST_CASE("bin edges in units of the quadrature spread") {
  const ModelParams p = derive_params(make_state(3.0, Squeeze::from_r(0.6), 0.8));
  const BinningScheme s = BinningScheme::binary(0.3, 1.0);
  const GPair g0 = g_pm(p, s, 0.0);
  CHECK(g0.g_plus == doctest::Approx(0.3 * std::sqrt(2.0) * std::exp(0.6)).epsilon(1e-13));
  CHECK(g0.g_minus == doctest::Approx(-g0.g_plus).epsilon(1e-15));

  const ModelParams coh = derive_params(make_state(3.0, Squeeze::from_r(0.0), 1.0));
  const GPair g = g_pm(coh, s, kPi / 2);
  CHECK(g.g_plus == doctest::Approx(std::sqrt(2.0) * (1.5 + 0.3)).epsilon(1e-13));
  CHECK(g.g_minus == doctest::Approx(std::sqrt(2.0) * (1.5 - 0.3)).epsilon(1e-13));

  const GPair narrow = g_pm(p, BinningScheme::binary(1e-9, 1.0), 0.4);
  CHECK(narrow.g_plus - narrow.g_minus < 1e-8);
  CHECK(narrow.g_plus > narrow.g_minus);
}

TEST_CASE("scheme validation") {
  CHECK_THROWS_AS(BinningScheme::binary(0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(BinningScheme::binary(-1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(BinningScheme::three_outcome(0.1, 0.0, NAN, 0.0), ValidationError);
  const ModelParams p = fig3_params(100);
  const BinningScheme s = BinningScheme::scaled_binary(0.1, p);
  CHECK(s.eigenvalue(Outcome::zero) == doctest::Approx(1.0 / std::erf(std::sqrt(2.0) * 0.1 * std::exp(p.r))));
  CHECK(s.eigenvalue(Outcome::minus) == 0.0);
  CHECK(s.eigenvalue(Outcome::plus) == 0.0);
}

TEST_CASE("outcome probabilities") {
  SUBCASE("theta = 0") {
    const ModelParams p = derive_params(make_state(5.0, Squeeze::from_r(0.9), 0.6));
    const OutcomeProbs q = outcome_probs(p, BinningScheme::binary(0.2, 1.0), 0.0);
    const double p0 = std::erf(std::sqrt(2.0) * 0.2 * std::exp(0.9));
    CHECK(q.p_zero == doctest::Approx(p0).epsilon(1e-14));
    CHECK(q.p_plus == doctest::Approx((1 - p0) / 2).epsilon(1e-13));
    CHECK(q.p_minus == doctest::Approx((1 - p0) / 2).epsilon(1e-13));
  }
  SUBCASE("very wide bin") {
    const ModelParams p = derive_params(make_state(5.0, Squeeze::from_r(0.9), 0.6));
    const OutcomeProbs q = outcome_probs(p, BinningScheme::binary(1e3, 1.0), 0.7);
    CHECK(q.p_zero == 1.0);
    CHECK(q.p_plus == 0.0);
    CHECK(q.p_minus == 0.0);
  }
  SUBCASE("normalization, symmetry and range on random draws") {
    support::ParamGen gen(21);
    for (int i = 0; i < 2000; ++i) {
      const auto d = gen.draw();
      const BinningScheme s = BinningScheme::binary(d.a, 1.0);
      const OutcomeProbs q = outcome_probs(d.params, s, d.theta);
      const OutcomeProbs m = outcome_probs(d.params, s, -d.theta);
      CHECK(std::abs(q.p_minus + q.p_zero + q.p_plus - 1.0) <= 1e-12);
      for (Outcome k : kOutcomes) {
        CHECK(q[k] >= 0.0);
        CHECK(q[k] <= 1.0);
      }
      CHECK(q.p_zero == m.p_zero);
      CHECK(q.p_plus == m.p_minus);
    }
  }
  SUBCASE("bin-wise quadrature oracle") {
    support::ParamGen gen(22);
    for (int i = 0; i < 5; ++i) {
      const auto d = gen.draw(10.0, 1.2);
      for (double a : {0.05, 0.3, 1.0}) {
        for (int j = 0; j <= 12; ++j) {
          const double t = -kPi + 2 * kPi * j / 12.0;
          const OutcomeProbs q = outcome_probs(d.params, BinningScheme::binary(a, 1.0), t);
          for (Outcome k : kOutcomes) {
            CAPTURE(t);
            CHECK(std::abs(q[k] - support::numeric_bin_prob(d.params, a, t, k)) < 1e-9);
          }
        }
      }
    }
  }
}

TEST_CASE("outcome derivatives") {
  SUBCASE("theta = 0") {
    const ModelParams p = derive_params(make_state(5.0, Squeeze::from_r(0.9), 0.6));
    const OutcomeDerivs d = outcome_derivs(p, BinningScheme::binary(0.2, 1.0), 0.0);
    CHECK(d.dp_zero == 0.0);
    CHECK(d.dp_plus < 0.0);
    CHECK(d.dp_plus == doctest::Approx(-d.dp_minus).epsilon(1e-14));
  }
  SUBCASE("finite differences and conservation") {
    support::ParamGen gen(23);
    double worst = 0.0;
    for (int i = 0; i < 400; ++i) {
      const auto d = gen.draw(10.0, 1.5);
      const BinningScheme s = BinningScheme::binary(d.a, 1.0);
      const OutcomeDerivs der = outcome_derivs(d.params, s, d.theta);
      CHECK(std::abs(der.dp_minus + der.dp_zero + der.dp_plus) <= 1e-10);
      const double h = 1e-6;
      const OutcomeProbs up = outcome_probs(d.params, s, d.theta + h);
      const OutcomeProbs dn = outcome_probs(d.params, s, d.theta - h);
      for (Outcome k : kOutcomes) worst = std::max(worst, std::abs(der[k] - (up[k] - dn[k]) / (2 * h)));
    }
    CHECK(worst < 1e-6);
  }
  SUBCASE("bin-wise quadrature oracle of the slope") {
    const ModelParams p = derive_params(make_state(3.0, Squeeze::from_r(0.5), 0.7));
    for (double t : {-1.0, -0.2, 0.05, 0.6, 2.0}) {
      const OutcomeDerivs d = outcome_derivs(p, BinningScheme::binary(0.25, 1.0), t);
      for (Outcome k : kOutcomes) CHECK(std::abs(d[k] - support::numeric_bin_deriv(p, 0.25, t, k)) < 1e-6);
    }
  }
}

TEST_CASE("two-bin sensitivity") {
  const ModelParams p = derive_params(make_state(std::sqrt(199.3), Squeeze::from_sinh2r(0.7), 1.0));
  const BinningScheme s = BinningScheme::scaled_binary(0.1, p);
  const Sensitivity at0 = binary_sensitivity(p, s, 0.0);
  CHECK(at0.divergent());
  CHECK(at0.reason == Divergence::zero_slope);
  CHECK(std::isinf(at0.value));
  CHECK(binary_cfi(p, s, 0.0) == 0.0);
  CHECK(binary_sensitivity(p, s, 1e-4).value > binary_sensitivity(p, s, 1e-2).value);

  support::ParamGen gen(24);
  for (int i = 0; i < 1000; ++i) {
    const auto d = gen.draw();
    const BinningScheme b = BinningScheme::binary(d.a, 1.0);
    const Sensitivity sens = binary_sensitivity(d.params, b, d.theta);
    if (sens.divergent()) continue;
    CHECK(sens.value * std::sqrt(binary_cfi(d.params, b, d.theta)) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("three-outcome information") {
  const ModelParams p = derive_params(make_state(std::sqrt(42.0), Squeeze::from_sinh2r(0.687), 0.58));
  const BinningScheme s = BinningScheme::scaled_binary(0.1, p);
  const auto f0 = per_outcome_cfis(p, s, 0.0);
  CHECK(f0[index(Outcome::zero)] == 0.0);
  CHECK(f0[index(Outcome::plus)] > 0.0);
  CHECK(f0[index(Outcome::plus)] == doctest::Approx(f0[index(Outcome::minus)]).epsilon(1e-14));
  CHECK(multi_cfi(p, s, 0.0) == doctest::Approx(f0[0] + f0[1] + f0[2]));
  CHECK_FALSE(multi_sensitivity(p, s, 0.0).divergent());
  CHECK(crb_multi(multi_cfi(p, s, 0.0), 100).value ==
        doctest::Approx(multi_sensitivity(p, s, 0.0).value / 10.0).epsilon(1e-14));
  CHECK(crb_multi(0.0, 10).reason == Divergence::zero_information);

  SUBCASE("information chain on random draws") {
    support::ParamGen gen(25);
    for (int i = 0; i < 1000; ++i) {
      const auto d = gen.draw();
      const BinningScheme b = BinningScheme::binary(d.a, 1.0);
      const double fb = binary_cfi(d.params, b, d.theta);
      const double fm = multi_cfi(d.params, b, d.theta);
      const double fc = continuous_cfi(d.params, d.theta);
      CHECK(fb <= fm * (1 + 1e-12) + 1e-8);
      CHECK(fm <= fc * (1 + 1e-12) + 1e-8);
    }
  }
}

TEST_CASE("scaled signal") {
  const ModelParams p = derive_params(make_state(4.0, Squeeze::from_r(0.7), 0.9));
  CHECK(scaled_signal(p, BinningScheme::scaled_binary(0.15, p), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  for (double t : {-0.8, 0.1, 1.3}) {
    const OutcomeProbs q = outcome_probs(p, BinningScheme::binary(0.15, 1.0), t);
    CHECK(scaled_signal(p, BinningScheme::three_outcome(0.15, 0.0, 1.0, 0.0), t) == doctest::Approx(q.p_zero));
    CHECK(scaled_signal(p, BinningScheme::three_outcome(0.15, -1.0, 0.0, 1.0), t) ==
          doctest::Approx(q.p_plus - q.p_minus));
  }
}

TEST_CASE("fringe width") {
  const ModelParams p427 = derive_params(make_state(std::sqrt(427.0), Squeeze::from_sinh2r(0.687), 0.58));
  const double w01 = fwhm_scaled_p0(p427, BinningScheme::scaled_binary(0.1, p427));
  const double w05 = fwhm_scaled_p0(p427, BinningScheme::scaled_binary(0.5, p427));
  CHECK(w01 < w05);
  // The half-maximum is a true crossing of the scaled signal.
  const BinningScheme s = BinningScheme::scaled_binary(0.1, p427);
  CHECK(scaled_signal(p427, s, w01 / 2) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(scaled_signal(p427, s, 0.9 * w01 / 2) > 0.5);

  // Monotone in a on a fixed state.
  double prev = 0.0;
  for (double a = 0.05; a <= 1.0; a += 0.05) {
    const double w = fwhm_scaled_p0(p427, BinningScheme::scaled_binary(a, p427));
    CHECK(w >= prev);
    prev = w;
  }
  // No squeezing, wide bin: the scaled signal stays above one half everywhere.
  const ModelParams faint = derive_params(make_state(0.1, Squeeze::from_r(0.0), 1.0));
  CHECK_THROWS_AS(fwhm_scaled_p0(faint, BinningScheme::scaled_binary(3.0, faint)), NumericalError);
}

TEST_CASE("optimal sensitivities") {
  SUBCASE("coherent bound") {
    const ModelParams coh = derive_params(make_state(3.0, Squeeze::from_r(0.0), 1.0));
    const BestSensitivity b = best_binary_sensitivity(coh, BinningScheme::binary(5.0, 1.0));
    CHECK(b.value.value >= 1.0 / 3.0);
  }
  SUBCASE("three-outcome optimum is at the fringe centre for narrow bins") {
    const ModelParams p = fig3_params(200);
    const BinningScheme s = BinningScheme::scaled_binary(0.1, p);
    const BestSensitivity m = best_multi_sensitivity(p, s);
    CHECK(m.value.value == doctest::Approx(1.0 / std::sqrt(multi_cfi(p, s, 0.0))).epsilon(1e-9));
    CHECK(std::abs(m.theta) < 1e-4);
  }
  SUBCASE("improvement metrics") {
    CHECK(improvement_db(0.1, 100.0) == doctest::Approx(0.0).scale(1.0));
    CHECK(improvement_db(0.1 / 1.7, 100.0) == doctest::Approx(10.0 * std::log10(1.7)));
    CHECK(improvement_db(0.1 / 1.7, 100.0) == doctest::Approx(2.3045).epsilon(1e-4));
    CHECK(scaling_exponent(0.1, 100.0) == doctest::Approx(0.5));
    CHECK(scaling_exponent(0.01, 100.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(improvement_db(0.0, 100.0), ValidationError);
  }
}
