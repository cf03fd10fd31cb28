#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "homodyne/binning.hpp"
#include "homodyne/errors.hpp"
#include "homodyne/gaussian_model.hpp"
#include "homodyne/oracles.hpp"
#include "test_support.hpp"

using namespace homodyne;
using support::kPi;

namespace {

double norm2(const oracle::PhaseSpacePoint& q) { return q.x_a * q.x_a + q.p_a * q.p_a + q.x_b * q.x_b + q.p_b * q.p_b; }

}  // namespace

TEST_CASE("input Wigner function") {
  SUBCASE("vacuum in both ports") {
    const ModelParams p = derive_params(make_state(0.0, Squeeze::from_r(0.0), 1.0));
    for (oracle::PhaseSpacePoint q : {oracle::PhaseSpacePoint{0, 0, 0, 0}, oracle::PhaseSpacePoint{0.3, -0.2, 0.1, 0.5}}) {
      const double expected = 4.0 / (kPi * kPi) * std::exp(-2.0 * norm2(q));
      CHECK(oracle::wigner_in(p, q) == doctest::Approx(expected).epsilon(1e-13));
    }
  }
  SUBCASE("peak sits on the coherent amplitude") {
    const ModelParams p = derive_params(make_state(2.5, Squeeze::from_r(0.7), 0.6));
    const double peak = oracle::wigner_in(p, {2.5, 0, 0, 0});
    for (double d : {-0.05, 0.05}) {
      CHECK(oracle::wigner_in(p, {2.5 + d, 0, 0, 0}) < peak);
      CHECK(oracle::wigner_in(p, {2.5, d, 0, 0}) < peak);
      CHECK(oracle::wigner_in(p, {2.5, 0, d, 0}) < peak);
      CHECK(oracle::wigner_in(p, {2.5, 0, 0, d}) < peak);
    }
  }
}

TEST_CASE("phase-space map of the interferometer") {
  const oracle::PhaseSpacePoint q{0.7, -1.1, 0.4, 2.0};
  SUBCASE("theta = 0 exchanges the ports") {
    const auto t = oracle::output_transform(q, 0.0);
    CHECK(t.x_a == doctest::Approx(q.x_b).epsilon(1e-15));
    CHECK(t.p_a == doctest::Approx(q.p_b).epsilon(1e-15));
    CHECK(t.x_b == doctest::Approx(-q.x_a).epsilon(1e-15));
    CHECK(t.p_b == doctest::Approx(-q.p_a).epsilon(1e-15));
  }
  SUBCASE("theta = pi keeps the ports") {
    const auto t = oracle::output_transform(q, kPi);
    CHECK(t.x_a == doctest::Approx(-q.x_a).epsilon(1e-14));
    CHECK(t.p_a == doctest::Approx(-q.p_a).epsilon(1e-14));
    CHECK(t.x_b == doctest::Approx(q.x_b).epsilon(1e-14));
    CHECK(t.p_b == doctest::Approx(q.p_b).epsilon(1e-14));
  }
  SUBCASE("norm preserved") {
    support::ParamGen gen(11);
    for (int i = 0; i < 200; ++i) {
      const oracle::PhaseSpacePoint r{gen.uniform(-5, 5), gen.uniform(-5, 5), gen.uniform(-5, 5), gen.uniform(-5, 5)};
      const double theta = gen.uniform(-kPi, kPi);
      CHECK(norm2(oracle::output_transform(r, theta)) == doctest::Approx(norm2(r)).epsilon(1e-12));
    }
  }
}

TEST_CASE("numerical quadrature marginal") {
  SUBCASE("coherent light at the fringe centre") {
    const ModelParams p = derive_params(make_state(1.0, Squeeze::from_r(0.0), 1.0));
    const auto m = oracle::marginal_pdf_numeric(p, 0.0, 0.0);
    CHECK(m.value == doctest::Approx(std::sqrt(2.0 / kPi)).epsilon(1e-7));
  }
  SUBCASE("agrees with the closed form") {
    const ModelParams p = derive_params(make_state(std::sqrt(199.3), Squeeze::from_sinh2r(0.7), 1.0));
    const ModelParams q = derive_params(make_state(3.0, Squeeze::from_r(1.2), 0.58));
    for (const ModelParams* mp : {&p, &q}) {
      for (double theta : {-2.0, 0.0, 0.3, 1.4}) {
        const double m = mean_signal(*mp, theta);
        const double sd = std::sqrt(quadrature_variance(*mp, theta));
        for (double z : {-3.0, -0.5, 0.0, 1.0, 2.5}) {
          const double x = m + z * sd;
          const double exact = quadrature_pdf(*mp, theta, x);
          CAPTURE(theta);
          CAPTURE(z);
          CHECK(std::abs(oracle::marginal_pdf_numeric(*mp, theta, x).value - exact) <= 1e-7 * exact + 1e-12);
        }
      }
    }
  }
  SUBCASE("normalized") {
    const ModelParams p = derive_params(make_state(2.0, Squeeze::from_r(0.5), 0.7));
    const double theta = 0.4;
    const double m = mean_signal(p, theta);
    const double sd = std::sqrt(quadrature_variance(p, theta));
    auto f = [&](double x) { return oracle::marginal_pdf_numeric(p, theta, x).value; };
    const double total = boost::math::quadrature::gauss<double, 30>::integrate(f, m - 8 * sd, m + 8 * sd);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("quantum Fisher information in the Fock basis") {
  SUBCASE("vacuum") {
    const InputState s = make_state(0.0, Squeeze::from_r(0.0), 1.0);
    CHECK(oracle::qfi_fock(s, 4).fq == doctest::Approx(0.0));
  }
  SUBCASE("coherent light alone") {
    for (double alpha : {0.5, 1.0, 3.0}) {
      const InputState s = make_state(alpha, Squeeze::from_r(0.0), 1.0);
      const auto q = oracle::qfi_fock(s, oracle::required_cutoff(s, 1e-14));
      CHECK(q.fq == doctest::Approx(2.0 * alpha * alpha).epsilon(1e-9));
    }
  }
  SUBCASE("variance equals the moment decomposition") {
    support::ParamGen gen(5);
    for (int i = 0; i < 10; ++i) {
      const InputState s = make_state(gen.uniform(0.0, 3.0), Squeeze::from_r(gen.uniform(0.0, 1.0)), 1.0);
      const auto q = oracle::qfi_fock(s, oracle::required_cutoff(s, 1e-13));
      CHECK(q.fq == doctest::Approx(q.fq_moments).epsilon(1e-9));
    }
  }
  SUBCASE("converged in the cutoff") {
    const InputState s = make_state(2.0, Squeeze::from_r(0.8), 1.0);
    const std::size_t nc = oracle::required_cutoff(s, 1e-12);
    const double a = oracle::qfi_fock(s, nc).fq;
    const double b = oracle::qfi_fock(s, nc + 10).fq;
    CHECK(std::abs(a - b) <= 1e-8 * b);
  }
  SUBCASE("bounds every classical information") {
    support::ParamGen gen(9);
    for (int i = 0; i < 8; ++i) {
      const InputState s = make_state(gen.uniform(0.0, 3.0), Squeeze::from_r(gen.uniform(0.0, 1.0)), 1.0);
      const ModelParams p = derive_params(s);
      const double fq = oracle::qfi_fock(s, oracle::required_cutoff(s, 1e-12)).fq;
      const BinningScheme bins = BinningScheme::binary(gen.uniform(0.02, 1.0), 1.0);
      for (int j = 0; j <= 20; ++j) {
        const double theta = -kPi / 2 + kPi * j / 20.0;
        const double f = continuous_cfi(p, theta);
        CHECK(f <= fq * (1 + 1e-6));
        CHECK(multi_cfi(p, bins, theta) <= f * (1 + 1e-6));
      }
    }
  }
  SUBCASE("errors") {
    const InputState s = make_state(3.0, Squeeze::from_r(1.0), 1.0);
    CHECK_THROWS_AS(oracle::qfi_fock(s, 5), NumericalError);
    CHECK_THROWS_AS(oracle::qfi_fock(make_state(1.0, Squeeze::from_r(0.5), 0.9), 30), ValidationError);
  }
}
