#pragma once

// Closed-form Gaussian model of the squeezed-state interferometer read out by
// homodyne detection of the p quadrature at one output port.
//
// The input is a real coherent amplitude alpha0 in one port and a squeezed
// vacuum (squeeze magnitude r, purity rho) in the other, with the
// phase-matched choice arg(alpha0) = 0, arg(xi0) = pi. For a phase shift theta
// the measured quadrature is Gaussian:
//
//   P(p | theta) = sqrt(2 / (pi eta)) exp(-2 (p + alpha0 sin(theta) / 2)^2 / eta)
//
// with the phase-dependent noise factor eta(theta) built from
// mu = rho^2 e^{-2r} and nu = e^{2r}.

namespace homodyne {

/// Squeeze magnitude r. Figures and experiments quote squeezing as r, as
/// e^{-r}, or as the squeezed-vacuum photon number sinh^2 r; all three
/// construct the same value.
class Squeeze {
 public:
  static Squeeze from_r(double r);
  static Squeeze from_e_minus_r(double e_minus_r);
  static Squeeze from_sinh2r(double sinh2r);

  double r() const { return r_; }
  double e_minus_r() const;
  double sinh2r() const;

 private:
  explicit Squeeze(double r) : r_(r) {}
  double r_;
};

/// Physical configuration of the two input fields.
struct InputState {
  double alpha0 = 0.0;  ///< real coherent amplitude, >= 0
  double r = 0.0;       ///< squeeze magnitude, >= 0
  double purity = 1.0;  ///< purity of the squeezed vacuum, in (0, 1]
};

/// Validating constructors. Throw ValidationError.
InputState make_state(double alpha0, Squeeze squeeze, double purity = 1.0);
/// alpha0 derived from the total photon number: alpha0^2 = n_bar - sinh^2 r.
InputState make_state_with_n_bar(double n_bar, Squeeze squeeze, double purity = 1.0);

void validate(const InputState& state);

/// Derived constants consumed by every probability formula.
struct ModelParams {
  double mu_tilde = 1.0;  ///< rho^2 e^{-2r}
  double nu_tilde = 1.0;  ///< e^{2r}
  double n_bar = 0.0;     ///< alpha0^2 + sinh^2 r
  double alpha0 = 0.0;
  double r = 0.0;
  double purity = 1.0;
};

ModelParams derive_params(const InputState& state);

/// Phase-dependent noise factor; the quadrature variance is eta / 4.
double eta(const ModelParams& params, double theta);
/// d eta / d theta.
double eta_derivative(const ModelParams& params, double theta);

/// Mean measured quadrature, -(alpha0 / 2) sin(theta).
double mean_signal(const ModelParams& params, double theta);
double quadrature_variance(const ModelParams& params, double theta);
double quadrature_pdf(const ModelParams& params, double theta, double p);

/// Fisher information of the unbinned quadrature record:
///   (alpha0 cos theta)^2 / eta + eta'^2 / (2 eta^2)
double continuous_cfi(const ModelParams& params, double theta);

struct CrbMin {
  double exact;   ///< 1 / sqrt(F(0)) = e^{-r} / alpha0
  double approx;  ///< e^{-r} / sqrt(n_bar), valid for alpha0^2 >> sinh^2 r
};

/// Best sensitivity of the unbinned measurement, reached at theta = 0.
/// Divergent (exact = +inf) when alpha0 = 0.
CrbMin crb_min(const ModelParams& params);

/// Shot-noise limit 1 / sqrt(n_bar).
double shot_noise_limit(double n_bar);

}  // namespace homodyne
