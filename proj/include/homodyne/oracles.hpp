#pragma once

// Slow, independent reference evaluators for the closed-form model.
//
//  * The quadrature distribution rebuilt from first principles: the input
//    Wigner function pulled back through the interferometer's phase-space
//    map and integrated numerically over the three unobserved quadratures.
//  * The quantum Fisher information 4 Var(G), G = J_x - n/2, evaluated on the
//    pure input state |alpha0> (x) |xi0> in a truncated two-mode Fock basis.
//
// Neither path shares code with gaussian_model beyond ModelParams.

#include <cstddef>
#include <vector>

#include "homodyne/gaussian_model.hpp"

namespace homodyne::oracle {

/// alpha = x_a + i p_a, beta = x_b + i p_b.
struct PhaseSpacePoint {
  double x_a = 0.0;
  double p_a = 0.0;
  double x_b = 0.0;
  double p_b = 0.0;
};

/// Product Wigner function of the coherent state and the (mixed) squeezed
/// vacuum.
double wigner_in(const ModelParams& params, const PhaseSpacePoint& point);

/// (alpha, beta) -> (alpha~, beta~) with
///   alpha~ =  alpha (e^{i theta} - 1)/2 + beta (e^{i theta} + 1)/2
///   beta~  = -alpha (e^{i theta} + 1)/2 - beta (e^{i theta} - 1)/2
PhaseSpacePoint output_transform(const PhaseSpacePoint& point, double theta);

/// Output Wigner function W_in(output_transform(point, theta)).
double wigner_out(const ModelParams& params, const PhaseSpacePoint& point, double theta);

struct MarginalResult {
  double value;
  double error_estimate;
};

/// P(p | theta) by nested adaptive Gauss-Kronrod quadrature of wigner_out
/// over x_a, x_b and p_b. Each axis is integrated over +-12 standard
/// deviations of its conditional Gaussian, located by probing the log of
/// the integrand. Throws NumericalError when a quadrature fails to converge.
MarginalResult marginal_pdf_numeric(const ModelParams& params, double theta, double p, double rel_tol = 1e-7);

/// Two-mode state in the Fock basis |n_a, n_b>, n_a, n_b <= cutoff, stored
/// row-major in n_a.
struct FockState {
  std::size_t cutoff = 0;
  std::vector<double> amplitudes;  // real: alpha0 >= 0 and the phase-matched squeezing are real
  double truncation_tail = 0.0;    // 1 - norm^2 before renormalization

  double amplitude(std::size_t na, std::size_t nb) const { return amplitudes[na * (cutoff + 1) + nb]; }
};

/// |alpha0> (x) |xi0> with xi0 = -r, truncated at `cutoff` photons per mode
/// and renormalized. Pure states only (purity is ignored).
FockState make_input_fock_state(const InputState& state, std::size_t cutoff);

/// Smallest cutoff whose truncation tail is below tail_tol.
std::size_t required_cutoff(const InputState& state, double tail_tol = 1e-8);

struct QfiResult {
  double fq;              ///< 4 (<G^2> - <G>^2)
  double fq_moments;      ///< 4 (<J_x^2> + Var(n) / 4), the phase-matched decomposition
  double mean_g;          ///< <G>
  double truncation_tail;
  std::size_t cutoff;
};

/// Quantum Fisher information of the pure input for the generator
/// G = J_x - n/2. Requires purity == 1. Throws NumericalError when the
/// truncation tail exceeds tail_tol; the message carries the required cutoff.
QfiResult qfi_fock(const InputState& state, std::size_t cutoff, double tail_tol = 1e-8);

}  // namespace homodyne::oracle
