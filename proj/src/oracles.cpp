#include "homodyne/oracles.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "homodyne/errors.hpp"
#include "homodyne/numerics.hpp"

namespace homodyne::oracle {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kBoxHalfWidth = 12.0;  // in conditional standard deviations

double log_wigner_in(const ModelParams& params, const PhaseSpacePoint& z) {
  const double mu = params.mu_tilde;
  const double nu = params.nu_tilde;
  const double dx = z.x_a - params.alpha0;
  const double coherent = std::log(2.0 / kPi) - 2.0 * (dx * dx + z.p_a * z.p_a);
  const double squeezed = std::log(2.0 * std::sqrt(mu * nu) / kPi) - 2.0 * (mu * z.x_b * z.x_b + nu * z.p_b * z.p_b);
  return coherent + squeezed;
}

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 invert(const Mat3& m) {
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  if (!(std::abs(det) > 0.0) || !std::isfinite(det)) throw NumericalError("marginal oracle: singular curvature");
  Mat3 inv{};
  inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
  inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
  inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
  inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
  inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
  inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
  inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
  inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
  inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
  return inv;
}

// Quadratic probe of ln W_out restricted to the slice p_a = p. Central
// differences with unit step are exact for a quadratic up to round-off.
struct Probe {
  Vec3 center{};
  Mat3 precision{};  // minus the Hessian
  Mat3 covariance{};
};

Probe probe_slice(const ModelParams& params, double theta, double p) {
  auto L = [&](const Vec3& z) { return log_wigner_in(params, output_transform({z[0], p, z[1], z[2]}, theta)); };
  const Vec3 origin{0.0, 0.0, 0.0};
  const double l0 = L(origin);
  Vec3 grad{};
  Mat3 h{};
  for (int i = 0; i < 3; ++i) {
    Vec3 zp = origin;
    Vec3 zm = origin;
    zp[i] = 1.0;
    zm[i] = -1.0;
    const double lp = L(zp);
    const double lm = L(zm);
    grad[i] = 0.5 * (lp - lm);
    h[i][i] = -(lp - 2.0 * l0 + lm);
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      Vec3 pp = origin, pm = origin, mp = origin, mm = origin;
      pp[i] = 1.0, pp[j] = 1.0;
      pm[i] = 1.0, pm[j] = -1.0;
      mp[i] = -1.0, mp[j] = 1.0;
      mm[i] = -1.0, mm[j] = -1.0;
      h[i][j] = h[j][i] = -0.25 * (L(pp) - L(pm) - L(mp) + L(mm));
    }
  }
  Probe pr;
  pr.precision = h;
  pr.covariance = invert(h);
  for (int i = 0; i < 3; ++i) {
    double c = 0.0;
    for (int j = 0; j < 3; ++j) c += pr.covariance[i][j] * grad[j];
    pr.center[i] = c;
  }
  for (int i = 0; i < 3; ++i) {
    if (!(h[i][i] > 0.0) || !(pr.covariance[i][i] > 0.0)) throw NumericalError("marginal oracle: integrand is not localized");
  }
  return pr;
}

void check(const num::Integral& r, double rel_tol, const char* axis) {
  if (!std::isfinite(r.value) || r.error > 1e3 * rel_tol * std::abs(r.value) + 1e-300) {
    throw NumericalError(std::string("marginal oracle: quadrature over ") + axis + " did not converge");
  }
}

}  // namespace

double wigner_in(const ModelParams& params, const PhaseSpacePoint& point) {
  return std::exp(log_wigner_in(params, point));
}

PhaseSpacePoint output_transform(const PhaseSpacePoint& point, double theta) {
  using C = std::complex<double>;
  const C alpha(point.x_a, point.p_a);
  const C beta(point.x_b, point.p_b);
  const C e = std::polar(1.0, theta);
  const C minus = 0.5 * (e - 1.0);
  const C plus = 0.5 * (e + 1.0);
  const C alpha_t = alpha * minus + beta * plus;
  const C beta_t = -alpha * plus - beta * minus;
  return {alpha_t.real(), alpha_t.imag(), beta_t.real(), beta_t.imag()};
}

double wigner_out(const ModelParams& params, const PhaseSpacePoint& point, double theta) {
  return wigner_in(params, output_transform(point, theta));
}

MarginalResult marginal_pdf_numeric(const ModelParams& params, double theta, double p, double rel_tol) {
  const Probe pr = probe_slice(params, theta, p);
  const Mat3& h = pr.precision;
  const Vec3& c = pr.center;

  // Conditional of (x_b, p_b) given x_a has precision h[1..2][1..2].
  const double det_bb = h[1][1] * h[2][2] - h[1][2] * h[2][1];
  if (!(det_bb > 0.0)) throw NumericalError("marginal oracle: degenerate conditional");
  const double var_xb = h[2][2] / det_bb;
  const double slope_xb = (h[2][2] * h[1][0] - h[1][2] * h[2][0]) / det_bb;
  const double sd_xa = std::sqrt(pr.covariance[0][0]);
  const double sd_xb = std::sqrt(var_xb);
  const double sd_pb = 1.0 / std::sqrt(h[2][2]);

  // The transform is evaluated with theta fixed, so its trig factors are
  // hoisted out of the innermost loop.
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  const double mu = params.mu_tilde;
  const double nu = params.nu_tilde;
  const double log_norm = std::log(2.0 / kPi) + std::log(2.0 * std::sqrt(mu * nu) / kPi);
  auto density = [&](double xa, double xb, double pb) {
    // alpha~ = alpha (e - 1)/2 + beta (e + 1)/2, beta~ = -alpha (e + 1)/2 - beta (e - 1)/2
    const double mr = 0.5 * (ct - 1.0), pl = 0.5 * (ct + 1.0), im = 0.5 * st;
    const double ar = xa * mr - p * im + xb * pl - pb * im;
    const double ai = xa * im + p * mr + xb * im + pb * pl;
    const double br = -(xa * pl - p * im) - (xb * mr - pb * im);
    const double bi = -(xa * im + p * pl) - (xb * im + pb * mr);
    const double dx = ar - params.alpha0;
    return std::exp(log_norm - 2.0 * (dx * dx + ai * ai) - 2.0 * (mu * br * br + nu * bi * bi));
  };

  auto inner = [&](double xa, double xb) {
    const double centre = c[2] - (h[2][0] * (xa - c[0]) + h[2][1] * (xb - c[1])) / h[2][2];
    auto f = [&](double pb) { return density(xa, xb, pb); };
    const num::Integral r = num::integrate(f, centre - kBoxHalfWidth * sd_pb, centre + kBoxHalfWidth * sd_pb, rel_tol);
    check(r, rel_tol, "p_b");
    return r.value;
  };
  auto middle = [&](double xa) {
    const double centre = c[1] - slope_xb * (xa - c[0]);
    auto f = [&](double xb) { return inner(xa, xb); };
    const num::Integral r = num::integrate(f, centre - kBoxHalfWidth * sd_xb, centre + kBoxHalfWidth * sd_xb, rel_tol);
    check(r, rel_tol, "x_b");
    return r.value;
  };
  const num::Integral outer = num::integrate(middle, c[0] - kBoxHalfWidth * sd_xa, c[0] + kBoxHalfWidth * sd_xa, rel_tol);
  check(outer, rel_tol, "x_a");
  return {outer.value, outer.error};
}

namespace {

// Per-mode photon-number amplitudes up to n_max (inclusive).
std::vector<double> coherent_amplitudes(double alpha, std::size_t n_max) {
  std::vector<double> c(n_max + 1);
  c[0] = std::exp(-0.5 * alpha * alpha);
  for (std::size_t n = 1; n <= n_max; ++n) c[n] = c[n - 1] * alpha / std::sqrt(static_cast<double>(n));
  return c;
}

// S(xi)|0> with xi = -r: only even photon numbers, amplitudes
// (tanh r)^m sqrt((2m)!) / (2^m m! sqrt(cosh r)).
std::vector<double> squeezed_vacuum_amplitudes(double r, std::size_t n_max) {
  std::vector<double> c(n_max + 1, 0.0);
  const double t = std::tanh(r);
  c[0] = 1.0 / std::sqrt(std::cosh(r));
  for (std::size_t n = 2; n <= n_max; n += 2) {
    c[n] = c[n - 2] * t * std::sqrt(static_cast<double>(n - 1) / static_cast<double>(n));
  }
  return c;
}

// Probability mass above the cutoff, summed explicitly over the tail.
double tail_mass(const std::vector<double>& amps, std::size_t cutoff) {
  double tail = 0.0;
  for (std::size_t n = amps.size(); n-- > cutoff + 1;) tail += amps[n] * amps[n];
  return tail;
}

struct ModeTails {
  double coherent;
  double squeezed;
  double joint() const { return coherent + squeezed - coherent * squeezed; }
};

ModeTails mode_tails(const InputState& state, std::size_t cutoff) {
  // The explicit tail sum runs far enough that the neglected remainder is
  // below double precision.
  const double a2 = state.alpha0 * state.alpha0;
  const double t2 = std::tanh(state.r) * std::tanh(state.r);
  std::size_t horizon = cutoff + 64 + static_cast<std::size_t>(a2 + 20.0 * state.alpha0);
  if (t2 > 0.0) horizon += static_cast<std::size_t>(-80.0 / std::log(t2));
  return {tail_mass(coherent_amplitudes(state.alpha0, horizon), cutoff),
          tail_mass(squeezed_vacuum_amplitudes(state.r, horizon), cutoff)};
}

}  // namespace

std::size_t required_cutoff(const InputState& state, double tail_tol) {
  validate(state);
  for (std::size_t nc = 1; nc < 20000; ++nc) {
    if (mode_tails(state, nc).joint() < tail_tol) return nc;
  }
  throw NumericalError("required_cutoff: no cutoff below 20000 meets the tail tolerance");
}

FockState make_input_fock_state(const InputState& state, std::size_t cutoff) {
  validate(state);
  if (cutoff < 1) throw ValidationError("Fock cutoff must be >= 1");
  const auto ca = coherent_amplitudes(state.alpha0, cutoff);
  const auto cb = squeezed_vacuum_amplitudes(state.r, cutoff);
  FockState fs;
  fs.cutoff = cutoff;
  fs.truncation_tail = mode_tails(state, cutoff).joint();
  fs.amplitudes.resize((cutoff + 1) * (cutoff + 1));
  double norm2 = 0.0;
  for (std::size_t i = 0; i <= cutoff; ++i) {
    for (std::size_t j = 0; j <= cutoff; ++j) {
      const double v = ca[i] * cb[j];
      fs.amplitudes[i * (cutoff + 1) + j] = v;
      norm2 += v * v;
    }
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (double& v : fs.amplitudes) v *= scale;
  return fs;
}

QfiResult qfi_fock(const InputState& state, std::size_t cutoff, double tail_tol) {
  validate(state);
  if (state.purity != 1.0) throw ValidationError("qfi_fock evaluates pure inputs only (purity must be 1)");
  const FockState fs = make_input_fock_state(state, cutoff);
  if (!(fs.truncation_tail < tail_tol)) {
    throw NumericalError("qfi_fock: truncation tail " + std::to_string(fs.truncation_tail) + " exceeds tolerance; use cutoff >= " +
                         std::to_string(required_cutoff(state, tail_tol)));
  }

  // Ladder operators can raise a mode by one, so the images live on a grid
  // one larger than the state itself.
  const std::size_t n = cutoff + 1;
  const std::size_t m = cutoff + 2;
  std::vector<double> jx(m * m, 0.0);
  double mean_n = 0.0;
  double mean_n2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double c = fs.amplitudes[i * n + j];
      if (c == 0.0) continue;
      // J_x = (a^dag b + b^dag a) / 2
      if (j >= 1) jx[(i + 1) * m + (j - 1)] += 0.5 * std::sqrt(static_cast<double>((i + 1) * j)) * c;
      if (i >= 1) jx[(i - 1) * m + (j + 1)] += 0.5 * std::sqrt(static_cast<double>(i * (j + 1))) * c;
      const double tot = static_cast<double>(i + j);
      mean_n += tot * c * c;
      mean_n2 += tot * tot * c * c;
    }
  }
  // G psi = J_x psi - (n/2) psi
  double mean_g = 0.0;
  double mean_g2 = 0.0;
  double mean_jx2 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double c = (i < n && j < n) ? fs.amplitudes[i * n + j] : 0.0;
      const double w = jx[i * m + j];
      const double g = w - 0.5 * static_cast<double>(i + j) * c;
      mean_g += c * g;
      mean_g2 += g * g;
      mean_jx2 += w * w;
    }
  }
  QfiResult out;
  out.fq = 4.0 * (mean_g2 - mean_g * mean_g);
  out.fq_moments = 4.0 * (mean_jx2 + 0.25 * (mean_n2 - mean_n * mean_n));
  out.mean_g = mean_g;
  out.truncation_tail = fs.truncation_tail;
  out.cutoff = cutoff;
  return out;
}

}  // namespace homodyne::oracle
