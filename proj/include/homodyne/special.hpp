#pragma once

// Error-function primitives used by the outcome probabilities and the sampler.
//
// erf/erfc come from the C library. The inverses are backed by Boost.Math,
// which is accurate to a few ulp over the whole domain. The only thing
// implemented here is the generalized difference erf(y) - erf(x), which must
// avoid the catastrophic cancellation of the naive form when both arguments
// sit deep in the same tail (the central bin probability far from the fringe
// peak).

namespace homodyne {

double erf(double x);
double erfc(double x);

/// erf(y) - erf(x), computed through erfc when x and y share a sign.
double erf_diff(double x, double y);

/// Inverse of erf on (-1, 1). Returns +-inf at +-1.
double erf_inv(double x);

/// Inverse of erfc on (0, 2). Returns +inf at 0 and -inf at 2.
double erfc_inv(double q);

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile for u in (0, 1).
double normal_quantile(double u);

}  // namespace homodyne
