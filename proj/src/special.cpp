#include "homodyne/special.hpp"

#include <cmath>
#include <limits>

#include <boost/math/special_functions/erf.hpp>

namespace homodyne {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.41421356237309504880;
}  // namespace

double erf(double x) { return std::erf(x); }

double erfc(double x) { return std::erfc(x); }

double erf_diff(double x, double y) {
  if (x >= 0.0 && y >= 0.0) return std::erfc(x) - std::erfc(y);
  if (x <= 0.0 && y <= 0.0) return std::erfc(-y) - std::erfc(-x);
  return std::erf(y) - std::erf(x);
}

double erf_inv(double x) {
  if (std::isnan(x)) return x;
  if (x <= -1.0) return x == -1.0 ? -kInf : std::numeric_limits<double>::quiet_NaN();
  if (x >= 1.0) return x == 1.0 ? kInf : std::numeric_limits<double>::quiet_NaN();
  return boost::math::erf_inv(x);
}

double erfc_inv(double q) {
  if (std::isnan(q)) return q;
  if (q <= 0.0) return q == 0.0 ? kInf : std::numeric_limits<double>::quiet_NaN();
  if (q >= 2.0) return q == 2.0 ? -kInf : std::numeric_limits<double>::quiet_NaN();
  return boost::math::erfc_inv(q);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_quantile(double u) {
  // Lower half through erfc_inv(2u) keeps full relative precision in the tail.
  if (u < 0.5) return -kSqrt2 * erfc_inv(2.0 * u);
  return kSqrt2 * erfc_inv(2.0 * (1.0 - u));
}

}  // namespace homodyne
