#include "homodyne/power_law.hpp"

#include <cmath>
#include <vector>

#include "homodyne/errors.hpp"

namespace homodyne {

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> value) {
  if (x.size() != value.size()) throw ValidationError("power-law fit: x and value differ in length");
  if (x.size() < 3) throw ValidationError("power-law fit needs at least 3 points");
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !std::isfinite(x[i])) throw ValidationError("power-law fit: x values must be positive and finite");
    if (!(value[i] > 0.0) || !std::isfinite(value[i])) {
      throw ValidationError("power-law fit: values must be positive and finite");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(value[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw ValidationError("power-law fit needs at least two distinct x values");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = ly[i] - (intercept + slope * lx[i]);
    ss += d * d;
  }
  return {std::exp(intercept), -slope, std::sqrt(ss / static_cast<double>(n)), n};
}

}  // namespace homodyne
