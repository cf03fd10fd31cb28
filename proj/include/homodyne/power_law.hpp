#pragma once

#include <span>

namespace homodyne {

/// value = prefactor * x^(-exponent), fitted by least squares on
/// (ln x, ln value).
struct PowerLawFit {
  double prefactor = 0.0;
  double exponent = 0.0;
  double residual = 0.0;  ///< RMS of the log residuals
  std::size_t points = 0;
};

/// Needs >= 3 points with positive, finite x and value and at least two
/// distinct x. Throws ValidationError otherwise.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> value);

}  // namespace homodyne
