#pragma once

#include <stdexcept>
#include <string>

namespace homodyne {

/// Invalid physical or configuration input (negative squeezing, purity out of
/// range, empty grids, ...). The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a trustworthy answer: no bracket,
/// no half-maximum crossing, quadrature non-convergence, Fock truncation too
/// coarse. The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace homodyne
