#pragma once

// Exponential weights w(x) = e^{-alpha(x) x} used to measure perturbations of
// the front.  The rate alpha(x) blends from alpha_minus (far behind, x <= -1)
// to alpha_plus (far ahead, x >= +1) through the C^2 quintic smoothstep, so
//
//   w(x) = e^{-alpha_minus x}  for x <= -1   (grows exponentially to the left)
//   w(x) = e^{-alpha_plus  x}  for x >= +1   (decays exponentially to the right)
//   w(0) = 1, and w is C^2 across the blend.
//
// The constant case alpha_minus = alpha_plus = 1 gives w = e^{-x} exactly,
// with w'/w = -1 and w''/w = 1 everywhere.

#include <stdexcept>
#include <string>

namespace fw {

struct WeightSpec {
  double alpha_minus = 1.0;  // in (0, 1]
  double alpha_plus = 1.0;   // > 0 (the front work uses 1)
};

struct WeightValues {
  double log_w = 0.0;
  double w = 1.0;
  double wp_over_w = 0.0;   // w'/w  = g'
  double wpp_over_w = 0.0;  // w''/w = g'' + (g')^2, g = log w
};

class WeightError : public std::invalid_argument {
 public:
  explicit WeightError(const std::string& what) : std::invalid_argument(what) {}
};

void require_valid(const WeightSpec& s);  // throws WeightError

WeightValues weight_eval(const WeightSpec& s, double x);

}  // namespace fw
