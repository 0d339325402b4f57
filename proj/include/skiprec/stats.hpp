#pragma once

#include <span>

namespace skiprec {

/// I_x(a, b) by the modified-Lentz continued fraction, switching to the
/// symmetric form 1 - I_{1-x}(b, a) where that converges faster.
double regularized_incomplete_beta(double a, double b, double x);

/// P(T <= t) for Student's t with `df` degrees of freedom.
double student_t_cdf(double t, double df);

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-sided
  // Set when the paired differences have zero spread; p is then 0 (non-zero
  // mean) or 1 (zero mean) and t is +-inf or 0.
  bool degenerate = false;
};

/// Paired two-sided t-test on a - b. Requires equal lengths >= 2.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace skiprec
