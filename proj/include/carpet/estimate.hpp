#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace carpet {

// Result of a numerical oracle. Sampling estimators fill std_error/samples;
// regressions fill the scale/count columns and the fit diagnostics.
struct Estimate {
  std::string method;
  double value = 0.0;

  double std_error = 0.0;
  std::size_t samples = 0;

  std::vector<double> scales;      // r, strictly decreasing
  std::vector<double> log_counts;  // log N_r
  double slope = 0.0;
  double intercept = 0.0;
  double residual_norm = 0.0;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_norm = 0.0;
};

// Ordinary least squares y = slope * x + intercept.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace carpet
