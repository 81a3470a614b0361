#pragma once

#include <span>

namespace ecm {

double mean(std::span<const double> xs);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double stddev(std::span<const double> xs);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope * x + intercept. Throws ParameterError
/// when fewer than two distinct x values are given.
LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);

struct RankTest {
  double u = 0.0;  // Mann-Whitney U of the first sample
  double z = 0.0;
  double p_value = 1.0;  // two-sided
};

/// Mann-Whitney U test, normal approximation with tie and continuity
/// correction. Throws ParameterError when either sample is empty.
RankTest mann_whitney(std::span<const double> a, std::span<const double> b);

}  // namespace ecm
