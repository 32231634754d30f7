#pragma once

#include <span>
#include <vector>

namespace fracdt {

/// Least-squares slope of y against x.
double ls_slope(std::span<const double> x, std::span<const double> y);

/// Slope of log|y| against log x, fitted on the middle `keep` fraction of
/// the samples (both ends trimmed equally).
double loglog_slope(std::span<const double> x, std::span<const double> y, double keep = 0.6);

/// max/min of the values. 1 when all are zero, +inf when only the min is zero.
double spread(std::span<const double> values);

std::vector<double> geometric_sweep(double first, double last, int count);

}  // namespace fracdt
