#pragma once

#include <span>

namespace archbench {

/// Quantile by linear interpolation between order statistics, inclusive
/// method: position (n - 1) * p over the sorted sample. Sorted input
/// required.
double quantile_sorted(std::span<const double> sorted, double p);

double mean(std::span<const double> values);

/// Population standard deviation (divides by n).
double stddev(std::span<const double> values);

}  // namespace archbench
