#pragma once

#include <span>
#include <vector>

namespace archbench {

/// 1-based ranks, ties receive the average of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation; throws Error(undefined_correlation) when either
/// argument has zero variance.
double pearson(std::span<const double> a, std::span<const double> b);

/// Spearman rank correlation (Pearson correlation of average ranks).
double spearman(std::span<const double> pred, std::span<const double> truth);

/// Kendall tau-b with tie correction, computed in O(n log n) by counting
/// discordant pairs with a merge sort (Knight's method).
double kendall_tau_b(std::span<const double> a, std::span<const double> b);

}  // namespace archbench
