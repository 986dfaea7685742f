#pragma once

#include <span>

namespace archbench {

enum class Alternative { two_sided, less, greater };

struct WilcoxonResult {
  double w_plus = 0.0;  // sum of ranks of positive differences
  int n = 0;            // non-zero differences
  double p_value = 1.0;
};

/// Exact signed-rank test on the paired differences x - y. Zero differences
/// are dropped and tied magnitudes share their average rank; the null
/// distribution is enumerated over the resulting ranks. `less` tests
/// whether x tends to be smaller than y. Throws Error(degenerate) when every
/// difference is zero and Error(parameter) on length mismatch or n > 60.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                    Alternative alt = Alternative::two_sided);

}  // namespace archbench
