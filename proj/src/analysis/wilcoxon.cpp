#include "analysis/wilcoxon.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "common/error.hpp"
#include "stats/rank.hpp"

namespace archbench {

WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                    Alternative alt) {
  if (x.size() != y.size()) throw Error(ErrorCode::parameter, "paired samples differ in length");
  std::vector<double> diff, mag;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    if (d == 0) continue;
    diff.push_back(d);
    mag.push_back(std::abs(d));
  }
  if (diff.empty()) throw Error(ErrorCode::degenerate, "all paired differences are zero");
  if (diff.size() > 60) throw Error(ErrorCode::parameter, "exact test limited to 60 pairs");

  const auto ranks = average_ranks(mag);
  WilcoxonResult r;
  r.n = static_cast<int>(diff.size());
  // Doubled ranks are integers even with ties.
  std::vector<int> twice;
  int observed = 0, total = 0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    twice.push_back(static_cast<int>(std::lround(2 * ranks[i])));
    total += twice.back();
    if (diff[i] > 0) {
      r.w_plus += ranks[i];
      observed += twice.back();
    }
  }

  // counts[s] = number of sign assignments whose positive doubled-rank sum is s.
  std::vector<double> counts(static_cast<std::size_t>(total) + 1, 0.0);
  counts[0] = 1;
  int reach = 0;
  for (int w : twice) {
    for (int s = reach; s >= 0; --s) {
      if (counts[s] != 0) counts[s + w] += counts[s];
    }
    reach += w;
  }
  const double all = std::ldexp(1.0, r.n);
  double at_most = 0, at_least = 0;
  for (int s = 0; s <= total; ++s) {
    if (s <= observed) at_most += counts[s];
    if (s >= observed) at_least += counts[s];
  }
  switch (alt) {
    case Alternative::less: r.p_value = at_most / all; break;
    case Alternative::greater: r.p_value = at_least / all; break;
    case Alternative::two_sided: r.p_value = std::min(1.0, 2 * std::min(at_most, at_least) / all); break;
  }
  return r;
}

}  // namespace archbench
