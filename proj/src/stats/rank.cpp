#include "stats/rank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/error.hpp"

namespace archbench {

namespace {

void require_pair(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::parameter, "correlation inputs differ in length");
  }
  if (a.size() < 2) {
    throw Error(ErrorCode::parameter, "correlation needs at least two points");
  }
}

// Number of tied pairs summed over runs of equal values in a sorted range.
template <typename It, typename Eq>
double tied_pairs(It first, It last, Eq eq) {
  double total = 0;
  while (first != last) {
    auto run = first;
    while (run != last && eq(*run, *first)) ++run;
    const double n = static_cast<double>(run - first);
    total += n * (n - 1) / 2;
    first = run;
  }
  return total;
}

// Sorts `v` and returns the number of inversions (strictly decreasing pairs).
double merge_count(std::vector<double> &v) {
  std::vector<double> buf(v.size());
  double swaps = 0;
  for (std::size_t width = 1; width < v.size(); width *= 2) {
    for (std::size_t lo = 0; lo < v.size(); lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, v.size());
      const std::size_t hi = std::min(lo + 2 * width, v.size());
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (v[j] < v[i]) {
          swaps += static_cast<double>(mid - i);
          buf[k++] = v[j++];
        } else {
          buf[k++] = v[i++];
        }
      }
      while (i < mid) buf[k++] = v[i++];
      while (j < hi) buf[k++] = v[j++];
    }
    std::swap(v, buf);
  }
  return swaps;
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i + j) + 2.0) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  require_pair(a, b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0 || sbb <= 0) {
    throw Error(ErrorCode::undefined_correlation, "zero variance in correlation input");
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double spearman(std::span<const double> pred, std::span<const double> truth) {
  require_pair(pred, truth);
  const auto rp = average_ranks(pred);
  const auto rt = average_ranks(truth);
  return pearson(rp, rt);
}

double kendall_tau_b(std::span<const double> a, std::span<const double> b) {
  require_pair(a, b);
  const std::size_t n = a.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a[i] < a[j] || (a[i] == a[j] && b[i] < b[j]);
  });
  const double n0 = static_cast<double>(n) * static_cast<double>(n - 1) / 2;
  const double ties_a = tied_pairs(order.begin(), order.end(),
                                   [&](std::size_t i, std::size_t j) { return a[i] == a[j]; });
  const double ties_ab = tied_pairs(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a[i] == a[j] && b[i] == b[j];
  });
  std::vector<double> bs(n);
  for (std::size_t k = 0; k < n; ++k) bs[k] = b[order[k]];
  const double discordant = merge_count(bs);  // bs is now sorted
  const double ties_b = tied_pairs(bs.begin(), bs.end(), std::equal_to<double>());
  const double denom = std::sqrt((n0 - ties_a) * (n0 - ties_b));
  if (denom <= 0) {
    throw Error(ErrorCode::undefined_correlation, "zero variance in Kendall tau input");
  }
  const double concordant_minus_discordant = n0 - ties_a - ties_b + ties_ab - 2 * discordant;
  return std::clamp(concordant_minus_discordant / denom, -1.0, 1.0);
}

}  // namespace archbench
