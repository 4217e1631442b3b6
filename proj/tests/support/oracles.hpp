#ifndef NEGDEP_TESTS_ORACLES_HPP
#define NEGDEP_TESTS_ORACLES_HPP

// Independent reference implementations used only as test oracles. These
// deliberately avoid the library's code paths (no shared sort, no shared
// recurrence) so they can disagree with a buggy implementation.

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "negdep/types.hpp"

namespace negdep::test_oracles {

/// Literal BH step-up: order statistics by repeated min-extraction, k* by a
/// full O(K^2) scan of the definition, rejected set by selection.
inline RejectionSet bh_literal_scan(const PVector& p, double alpha) {
  const int K = p.size();
  auto kth_smallest = [&](int k) {  // 1-based
    std::vector<double> copy = p.values();
    double last = -1.0;
    for (int round = 0; round < k; ++round) {
      double best = 2.0;
      std::size_t at = 0;
      for (std::size_t i = 0; i < copy.size(); ++i) {
        if (copy[i] < best) {
          best = copy[i];
          at = i;
        }
      }
      last = best;
      copy.erase(copy.begin() + static_cast<std::ptrdiff_t>(at));
    }
    return last;
  };
  int k_star = 0;
  for (int k = 1; k <= K; ++k) {
    if (static_cast<double>(K) * kth_smallest(k) / static_cast<double>(k) <= alpha) k_star = k;
  }
  std::vector<std::pair<double, int>> keyed;
  for (int i = 0; i < K; ++i) keyed.emplace_back(p[i], i + 1);
  std::sort(keyed.begin(), keyed.end());
  RejectionSet out;
  out.k_star = k_star;
  for (int r = 0; r < k_star; ++r) {
    out.rejected.push_back(keyed[static_cast<std::size_t>(r)].second);
  }
  std::sort(out.rejected.begin(), out.rejected.end());
  return out;
}

/// Order-k U-statistic by explicit subset enumeration (K <= ~20).
inline double ustat_enumerated(const std::vector<double>& e, int k) {
  const int K = static_cast<int>(e.size());
  double sum = 0.0;
  long count = 0;
  for (unsigned mask = 0; mask < (1u << K); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    double prod = 1.0;
    for (int i = 0; i < K; ++i) {
      if (mask & (1u << i)) prod *= e[static_cast<std::size_t>(i)];
    }
    sum += prod;
    ++count;
  }
  return sum / static_cast<double>(count);
}

}  // namespace negdep::test_oracles

#endif  // NEGDEP_TESTS_ORACLES_HPP
