#ifndef NEGDEP_CORE_HPP
#define NEGDEP_CORE_HPP

#include <vector>

#include "negdep/types.hpp"

namespace negdep {

/// Ascending order statistics p_(1) <= ... <= p_(K).
std::vector<double> order_statistics(const PVector& p);

/// 0-based index permutation sorting p ascending, ties broken by original
/// index (stable). order_statistics(p)[r] == p[order_permutation(p)[r]].
std::vector<int> order_permutation(const PVector& p);

/// K-th harmonic number ell_K = sum_{k=1..K} 1/k, summed smallest term first.
double harmonic_ell(int K);

}  // namespace negdep

#endif  // NEGDEP_CORE_HPP
