#ifndef NEGDEP_PMERGE_HPP
#define NEGDEP_PMERGE_HPP

#include <optional>

#include "negdep/types.hpp"

namespace negdep {

// Multiplicative anti-conservativeness constants for the Simes combination
// of weakly negatively dependent p-values.
inline constexpr double kSimesFactorAllAlpha = 3.4;    // valid on (0,1)
inline constexpr double kSimesFactorSmallAlpha = 1.26; // valid on (0,0.1]
inline constexpr double kNestedSimesSmallAlphaFactor = 1.52;  // two-level, alpha < 0.083
inline constexpr double kNestedSimesSmallAlphaMax = 0.083;

/// Simes combination: min over k of (K/k) * p_(k).
double simes(const PVector& p);

/// Weighted Simes: order statistics of q_k = p_k / w_k. Conventions for zero
/// weights: p/0 = +inf for p > 0, 0/0 = 0. Result clamped to [0,1].
double weighted_simes(const PVector& p, const WeightVector& w);

/// Additive type-1 error bound alpha + sum_{k=2..K} C(K,k) (alpha k / K)^k,
/// evaluated term-by-term in log space, clamped to [0,1].
double simes_bound_additive(double alpha, int K);

/// Succinct bound alpha + 2a^2 + (9/2)a^3 + (e a)^4 / (sqrt(8 pi) (1 - e a)),
/// clamped to [0,1]; equals 1 for alpha >= 1/e.
double simes_bound_tilde(double alpha);

/// Cubic bound alpha + 2 alpha^2 + 6 alpha^3, valid only on (0, 0.1].
double simes_bound_cubic(double alpha);

/// min(3.4, ell_K) * simes(p), clamped to [0,1]: a valid p-value under weak
/// negative dependence.
double simes_corrected_p(const PVector& p);

/// Every bound at one (alpha, K), as in the summary tables.
struct SimesBoundReport {
  double alpha = 0.0;
  double additive_general = 0.0;          // exact finite-K additive bound
  double succinct = 0.0;                  // unclamped succinct bound (+inf for alpha >= 1/e)
  std::optional<double> cubic;            // present only for alpha <= 0.1
  double tilde_s = 0.0;                   // succinct clamped to [0,1]
  double hommel = 0.0;                    // (ell_K * alpha) ^ 1, the any-dependence bound
  int K = 0;

  /// min(tilde_s, hommel): the dominating bound to report alongside both.
  double combined() const { return tilde_s < hommel ? tilde_s : hommel; }
};

SimesBoundReport bound_report(double alpha, int K);

/// Two-level Simes of per-group Simes values. The value itself is not a
/// p-value under negative association; multiply by one of the factors below.
struct SimesOfSimesResult {
  double value = 0.0;
  std::vector<double> group_values;     // inner Simes value per group
  /// min(3.4, ell_K)^2 with K = total number of merged hypotheses.
  double na_factor_total = 0.0;
  /// Same formula with K = number of groups (the outer combination size).
  double na_factor_groups = 0.0;
  double prd_factor = 1.0;              // no correction needed under PRD

  /// Conservative choice between the two ell_K readings (the larger factor).
  double na_factor() const {
    return na_factor_total > na_factor_groups ? na_factor_total : na_factor_groups;
  }
};

SimesOfSimesResult simes_of_simes(const PVector& p, const GroupPartition& groups);

}  // namespace negdep

#endif  // NEGDEP_PMERGE_HPP
