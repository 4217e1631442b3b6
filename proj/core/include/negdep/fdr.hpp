#ifndef NEGDEP_FDR_HPP
#define NEGDEP_FDR_HPP

#include <optional>

#include "negdep/types.hpp"

namespace negdep {

// FDR inflation constants under weak negative dependence: the sharp constant
// carried by the bound arithmetic and the rounded headline form.
inline constexpr double kSuNegProofConstant = 3.1792;
inline constexpr double kSuNegHeadlineConstant = 3.18;

/// BH step-up at level alpha: k* = max{k : K p_(k) / k <= alpha}, rejecting
/// the k* smallest p-values (ties broken by original index). Indices 1-based.
RejectionSet bh(const PVector& p, double alpha);

/// BY correction: BH at level alpha / ell_K, valid under arbitrary dependence.
RejectionSet by(const PVector& p, double alpha);

/// False discovery proportion F / max(R,1), with 0/0 = 0.
double fdp(const RejectionSet& r, const NullMask& mask);

/// FDR upper bounds for BH under weakly negatively dependent nulls.
struct FdrBoundReport {
  double alpha = 0.0;
  double su_neg_bound = 0.0;  // alpha (-ln alpha + 3.1792), clamped to [0,1]
  double hommel_bound = 0.0;  // ell_K * alpha (unclamped)
  double combined = 0.0;      // min(su_neg_bound, hommel_bound, 1)
  int K = 0;
  /// ell_K * alpha * K0 / K, available only when the null count is known
  /// (simulation settings; K0 is unobservable in practice).
  std::optional<double> hommel_k0_bound;
};

FdrBoundReport bh_fdr_bound_negdep(double alpha, int K,
                                   const NullMask* mask = nullptr);

/// The published K=2 specialization 2 alpha + alpha^2 - ln alpha, reproduced
/// verbatim; it exceeds 1 for all practical alpha, so both forms are exposed.
struct K2BoundValue {
  double raw = 0.0;
  double clamped = 0.0;
};

K2BoundValue bh_fdr_bound_k2(double alpha);

/// Simes-per-group then BH across groups at level alpha, uncorrected.
struct GroupBhResult {
  std::vector<double> group_simes;  // inner Simes value per group
  RejectionSet rejected_groups;     // 1-based group indices
  /// Group-level FDR guarantee under negative association:
  /// 3.4 alpha (-log(3.4 alpha) + 3.18), clamped to [0,1].
  double na_guarantee = 0.0;
  /// Guarantee under PRDS: alpha itself.
  double prds_guarantee = 0.0;
};

GroupBhResult group_simes_bh(const PVector& p, const GroupPartition& groups, double alpha);

}  // namespace negdep

#endif  // NEGDEP_FDR_HPP
