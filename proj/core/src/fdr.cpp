#include "negdep/fdr.hpp"

#include <algorithm>
#include <cmath>

#include "negdep/core.hpp"
#include "negdep/pmerge.hpp"

namespace negdep {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("alpha must lie in (0,1)");
  }
}

}  // namespace

RejectionSet bh(const PVector& p, double alpha) {
  check_alpha(alpha);
  const int K = p.size();
  const std::vector<int> order = order_permutation(p);
  // K p_(k) <= alpha k, scanned from the top so the first hit is k*.
  int k_star = 0;
  for (int k = K; k >= 1; --k) {
    if (p[order[static_cast<std::size_t>(k - 1)]] * static_cast<double>(K) <=
        alpha * static_cast<double>(k)) {
      k_star = k;
      break;
    }
  }
  RejectionSet result;
  result.k_star = k_star;
  result.rejected.reserve(static_cast<std::size_t>(k_star));
  for (int r = 0; r < k_star; ++r) {
    result.rejected.push_back(order[static_cast<std::size_t>(r)] + 1);
  }
  std::sort(result.rejected.begin(), result.rejected.end());
  return result;
}

RejectionSet by(const PVector& p, double alpha) {
  check_alpha(alpha);
  return bh(p, alpha / harmonic_ell(p.size()));
}

double fdp(const RejectionSet& r, const NullMask& mask) {
  if (r.k_star == 0) return 0.0;
  int false_discoveries = 0;
  for (int idx : r.rejected) {
    if (idx < 1 || idx > mask.size()) {
      throw std::invalid_argument("fdp: rejected index outside mask range");
    }
    if (mask[idx - 1]) ++false_discoveries;
  }
  return static_cast<double>(false_discoveries) / static_cast<double>(r.k_star);
}

FdrBoundReport bh_fdr_bound_negdep(double alpha, int K, const NullMask* mask) {
  check_alpha(alpha);
  if (K < 1) throw std::invalid_argument("bh_fdr_bound_negdep: K must be >= 1");
  FdrBoundReport r;
  r.alpha = alpha;
  r.K = K;
  r.su_neg_bound = std::clamp(alpha * (-std::log(alpha) + kSuNegProofConstant), 0.0, 1.0);
  r.hommel_bound = harmonic_ell(K) * alpha;
  r.combined = std::min({r.su_neg_bound, r.hommel_bound, 1.0});
  if (mask != nullptr) {
    if (mask->size() != K) {
      throw std::invalid_argument("bh_fdr_bound_negdep: mask size must equal K");
    }
    r.hommel_k0_bound = harmonic_ell(K) * alpha * static_cast<double>(mask->K0()) /
                        static_cast<double>(K);
  }
  return r;
}

K2BoundValue bh_fdr_bound_k2(double alpha) {
  check_alpha(alpha);
  K2BoundValue v;
  v.raw = 2.0 * alpha + alpha * alpha - std::log(alpha);
  v.clamped = std::min(v.raw, 1.0);
  return v;
}

GroupBhResult group_simes_bh(const PVector& p, const GroupPartition& groups, double alpha) {
  check_alpha(alpha);
  groups.check_bounds(p.size());
  GroupBhResult result;
  result.group_simes.reserve(static_cast<std::size_t>(groups.group_count()));
  for (const auto& g : groups.groups()) {
    std::vector<double> sub;
    sub.reserve(g.size());
    for (int idx : g) sub.push_back(p[idx - 1]);
    result.group_simes.push_back(simes(PVector(std::move(sub))));
  }
  result.rejected_groups = bh(PVector(result.group_simes), alpha);
  const double fa = kSimesFactorAllAlpha * alpha;
  result.na_guarantee = std::clamp(fa * (-std::log(fa) + kSuNegHeadlineConstant), 0.0, 1.0);
  result.prds_guarantee = alpha;
  return result;
}

}  // namespace negdep
